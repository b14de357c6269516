#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "flagcert/density.hpp"
#include "flagcert/enumerate.hpp"
#include "flagcert/rational.hpp"

namespace flagcert {

struct TypeBlock {
  TypeGraph type;
  std::vector<Flag> flags;
  int dimension() const { return static_cast<int>(flags.size()); }
};

/// The flag algebra bound as an SDP: minimise c subject to
/// d(H) + sum_i <Q_i, D_i(H)> <= c for every admissible H and Q_i PSD.
struct SdpProblem {
  ProblemSpec spec;
  std::vector<Graph> admissible;
  std::vector<Rational> density;                // d(H), edge density
  std::vector<TypeBlock> blocks;                // types with at least one flag
  std::vector<std::vector<PairDensityTable>> pair_density;  // [H][block]

  int constraint_count() const { return static_cast<int>(admissible.size()); }
  int dense_dimension() const;
  /// Bound when there is nothing to optimise: 0 without admissible graphs,
  /// max d(H) without blocks.
  bool degenerate() const { return admissible.empty() || blocks.empty(); }
  Rational degenerate_bound() const;
};

/// Enumerates admissible graphs, types and flags and fills every density
/// table; parallel over admissible graphs.
SdpProblem assemble(const ProblemSpec& spec);

/// Floating solution: one symmetric matrix per block and the bound c.
struct SdpSolution {
  std::vector<Eigen::MatrixXd> q;
  double bound = 0;
  /// Dual weights on admissible graphs when known (internal solver).
  std::vector<double> weights;
  /// max_H (d(H) + <Q, D(H)> - bound), computed after the fact.
  double worst_violation = 0;
  int iterations = 0;
};

/// Plain text, one line per nonzero entry: "H F F' p/q" with F <= F'.
void write_density_tables(const SdpProblem& p, std::ostream& out);

/// Coefficients d(H) + sum_i <Q_i, D_i(H)> in floating point.
std::vector<double> float_coefficients(const SdpProblem& p, const std::vector<Eigen::MatrixXd>& q);

// ---------------------------------------------------------------------------
// Sparse SDPA text format. Variables are x = (c, upper-triangle entries of
// each Q_i, row by row); blocks are the dense type blocks followed by one
// diagonal block holding c - d(H) - <Q, D(H)> >= 0 for each H.

struct SparseEntry {
  int matrix = 0;  // 0 = constant term, k >= 1 = variable k
  int block = 0;   // 1-based
  int i = 0;       // 1-based, i <= j
  int j = 0;
  double value = 0;
  auto operator<=>(const SparseEntry&) const = default;
};

struct SparseSdp {
  int variables = 0;
  std::vector<int> block_sizes;  // negative = diagonal
  std::vector<double> objective;
  std::vector<SparseEntry> entries;
  bool operator==(const SparseSdp&) const = default;
};

/// Throws DomainError for degenerate problems.
SparseSdp to_sparse_sdp(const SdpProblem& p);
void write_sparse_sdp(const SparseSdp& sdp, std::ostream& out);
SparseSdp parse_sparse_sdp(std::istream& in);

/// Decimal text for a rational: exact when the expansion terminates,
/// otherwise 17 significant digits.
std::string sdpa_number(const Rational& x);

/// Reads a solver solution file (line 1: the x vector; then quintuples
/// "matrix block i j value" for the dual slack (1) and primal (2) matrices).
SdpSolution import_solution(const SdpProblem& p, std::istream& in);

/// Writes `s` in the same format, so that import_solution reads it back.
void write_solution(const SdpProblem& p, const SdpSolution& s, std::ostream& out);

// ---------------------------------------------------------------------------
// Internal solver.

inline constexpr int kInternalMaxDenseDimension = 2000;
inline constexpr int kInternalMaxConstraints = 6000;

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 200;
  bool verbose = false;
};

/// Primal-dual interior point method (HKM direction, Mehrotra
/// predictor-corrector). CapacityError above the caps, SolverError when the
/// tolerances are not met.
SdpSolution solve_small(const SdpProblem& p, const SolverOptions& options = {});

}  // namespace flagcert
