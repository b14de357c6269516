#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flagcert/construct.hpp"
#include "flagcert/optimize.hpp"

namespace flagcert {

/// One type's part of a proof: Q = R Q' Rᵀ with Q' symmetric PSD.
struct CertificateBlock {
  RationalMatrix r;      // flags x dim(Q')
  RationalMatrix qdash;  // usually diagonal
};

/// Q = num / den exactly.
struct ScaledMatrix {
  int n = 0;
  std::vector<Integer> num;
  Integer den = 1;
  const Integer& operator()(int i, int j) const { return num[static_cast<size_t>(i) * n + j]; }
  Rational at(int i, int j) const;
};

/// Exact R Q' Rᵀ.
ScaledMatrix expand(const CertificateBlock& b);

/// d(H) + sum_i <Q_i, D_i(H)> for each H, exactly.
std::vector<Rational> exact_coefficients(const std::vector<Rational>& density,
                                         const std::vector<std::vector<PairDensityTable>>& tables,
                                         const std::vector<ScaledMatrix>& q);

struct RoundingOptions {
  Integer denominator{100000000};
  std::optional<Rational> target;
  bool diagonalize = true;
  double residual_threshold = 1e-3;
  int depth = 2;  // level truncation for iterated constructions
};

/// Rounds a pivoted LDLᵀ factorisation of each matrix: R = P L (entries
/// rounded to denominators <= q), Q' = rounded D. Exactly PSD by
/// construction. RoundingError if a matrix has an eigenvalue below -1e-8.
std::vector<CertificateBlock> round_simple(const std::vector<Eigen::MatrixXd>& q, const Integer& denominator);

/// Construction-guided rounding. Projects each Q onto the orthogonal
/// complement of the construction's limit flag vectors, rounds there, and
/// (with a target) adjusts Q' so that every graph with positive density in
/// the construction gets coefficient exactly target.
std::vector<CertificateBlock> round_with_construction(const SdpProblem& p, const SdpSolution& sol,
                                                      const ConstructionTemplate& c, const RoundingOptions& options);

struct Certificate {
  int r = 3;
  std::vector<Forbidden> forbidden;
  Rational bound;
  int order = 0;
  std::vector<Graph> admissible;
  std::vector<TypeGraph> types;
  std::vector<std::vector<Flag>> flags;
  std::vector<CertificateBlock> blocks;

  std::string description() const;
};

Certificate make_certificate(const SdpProblem& p, std::vector<CertificateBlock> blocks, const Rational& bound);

/// JSON text; one top-level field per line.
std::string emit_certificate(const Certificate& c);

/// Unknown fields are ignored; r and the forbidden lists fall back to the
/// description when absent. ParseError on malformed input.
Certificate parse_certificate(std::string_view text);

/// Symmetric matrix as upper-triangle rows: [[1,-2],[-2,5]] -> [[1,-2],[5]].
std::string upper_triangle_json(const RationalMatrix& m);
RationalMatrix parse_upper_triangle_json(std::string_view text);

struct VerificationReport {
  /// 0 = all stages passed; otherwise the first failing stage:
  /// 1 family, 2 densities, 3 PSD, 4 bound.
  int failed_stage = 0;
  std::string failure;

  bool admissible_family_complete = false;
  bool densities_ok = false;
  bool psd_ok = false;
  bool bound_ok = false;

  Rational claimed;
  Rational achieved;
  std::vector<Graph> admissible;   // certificate order
  std::vector<Rational> density;   // d(H)
  std::vector<Rational> coefficients;
  std::vector<int> tight;          // indices with coefficient == achieved

  bool verified() const { return failed_stage == 0 && bound_ok; }
};

/// Independent check; recomputes every density from scratch.
VerificationReport verify_certificate(const Certificate& c);

}  // namespace flagcert
