#include "flagcert/optimize.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "flagcert/density.hpp"
#include "flagcert/error.hpp"
#include "flagcert/parallel.hpp"

namespace flagcert {

int SdpProblem::dense_dimension() const {
  int total = 0;
  for (const auto& b : blocks) total += b.dimension();
  return total;
}

Rational SdpProblem::degenerate_bound() const {
  Rational best = 0;
  for (const Rational& d : density) best = std::max(best, d);
  return best;
}

SdpProblem assemble(const ProblemSpec& spec) {
  spec.validate();
  SdpProblem p;
  p.spec = spec;
  p.admissible = admissible_graphs(spec, spec.m);
  for (const Graph& h : p.admissible) p.density.push_back(spec.m >= spec.r ? edge_density(h) : Rational(0));
  for (TypeGraph& t : enumerate_types(spec)) {
    std::vector<Flag> flags = enumerate_flags(t, default_flag_order(spec.m, t.order()), spec);
    if (!flags.empty()) p.blocks.push_back({std::move(t), std::move(flags)});
  }
  p.pair_density.resize(p.admissible.size());
  parallel_for(p.admissible.size(), [&](std::size_t h) {
    auto& row = p.pair_density[h];
    for (const TypeBlock& b : p.blocks) row.push_back(pair_density_counts(b.type, b.flags, p.admissible[h]));
  });
  return p;
}

namespace {


std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_density_tables(const SdpProblem& p, std::ostream& out) {
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    const TypeBlock& block = p.blocks[b];
    out << "# type " << block.type.graph.notation() << "\n";
    for (size_t h = 0; h < p.admissible.size(); ++h) {
      const PairDensityTable& t = p.pair_density[h][b];
      for (const auto& e : t.entries) {
        if (e.i > e.j) continue;
        out << p.admissible[h].notation() << ' ' << block.flags[e.i].notation() << ' '
            << block.flags[e.j].notation() << ' ' << to_string(t.at(e.i, e.j)) << '\n';
      }
    }
  }
}

std::vector<double> float_coefficients(const SdpProblem& p, const std::vector<Eigen::MatrixXd>& q) {
  if (q.size() != p.blocks.size()) throw DomainError("one matrix per type block is required");
  std::vector<double> out;
  for (size_t h = 0; h < p.admissible.size(); ++h) {
    double c = to_double(p.density[h]);
    for (size_t b = 0; b < p.blocks.size(); ++b) {
      const PairDensityTable& d = p.pair_density[h][b];
      const double scale = 1.0 / static_cast<double>(d.denominator);
      for (const auto& e : d.entries) c += q[b](e.i, e.j) * e.count * scale;
    }
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SDPA

std::string sdpa_number(const Rational& value) {
  Rational x = value;
  x.canonicalize();
  // Terminating iff the reduced denominator is 2^a 5^b.
  Integer den = x.get_den();
  int twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", to_double(x));
    return buf;
  }
  const int digits = std::max(twos, fives);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Integer scaled = x.get_num() * (scale / x.get_den());
  const bool negative = scaled < 0;
  std::string s = Integer(abs(scaled)).get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<size_t>(digits) - s.size() + 1, '0');
    s.insert(s.size() - static_cast<size_t>(digits), ".");
  }
  return negative ? "-" + s : s;
}

SparseSdp to_sparse_sdp(const SdpProblem& p) {
  if (p.degenerate()) {
    throw DomainError(p.admissible.empty() ? "no admissible graphs: the bound is 0 and there is nothing to solve"
                                           : "no types with flags: the bound is max d(H) and there is nothing to solve");
  }
  const int nb = static_cast<int>(p.blocks.size());
  const int slack_block = nb + 1;
  SparseSdp s;
  for (const auto& b : p.blocks) s.block_sizes.push_back(b.dimension());
  s.block_sizes.push_back(-p.constraint_count());

  auto add = [&](int matrix, int block, int i, int j, const Rational& v) {
    if (v != 0) s.entries.push_back({matrix, block, i, j, std::strtod(sdpa_number(v).c_str(), nullptr)});
  };
  for (int h = 0; h < p.constraint_count(); ++h) add(0, slack_block, h + 1, h + 1, p.density[static_cast<size_t>(h)]);
  std::vector<int> first_var(static_cast<size_t>(nb), 0);
  int var = 1;
  for (int h = 0; h < p.constraint_count(); ++h) add(var, slack_block, h + 1, h + 1, 1);
  for (int b = 0; b < nb; ++b) {
    const int k = p.blocks[static_cast<size_t>(b)].dimension();
    first_var[static_cast<size_t>(b)] = var + 1;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) add(++var, b + 1, i + 1, j + 1, 1);
  }
  for (int h = 0; h < p.constraint_count(); ++h) {
    for (int b = 0; b < nb; ++b) {
      const int k = p.blocks[static_cast<size_t>(b)].dimension();
      const PairDensityTable& d = p.pair_density[static_cast<size_t>(h)][static_cast<size_t>(b)];
      std::map<int, std::int64_t> coeff;
      for (const auto& e : d.entries) {
        const int i = std::min(e.i, e.j), j = std::max(e.i, e.j);
        // Row-major upper triangle offset of (i, j).
        const int offset = i * k - i * (i - 1) / 2 + (j - i);
        coeff[first_var[static_cast<size_t>(b)] + offset] -= e.count;
      }
      for (const auto& [v, c] : coeff) {
        Rational x(c, d.denominator);
        x.canonicalize();
        add(v, slack_block, h + 1, h + 1, x);
      }
    }
  }
  s.variables = var;
  s.objective.assign(static_cast<size_t>(var), 0.0);
  s.objective[0] = 1;
  std::sort(s.entries.begin(), s.entries.end());
  return s;
}

void write_sparse_sdp(const SparseSdp& sdp, std::ostream& out) {
  out << sdp.variables << "\n" << sdp.block_sizes.size() << "\n";
  for (size_t i = 0; i < sdp.block_sizes.size(); ++i) out << (i ? " " : "") << sdp.block_sizes[i];
  out << "\n";
  for (size_t i = 0; i < sdp.objective.size(); ++i) out << (i ? " " : "") << shortest(sdp.objective[i]);
  out << "\n";
  for (const auto& e : sdp.entries)
    out << e.matrix << " " << e.block << " " << e.i << " " << e.j << " " << shortest(e.value) << "\n";
}

namespace {

class TokenReader {
 public:
  explicit TokenReader(std::string text) : in_(std::move(text)) {}
  bool next(std::string& tok) { return static_cast<bool>(in_ >> tok); }

  template <typename T>
  T number(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(std::string("unexpected end of input reading ") + what);
    return convert<T>(tok, what);
  }

  template <typename T>
  static T convert(const std::string& tok, const char* what) {
    T v{};
    const char* end = tok.data() + tok.size();
    if constexpr (std::is_same_v<T, double>) {
      char* stop = nullptr;
      v = std::strtod(tok.c_str(), &stop);
      if (stop != end || tok.empty()) throw ParseError(std::string("bad number '") + tok + "' in " + what);
    } else {
      auto res = std::from_chars(tok.data(), end, v);
      if (res.ec != std::errc() || res.ptr != end) throw ParseError(std::string("bad integer '") + tok + "' in " + what);
    }
    return v;
  }

 private:
  std::istringstream in_;
};

std::string strip_sdpa_punctuation(std::istream& in) {
  std::string text, line;
  while (std::getline(in, line)) {
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
    for (char& ch : line)
      if (ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == ',') ch = ' ';
    text += line;
    text += '\n';
  }
  return text;
}

}  // namespace

SparseSdp parse_sparse_sdp(std::istream& in) {
  TokenReader r(strip_sdpa_punctuation(in));
  SparseSdp s;
  s.variables = r.number<int>("constraint count");
  const int nblocks = r.number<int>("block count");
  if (s.variables < 0 || nblocks <= 0) throw ParseError("bad SDPA header");
  for (int b = 0; b < nblocks; ++b) {
    int size = r.number<int>("block sizes");
    if (size == 0) throw ParseError("block of size 0");
    s.block_sizes.push_back(size);
  }
  for (int k = 0; k < s.variables; ++k) s.objective.push_back(r.number<double>("objective"));
  std::string tok;
  while (r.next(tok)) {
    SparseEntry e;
    e.matrix = TokenReader::convert<int>(tok, "entry");
    e.block = r.number<int>("entry");
    e.i = r.number<int>("entry");
    e.j = r.number<int>("entry");
    e.value = r.number<double>("entry");
    if (e.matrix < 0 || e.matrix > s.variables) throw ParseError("entry matrix index out of range");
    if (e.block < 1 || e.block > nblocks) throw ParseError("entry block index out of range");
    const int size = std::abs(s.block_sizes[static_cast<size_t>(e.block - 1)]);
    if (e.i < 1 || e.j < 1 || e.i > size || e.j > size) throw ParseError("entry position outside its block");
    if (s.block_sizes[static_cast<size_t>(e.block - 1)] < 0 && e.i != e.j)
      throw ParseError("off-diagonal entry in a diagonal block");
    if (e.i > e.j) std::swap(e.i, e.j);
    s.entries.push_back(e);
  }
  std::sort(s.entries.begin(), s.entries.end());
  return s;
}

// ---------------------------------------------------------------------------
// Solution files

namespace {

int variable_count(const SdpProblem& p) {
  int n = 1;
  for (const auto& b : p.blocks) n += b.dimension() * (b.dimension() + 1) / 2;
  return n;
}

void finish_solution(const SdpProblem& p, SdpSolution& s) {
  const auto coef = float_coefficients(p, s.q);
  double worst = -INFINITY;
  for (double c : coef) worst = std::max(worst, c - s.bound);
  s.worst_violation = coef.empty() ? 0 : worst;
}

}  // namespace

SdpSolution import_solution(const SdpProblem& p, std::istream& in) {
  if (p.degenerate()) throw DomainError("degenerate problem has no solution file");
  std::string first;
  if (!std::getline(in, first)) throw ParseError("empty solution file");
  std::vector<double> y;
  {
    TokenReader r(first);
    std::string tok;
    while (r.next(tok)) y.push_back(TokenReader::convert<double>(tok, "solution vector"));
  }
  const int nvars = variable_count(p);
  if (static_cast<int>(y.size()) != nvars) {
    throw DomainError("dimension mismatch: solution vector has " + std::to_string(y.size()) +
                      " entries, problem has " + std::to_string(nvars) + " variables");
  }
  const int nb = static_cast<int>(p.blocks.size());
  SdpSolution s;
  s.bound = y[0];
  int var = 1;
  for (const auto& b : p.blocks) {
    const int k = b.dimension();
    Eigen::MatrixXd q(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) q(i, j) = q(j, i) = y[static_cast<size_t>(var++)];
    s.q.push_back(q);
  }

  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  TokenReader r(rest);
  std::vector<bool> primal_seen(static_cast<size_t>(nb + 1), false);
  s.weights.assign(p.admissible.size(), 0.0);
  std::string tok;
  while (r.next(tok)) {
    const int matrix = TokenReader::convert<int>(tok, "solution entry");
    int block = 0, i = 0, j = 0;
    double v = 0;
    try {
      block = r.number<int>("solution entry");
      i = r.number<int>("solution entry");
      j = r.number<int>("solution entry");
      v = r.number<double>("solution entry");
    } catch (const ParseError&) {
      throw ParseError("truncated solution file: incomplete entry after matrix index " + std::to_string(matrix));
    }
    if (matrix != 1 && matrix != 2) throw ParseError("solution entry matrix index must be 1 or 2");
    if (block < 1 || block > nb + 1) {
      throw DomainError("dimension mismatch: solution names block " + std::to_string(block) + ", problem has " +
                        std::to_string(nb + 1));
    }
    const int size = block <= nb ? p.blocks[static_cast<size_t>(block - 1)].dimension() : p.constraint_count();
    if (i < 1 || j < 1 || i > size || j > size) {
      throw DomainError("dimension mismatch: entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") outside block " + std::to_string(block) + " of size " + std::to_string(size));
    }
    if (matrix == 2) {
      primal_seen[static_cast<size_t>(block - 1)] = true;
      if (block == nb + 1 && i == j) s.weights[static_cast<size_t>(i - 1)] = v;
    }
  }
  if (!primal_seen[static_cast<size_t>(nb)]) {
    throw ParseError("solution file is missing block " + std::to_string(nb + 1) +
                     " (diagonal slack block) of the primal matrix");
  }
  finish_solution(p, s);
  return s;
}

void write_solution(const SdpProblem& p, const SdpSolution& s, std::ostream& out) {
  if (s.q.size() != p.blocks.size()) throw DomainError("solution does not match the problem");
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << num(s.bound);
  for (const auto& q : s.q)
    for (int i = 0; i < q.rows(); ++i)
      for (int j = i; j < q.cols(); ++j) out << " " << num(q(i, j));
  out << "\n";
  const int nb = static_cast<int>(p.blocks.size());
  const auto coef = float_coefficients(p, s.q);
  for (int b = 0; b < nb; ++b) {
    const auto& q = s.q[static_cast<size_t>(b)];
    for (int i = 0; i < q.rows(); ++i)
      for (int j = i; j < q.cols(); ++j)
        if (q(i, j) != 0) out << "1 " << b + 1 << " " << i + 1 << " " << j + 1 << " " << num(q(i, j)) << "\n";
  }
  for (size_t h = 0; h < coef.size(); ++h) {
    const double slack = s.bound - coef[h];
    if (slack != 0) out << "1 " << nb + 1 << " " << h + 1 << " " << h + 1 << " " << num(slack) << "\n";
  }
  std::vector<double> w = s.weights;
  if (w.size() != p.admissible.size()) w.assign(p.admissible.size(), 1.0 / static_cast<double>(p.admissible.size()));
  for (int b = 0; b < nb; ++b) {
    const int k = p.blocks[static_cast<size_t>(b)].dimension();
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(k, k);
    for (size_t h = 0; h < w.size(); ++h) {
      const PairDensityTable& d = p.pair_density[h][static_cast<size_t>(b)];
      for (const auto& e : d.entries) x(e.i, e.j) += w[h] * e.count / static_cast<double>(d.denominator);
    }
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        if (x(i, j) != 0) out << "2 " << b + 1 << " " << i + 1 << " " << j + 1 << " " << num(x(i, j)) << "\n";
  }
  bool wrote_slack = false;
  for (size_t h = 0; h < w.size(); ++h) {
    if (w[h] == 0) continue;
    out << "2 " << nb + 1 << " " << h + 1 << " " << h + 1 << " " << num(w[h]) << "\n";
    wrote_slack = true;
  }
  if (!wrote_slack) out << "2 " << nb + 1 << " 1 1 0\n";
}

// ---------------------------------------------------------------------------
// Interior point solver on the compact form
//
//   max tr(C X)  s.t.  tr(A_H X) = b_H,  X = blockdiag(Q_1..Q_k, diag(s_H, c)) >= 0
//
// with A_H = blockdiag(D_i(H), e_H - e_c), b_H = -d(H), C = -e_c.

namespace {

struct Blocks {
  std::vector<Eigen::MatrixXd> dense;
  Eigen::VectorXd diag;
};

double dot(const Blocks& a, const Blocks& b) {
  double s = a.diag.dot(b.diag);
  for (size_t i = 0; i < a.dense.size(); ++i) s += a.dense[i].cwiseProduct(b.dense[i]).sum();
  return s;
}

double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

Blocks scaled_identity(const std::vector<int>& sizes, int diag, double v) {
  Blocks b;
  for (int k : sizes) b.dense.push_back(v * Eigen::MatrixXd::Identity(k, k));
  b.diag = Eigen::VectorXd::Constant(diag, v);
  return b;
}

void axpy(Blocks& y, double a, const Blocks& x) {
  for (size_t i = 0; i < y.dense.size(); ++i) y.dense[i] += a * x.dense[i];
  y.diag += a * x.diag;
}

// Largest step alpha <= 1/fraction such that x + alpha dx stays PSD.
double max_step(const Blocks& x, const Blocks& dx) {
  double alpha = INFINITY;
  for (Eigen::Index k = 0; k < x.diag.size(); ++k)
    if (dx.diag(k) < 0) alpha = std::min(alpha, -x.diag(k) / dx.diag(k));
  for (size_t i = 0; i < x.dense.size(); ++i) {
    if (x.dense[i].size() == 0) continue;
    Eigen::LLT<Eigen::MatrixXd> llt(x.dense[i]);
    if (llt.info() != Eigen::Success) return 0;
    Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(x.dense[i].rows(), x.dense[i].cols()));
    Eigen::MatrixXd s = linv * dx.dense[i] * linv.transpose();
    s = 0.5 * (s + s.transpose());
    double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin < 0) alpha = std::min(alpha, -1 / lmin);
  }
  return alpha;
}

// D_i(H) restricted to the flags it touches.
struct SupportedMatrix {
  std::vector<int> support;
  Eigen::MatrixXd values;  // |support| x |support|, symmetric

  // Nonzero entries as offsets into a column-major k x k matrix.
  std::vector<std::int32_t> offset;
  std::vector<double> value;

  double dot(const Eigen::MatrixXd& m) const {
    const double* data = m.data();
    double s = 0;
    for (size_t t = 0; t < offset.size(); ++t) s += value[t] * data[offset[t]];
    return s;
  }
  void add_to(Eigen::MatrixXd& m, double scale) const {
    const int n = static_cast<int>(support.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(support[static_cast<size_t>(a)], support[static_cast<size_t>(b)]) += scale * values(a, b);
  }
};

SupportedMatrix supported(const PairDensityTable& d) {
  SupportedMatrix out;
  for (const auto& e : d.entries) {
    out.support.push_back(e.i);
    out.support.push_back(e.j);
  }
  std::sort(out.support.begin(), out.support.end());
  out.support.erase(std::unique(out.support.begin(), out.support.end()), out.support.end());
  const int n = static_cast<int>(out.support.size());
  out.values = Eigen::MatrixXd::Zero(n, n);
  auto pos = [&](int v) {
    return static_cast<int>(std::lower_bound(out.support.begin(), out.support.end(), v) - out.support.begin());
  };
  const double scale = 0.5 / static_cast<double>(d.denominator);
  for (const auto& e : d.entries) {
    const int a = pos(e.i), b = pos(e.j);
    out.values(a, b) += scale * e.count;
    out.values(b, a) += scale * e.count;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (out.values(a, b) != 0) {
        out.offset.push_back(out.support[static_cast<size_t>(a)] + out.support[static_cast<size_t>(b)] * d.dimension);
        out.value.push_back(out.values(a, b));
      }
  return out;
}

class CompactSdp {
 public:
  explicit CompactSdp(const SdpProblem& p) : n_h_(p.constraint_count()) {
    for (const auto& b : p.blocks) sizes_.push_back(b.dimension());
    a_.resize(static_cast<size_t>(n_h_));
    b_.resize(n_h_);
    for (int h = 0; h < n_h_; ++h) {
      for (size_t i = 0; i < sizes_.size(); ++i) a_[static_cast<size_t>(h)].push_back(supported(p.pair_density[static_cast<size_t>(h)][i]));
      b_(h) = -to_double(p.density[static_cast<size_t>(h)]);
    }
  }

  int diag_size() const { return n_h_ + 1; }
  int c_index() const { return n_h_; }
  const std::vector<int>& sizes() const { return sizes_; }
  const Eigen::VectorXd& b() const { return b_; }
  int total_dimension() const {
    int n = diag_size();
    for (int k : sizes_) n += k;
    return n;
  }

  Blocks c() const {
    Blocks out = scaled_identity(sizes_, diag_size(), 0);
    out.diag(c_index()) = -1;
    return out;
  }

  // A(X); X need not be symmetric.
  Eigen::VectorXd apply(const Blocks& x) const {
    Eigen::VectorXd out(n_h_);
    for (int h = 0; h < n_h_; ++h) {
      double s = x.diag(h) - x.diag(c_index());
      for (size_t i = 0; i < sizes_.size(); ++i) s += a_[static_cast<size_t>(h)][i].dot(x.dense[i]);
      out(h) = s;
    }
    return out;
  }

  // A^T(y)
  Blocks adjoint(const Eigen::VectorXd& y) const {
    Blocks out = scaled_identity(sizes_, diag_size(), 0);
    for (int h = 0; h < n_h_; ++h) {
      out.diag(h) += y(h);
      out.diag(c_index()) -= y(h);
      for (size_t i = 0; i < sizes_.size(); ++i) a_[static_cast<size_t>(h)][i].add_to(out.dense[i], y(h));
    }
    return out;
  }

  // M_HG = tr(A_H X A_G Z^{-1})
  Eigen::MatrixXd schur(const Blocks& x, const Blocks& zinv) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_h_, n_h_);
    for (size_t i = 0; i < sizes_.size(); ++i) {
      if (sizes_[i] == 0) continue;
      const Eigen::MatrixXd& xi = x.dense[i];
      const Eigen::MatrixXd& zi = zinv.dense[i];
      parallel_for(static_cast<size_t>(n_h_), [&](std::size_t h) {
        const SupportedMatrix& dh = a_[h][i];
        if (dh.support.empty()) return;
        const Eigen::Index ns = static_cast<Eigen::Index>(dh.support.size());
        Eigen::MatrixXd xs(xi.rows(), ns), zs(ns, zi.cols());
        for (Eigen::Index a = 0; a < ns; ++a) {
          xs.col(a) = xi.col(dh.support[static_cast<size_t>(a)]);
          zs.row(a) = zi.row(dh.support[static_cast<size_t>(a)]);
        }
        const Eigen::MatrixXd w = xs * dh.values * zs;
        for (int g = 0; g <= static_cast<int>(h); ++g) {
          const SupportedMatrix& dg = a_[static_cast<size_t>(g)][i];
          if (!dg.support.empty()) m(static_cast<Eigen::Index>(h), g) += dg.dot(w);
        }
      });
    }
    const double cc = x.diag(c_index()) * zinv.diag(c_index());
    for (int h = 0; h < n_h_; ++h) {
      for (int g = 0; g < h; ++g) m(g, h) = m(h, g);
      m(h, h) += x.diag(h) * zinv.diag(h);
    }
    m.array() += cc;
    return m;
  }

  double a_norm(int h) const {
    double s = 2;
    for (const auto& d : a_[static_cast<size_t>(h)]) s += d.values.squaredNorm();
    return std::sqrt(s);
  }
  double a_norm_max() const {
    double best = 0;
    for (int h = 0; h < n_h_; ++h) best = std::max(best, a_norm(h));
    return best;
  }
  double ratio_max() const {
    double best = 0;
    for (int h = 0; h < n_h_; ++h) best = std::max(best, (1 + std::abs(b_(h))) / (1 + a_norm(h)));
    return best;
  }

 private:
  int n_h_;
  std::vector<int> sizes_;
  std::vector<std::vector<SupportedMatrix>> a_;
  Eigen::VectorXd b_;
};

Blocks inverse(const Blocks& z) {
  Blocks out;
  for (const auto& d : z.dense) {
    Eigen::MatrixXd inv = d.llt().solve(Eigen::MatrixXd::Identity(d.rows(), d.cols()));
    out.dense.push_back(0.5 * (inv + inv.transpose()));
  }
  out.diag = z.diag.cwiseInverse();
  return out;
}

Blocks product(const Blocks& a, const Blocks& b) {
  Blocks out;
  for (size_t i = 0; i < a.dense.size(); ++i) out.dense.push_back(a.dense[i] * b.dense[i]);
  out.diag = a.diag.cwiseProduct(b.diag);
  return out;
}

void symmetrize(Blocks& a) {
  for (auto& d : a.dense) d = 0.5 * (d + d.transpose()).eval();
}

struct Direction {
  Blocks dx, dz;
  Eigen::VectorXd dy;
};

}  // namespace

SdpSolution solve_small(const SdpProblem& p, const SolverOptions& options) {
  if (p.degenerate()) {
    SdpSolution s;
    s.bound = to_double(p.degenerate_bound());
    for (const auto& b : p.blocks) s.q.push_back(Eigen::MatrixXd::Zero(b.dimension(), b.dimension()));
    s.weights.assign(p.admissible.size(), 0.0);
    return s;
  }
  if (p.dense_dimension() > kInternalMaxDenseDimension || p.constraint_count() > kInternalMaxConstraints) {
    throw CapacityError("problem too large for the internal solver (dense dimension " +
                        std::to_string(p.dense_dimension()) + ", " + std::to_string(p.constraint_count()) +
                        " constraints); export it with --export and use an external SDP solver");
  }
  const CompactSdp sdp(p);
  const Blocks cmat = sdp.c();
  const double n = sdp.total_dimension();
  const double alpha0 = 10 * n * sdp.ratio_max();
  const double beta0 = 10 * (1 + std::max(sdp.a_norm_max(), 1.0)) / std::sqrt(n);

  Blocks x = scaled_identity(sdp.sizes(), sdp.diag_size(), alpha0);
  Blocks z = scaled_identity(sdp.sizes(), sdp.diag_size(), beta0);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(p.constraint_count());
  const double bnorm = sdp.b().norm();
  const double cnorm = norm(cmat);

  auto direction = [&](const Blocks& zinv, const Eigen::LLT<Eigen::MatrixXd>& m, const Blocks& rd,
                       const Blocks& k) -> Direction {
    Direction d;
    Blocks t = product(k, zinv);
    axpy(t, 1, product(product(x, rd), zinv));
    Eigen::VectorXd rhs = sdp.apply(t) - sdp.b();
    d.dy = m.solve(rhs);
    d.dz = sdp.adjoint(d.dy);
    axpy(d.dz, -1, rd);
    d.dx = product(k, zinv);
    axpy(d.dx, -1, x);
    axpy(d.dx, -1, product(product(x, d.dz), zinv));
    symmetrize(d.dx);
    return d;
  };

  SdpSolution best;
  double best_score = INFINITY;
  auto record = [&](double score, int iter) {
    if (score >= best_score) return;
    best_score = score;
    best.q = x.dense;
    best.bound = x.diag(sdp.c_index());
    best.weights.assign(y.data(), y.data() + y.size());
    best.iterations = iter;
  };

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const Eigen::VectorXd rp = sdp.b() - sdp.apply(x);
    Blocks rd = cmat;
    axpy(rd, 1, z);
    axpy(rd, -1, sdp.adjoint(y));
    const double pobj = dot(cmat, x);
    const double dobj = sdp.b().dot(y);
    const double pinf = rp.norm() / (1 + bnorm);
    const double dinf = norm(rd) / (1 + cnorm);
    const double gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
    const double score = std::max({pinf, dinf, gap});
    if (options.verbose) {
      std::fprintf(stderr, "iter %3d  pobj %.10g  dobj %.10g  pinf %.2e  dinf %.2e  gap %.2e\n", iter, pobj, dobj,
                   pinf, dinf, gap);
    }
    record(score, iter);
    if (score < options.tolerance || iter == options.max_iterations) break;

    const double mu = dot(x, z) / n;
    const Blocks zinv = inverse(z);
    const auto t0 = std::chrono::steady_clock::now();
    Eigen::LLT<Eigen::MatrixXd> m(sdp.schur(x, zinv));
    const auto t1 = std::chrono::steady_clock::now();
    if (m.info() != Eigen::Success) break;
    if (options.verbose) {
      std::fprintf(stderr, "          schur+factor %.2fs\n", std::chrono::duration<double>(t1 - t0).count());
    }

    const Blocks zero = scaled_identity(sdp.sizes(), sdp.diag_size(), 0);
    const Direction pred = direction(zinv, m, rd, zero);
    const double ap = std::min(1.0, 0.95 * max_step(x, pred.dx));
    const double ad = std::min(1.0, 0.95 * max_step(z, pred.dz));
    Blocks xa = x, za = z;
    axpy(xa, ap, pred.dx);
    axpy(za, ad, pred.dz);
    const double mu_aff = dot(xa, za) / n;
    const double sigma = std::min(1.0, std::pow(mu_aff / mu, 3));

    Blocks k = scaled_identity(sdp.sizes(), sdp.diag_size(), sigma * mu);
    axpy(k, -1, product(pred.dx, pred.dz));
    const Direction corr = direction(zinv, m, rd, k);
    const double step_p = std::min(1.0, 0.95 * max_step(x, corr.dx));
    const double step_d = std::min(1.0, 0.95 * max_step(z, corr.dz));
    if (!(step_p > 1e-12) && !(step_d > 1e-12)) break;
    axpy(x, step_p, corr.dx);
    axpy(z, step_d, corr.dz);
    y += step_d * corr.dy;
    symmetrize(x);
    symmetrize(z);
  }

  if (best_score > std::max(1e3 * options.tolerance, 1e-6)) {
    throw SolverError("interior point method did not converge (best relative residual " + std::to_string(best_score) +
                      ")");
  }
  for (auto& q : best.q) q = 0.5 * (q + q.transpose()).eval();
  // The smallest c that satisfies every constraint for the returned Q.
  const auto coef = float_coefficients(p, best.q);
  const double slack_bound = best.bound;
  best.bound = *std::max_element(coef.begin(), coef.end());
  best.worst_violation = best.bound - slack_bound;
  return best;
}

}  // namespace flagcert
