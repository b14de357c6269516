#include "flagcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "flagcert/error.hpp"
#include "flagcert/linalg.hpp"
#include "flagcert/parallel.hpp"
#include "json.hpp"

namespace flagcert {

using Json = nlohmann::ordered_json;

Rational ScaledMatrix::at(int i, int j) const {
  Rational v((*this)(i, j), den);
  v.canonicalize();
  return v;
}

namespace {

Integer lcm_of_denominators(const RationalMatrix& m) {
  Integer l = 1;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
  return l;
}

std::vector<Integer> scaled_integers(const RationalMatrix& m, const Integer& scale) {
  std::vector<Integer> out(static_cast<size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      Integer& v = out[static_cast<size_t>(i) * m.cols() + j];
      v = scale / m(i, j).get_den();
      v *= m(i, j).get_num();
    }
  return out;
}

}  // namespace

ScaledMatrix expand(const CertificateBlock& b) {
  const int k = b.r.rows();
  const int c = b.r.cols();
  if (b.qdash.rows() != c || b.qdash.cols() != c) throw DomainError("R and Q' dimensions do not match");
  const Integer lr = lcm_of_denominators(b.r);
  const Integer lq = lcm_of_denominators(b.qdash);
  const std::vector<Integer> r = scaled_integers(b.r, lr);
  const std::vector<Integer> q = scaled_integers(b.qdash, lq);
  const bool diagonal = b.qdash.is_diagonal();

  // T = R Q'
  std::vector<Integer> t(static_cast<size_t>(k) * c);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < c; ++a) {
      const Integer& ria = r[static_cast<size_t>(i) * c + a];
      if (ria == 0) continue;
      if (diagonal) {
        mpz_addmul(t[static_cast<size_t>(i) * c + a].get_mpz_t(), ria.get_mpz_t(),
                   q[static_cast<size_t>(a) * c + a].get_mpz_t());
        continue;
      }
      for (int bb = 0; bb < c; ++bb) {
        const Integer& qab = q[static_cast<size_t>(a) * c + bb];
        if (qab != 0) mpz_addmul(t[static_cast<size_t>(i) * c + bb].get_mpz_t(), ria.get_mpz_t(), qab.get_mpz_t());
      }
    }
  ScaledMatrix out;
  out.n = k;
  out.num.assign(static_cast<size_t>(k) * k, Integer(0));
  out.den = lr * lr * lq;
  parallel_for(static_cast<size_t>(k), [&](std::size_t i) {
    for (int j = static_cast<int>(i); j < k; ++j) {
      Integer& v = out.num[i * k + j];
      for (int a = 0; a < c; ++a) {
        const Integer& rja = r[static_cast<size_t>(j) * c + a];
        if (rja == 0) continue;
        const Integer& tia = t[i * c + a];
        if (tia != 0) mpz_addmul(v.get_mpz_t(), tia.get_mpz_t(), rja.get_mpz_t());
      }
      out.num[static_cast<size_t>(j) * k + i] = v;
    }
  });
  return out;
}

namespace {

Rational block_term(const PairDensityTable& d, const ScaledMatrix& q) {
  if (d.entries.empty()) return 0;
  if (d.dimension != q.n) throw DomainError("density table and matrix dimensions differ");
  Integer sum = 0;
  for (const auto& e : d.entries) mpz_addmul_ui(sum.get_mpz_t(), q(e.i, e.j).get_mpz_t(), e.count);
  Rational v(sum, q.den * Integer(static_cast<long>(d.denominator)));
  v.canonicalize();
  return v;
}

}  // namespace

std::vector<Rational> exact_coefficients(const std::vector<Rational>& density,
                                         const std::vector<std::vector<PairDensityTable>>& tables,
                                         const std::vector<ScaledMatrix>& q) {
  std::vector<Rational> out(density.size());
  parallel_for(density.size(), [&](std::size_t h) {
    Rational c = density[h];
    for (size_t b = 0; b < q.size(); ++b) c += block_term(tables[h][b], q[b]);
    out[h] = c;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Rounding

namespace {

Rational round_to_denominator(double x, const Integer& q) {
  if (!std::isfinite(x)) throw RoundingError("non-finite matrix entry");
  Rational scaled(x);
  scaled *= q;
  Integer n;
  mpz_fdiv_q(n.get_mpz_t(), Rational(scaled + Rational(1, 2)).get_num_mpz_t(),
             Rational(scaled + Rational(1, 2)).get_den_mpz_t());
  Rational v(n, q);
  v.canonicalize();
  return v;
}

RationalMatrix integer_columns(RationalMatrix m) {
  for (int j = 0; j < m.cols(); ++j) {
    Integer l = 1, g = 0;
    for (int i = 0; i < m.rows(); ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (int i = 0; i < m.rows(); ++i) {
      m(i, j) *= l;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m(i, j).get_num_mpz_t());
    }
    int first = 0;
    while (first < m.rows() && m(first, j) == 0) ++first;
    if (first == m.rows()) continue;
    Rational f(g);
    if (m(first, j) < 0) f = -f;
    for (int i = 0; i < m.rows(); ++i) m(i, j) /= f;
  }
  return m;
}

Eigen::MatrixXd to_eigen(const RationalMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

std::vector<ScaledMatrix> expand_all(const std::vector<CertificateBlock>& blocks) {
  std::vector<ScaledMatrix> out;
  for (const auto& b : blocks) out.push_back(expand(b));
  return out;
}

}  // namespace

std::vector<CertificateBlock> round_simple(const std::vector<Eigen::MatrixXd>& qs, const Integer& denominator) {
  if (denominator < 1) throw DomainError("denominator bound must be positive");
  std::vector<CertificateBlock> out;
  for (size_t b = 0; b < qs.size(); ++b) {
    const Eigen::MatrixXd q = 0.5 * (qs[b] + qs[b].transpose());
    const int k = static_cast<int>(q.rows());
    CertificateBlock block{RationalMatrix(k, k), RationalMatrix(k, k)};
    if (k == 0) {
      out.push_back(block);
      continue;
    }
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin < -1e-8) {
      throw RoundingError("matrix " + std::to_string(b + 1) + " is not positive semidefinite (smallest eigenvalue " +
                          std::to_string(lmin) + ")");
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(q);
    // q = Pᵀ L D Lᵀ P, so R = Pᵀ L.
    Eigen::MatrixXd l = ldlt.matrixL();
    Eigen::MatrixXd r = ldlt.transpositionsP().transpose() * l;
    Eigen::VectorXd d = ldlt.vectorD();
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) block.r(i, j) = round_to_denominator(r(i, j), denominator);
      block.qdash(i, i) = d(i) > 0 ? round_to_denominator(d(i), denominator) : Rational(0);
    }
    out.push_back(std::move(block));
  }
  return out;
}

std::vector<CertificateBlock> round_with_construction(const SdpProblem& p, const SdpSolution& sol,
                                                      const ConstructionTemplate& c, const RoundingOptions& options) {
  if (sol.q.size() != p.blocks.size()) throw DomainError("solution does not match the problem");
  if (options.denominator < 1) throw DomainError("denominator bound must be positive");
  const int nb = static_cast<int>(p.blocks.size());
  std::vector<RationalMatrix> r0(static_cast<size_t>(nb));
  std::vector<RationalMatrix> qd(static_cast<size_t>(nb));

  for (int b = 0; b < nb; ++b) {
    const TypeBlock& block = p.blocks[static_cast<size_t>(b)];
    const int k = block.dimension();
    const Eigen::MatrixXd q = 0.5 * (sol.q[static_cast<size_t>(b)] + sol.q[static_cast<size_t>(b)].transpose());
    const auto vectors = limit_flag_density_vectors(block.type, block.flags, c, options.depth);
    RationalMatrix zt(static_cast<int>(vectors.size()), k);
    for (size_t v = 0; v < vectors.size(); ++v) {
      Eigen::VectorXd fv(k);
      for (int i = 0; i < k; ++i) {
        zt(static_cast<int>(v), i) = vectors[v][static_cast<size_t>(i)];
        fv(i) = to_double(vectors[v][static_cast<size_t>(i)]);
      }
      const double residual = (q * fv).norm() / std::max(fv.norm(), 1e-300);
      if (residual > options.residual_threshold) {
        throw RoundingError("construction does not match the solution: residual " + std::to_string(residual) +
                            " for type " + block.type.graph.notation() + " exceeds " +
                            std::to_string(options.residual_threshold));
      }
    }
    RationalMatrix basis = vectors.empty() ? RationalMatrix::identity(k) : integer_columns(null_space(zt));
    const Eigen::MatrixXd rf = to_eigen(basis);
    const int cdim = basis.cols();
    RationalMatrix rounded(cdim, cdim);
    if (cdim > 0) {
      const Eigen::MatrixXd gram_inv = (rf.transpose() * rf).inverse();
      const Eigen::MatrixXd coords = gram_inv * rf.transpose() * q * rf * gram_inv;
      for (int i = 0; i < cdim; ++i)
        for (int j = i; j < cdim; ++j)
          rounded(i, j) = rounded(j, i) = round_to_denominator(0.5 * (coords(i, j) + coords(j, i)), options.denominator);
    }
    r0[static_cast<size_t>(b)] = std::move(basis);
    qd[static_cast<size_t>(b)] = std::move(rounded);
  }

  auto current_blocks = [&] {
    std::vector<CertificateBlock> blocks;
    for (int b = 0; b < nb; ++b) blocks.push_back({r0[static_cast<size_t>(b)], qd[static_cast<size_t>(b)]});
    return blocks;
  };

  if (options.target) {
    const Rational& target = *options.target;
    // Graphs with positive density in the construction must be tight.
    std::set<CanonicalForm> positive;
    for (const auto& [form, d] : construction_graph_densities(c, p.spec.m, options.depth)) positive.insert(form);
    std::vector<int> sharp;
    for (int h = 0; h < p.constraint_count(); ++h)
      if (positive.count(canonical_form(p.admissible[static_cast<size_t>(h)]))) sharp.push_back(h);

    const std::vector<Rational> coef = exact_coefficients(p.density, p.pair_density, expand_all(current_blocks()));
    // Column (b, a): derivative of coefficient H with respect to Q'_b(a, a),
    // i.e. (R0ᵀ D_b(H) R0)_aa.
    std::vector<std::pair<int, int>> columns;
    for (int b = 0; b < nb; ++b)
      for (int a = 0; a < r0[static_cast<size_t>(b)].cols(); ++a) columns.emplace_back(b, a);
    RationalMatrix system(static_cast<int>(sharp.size()), static_cast<int>(columns.size()));
    std::vector<Rational> rhs;
    parallel_for(sharp.size(), [&](std::size_t s) {
      const int h = sharp[s];
      for (size_t col = 0; col < columns.size(); ++col) {
        const auto [b, a] = columns[col];
        const PairDensityTable& d = p.pair_density[static_cast<size_t>(h)][static_cast<size_t>(b)];
        const RationalMatrix& r = r0[static_cast<size_t>(b)];
        Rational v = 0;
        for (const auto& e : d.entries) {
          if (r(e.i, a) == 0 || r(e.j, a) == 0) continue;
          v += r(e.i, a) * r(e.j, a) * static_cast<long>(e.count);
        }
        if (v != 0) system(static_cast<int>(s), static_cast<int>(col)) = v / static_cast<long>(d.denominator);
      }
    });
    for (int h : sharp) rhs.push_back(target - coef[static_cast<size_t>(h)]);
    auto delta = solve_linear(system, rhs);
    if (!delta) {
      throw RoundingError("cannot adjust the rounded matrices so that the construction's graphs hit the target " +
                          to_string(target) + "; the target may be wrong");
    }
    for (size_t col = 0; col < columns.size(); ++col) {
      const auto [b, a] = columns[col];
      qd[static_cast<size_t>(b)](a, a) += (*delta)[col];
    }
  }

  std::vector<CertificateBlock> blocks = current_blocks();
  for (int b = 0; b < nb; ++b) {
    CertificateBlock& block = blocks[static_cast<size_t>(b)];
    if (options.diagonalize) {
      auto congruence = ldlt(block.qdash);
      bool ok = congruence.has_value();
      if (ok) ok = std::all_of(congruence->d.begin(), congruence->d.end(), [](const Rational& x) { return x >= 0; });
      if (!ok) {
        throw RoundingError("rounded matrix for type " + p.blocks[static_cast<size_t>(b)].type.graph.notation() +
                            " is not positive semidefinite; use a larger denominator bound q (currently " +
                            options.denominator.get_str() + ")");
      }
      block.r = block.r * congruence->m;
      RationalMatrix diag(block.qdash.rows(), block.qdash.cols());
      for (int i = 0; i < diag.rows(); ++i) diag(i, i) = congruence->d[static_cast<size_t>(i)];
      block.qdash = std::move(diag);
    } else if (!is_psd(block.qdash)) {
      throw RoundingError("rounded matrix for type " + p.blocks[static_cast<size_t>(b)].type.graph.notation() +
                          " is not positive semidefinite; use a larger denominator bound q (currently " +
                          options.denominator.get_str() + ")");
    }
  }

  if (options.target) {
    const std::vector<Rational> coef = exact_coefficients(p.density, p.pair_density, expand_all(blocks));
    for (int h = 0; h < p.constraint_count(); ++h) {
      if (coef[static_cast<size_t>(h)] > *options.target) {
        throw RoundingError("coefficient of " + p.admissible[static_cast<size_t>(h)].notation() + " is " +
                            to_string(coef[static_cast<size_t>(h)]) + " > target " + to_string(*options.target) +
                            " after rounding; use a larger denominator bound q or a different target");
      }
    }
  }
  return blocks;
}

// ---------------------------------------------------------------------------
// Certificates

std::string Certificate::description() const {
  std::string s = std::to_string(r) + "-graph; maximize " + (r == 2 ? std::string("2:12") : std::string("3:123")) +
                  " density";
  std::vector<std::string> plain, induced;
  for (const auto& f : forbidden) (f.induced ? induced : plain).push_back(f.graph.notation());
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
  };
  if (!plain.empty()) s += "; forbid " + join(plain);
  if (!induced.empty()) s += "; forbid induced " + join(induced);
  return s;
}

Certificate make_certificate(const SdpProblem& p, std::vector<CertificateBlock> blocks, const Rational& bound) {
  if (blocks.size() != p.blocks.size()) throw DomainError("one rounded block per type is required");
  Certificate c;
  c.r = p.spec.r;
  c.forbidden = p.spec.forbidden;
  c.bound = bound;
  c.order = p.spec.m;
  c.admissible = p.admissible;
  for (const auto& b : p.blocks) {
    c.types.push_back(b.type);
    c.flags.push_back(b.flags);
  }
  c.blocks = std::move(blocks);
  return c;
}

namespace {

Json rational_json(const Rational& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return Json(x.get_num().get_si());
  return Json(to_string(x));
}

Rational json_rational(const Json& j, const char* field) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(Integer(std::to_string(j.get<std::uint64_t>())))
                                  : Rational(Integer(std::to_string(j.get<std::int64_t>())));
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError(std::string("field '") + field + "' must hold integers or \"p/q\" strings");
}

Json upper_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = i; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RationalMatrix parse_upper(const Json& j, const char* field) {
  if (!j.is_array()) throw ParseError(std::string("field '") + field + "' must hold matrices");
  const int n = static_cast<int>(j.size());
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n - i) {
      throw ParseError(std::string("field '") + field + "': upper-triangle row " + std::to_string(i + 1) +
                       " has the wrong length");
    }
    for (int k = 0; k < n - i; ++k) m(i, i + k) = m(i + k, i) = json_rational(row[static_cast<size_t>(k)], field);
  }
  return m;
}

Json rows_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RationalMatrix parse_rows(const Json& j, int cols, const char* field) {
  if (!j.is_array()) throw ParseError(std::string("field '") + field + "' must hold matrices");
  const int n = static_cast<int>(j.size());
  RationalMatrix m(n, cols);
  for (int i = 0; i < n; ++i) {
    const Json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ParseError(std::string("field '") + field + "': row " + std::to_string(i + 1) + " has the wrong length");
    }
    for (int k = 0; k < cols; ++k) m(i, k) = json_rational(row[static_cast<size_t>(k)], field);
  }
  return m;
}

const Json& require(const Json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(std::string("certificate is missing field '") + field + "'");
  return *it;
}

std::vector<std::string> string_list(const Json& j, const char* field) {
  if (!j.is_array()) throw ParseError(std::string("field '") + field + "' must be a list of strings");
  std::vector<std::string> out;
  for (const Json& x : j) {
    if (!x.is_string()) throw ParseError(std::string("field '") + field + "' must be a list of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

int integer_field(const Json& obj, const char* field) {
  const Json& j = require(obj, field);
  if (!j.is_number_integer()) throw ParseError(std::string("field '") + field + "' must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < 0 || v > 100000000) throw ParseError(std::string("field '") + field + "' out of range");
  return static_cast<int>(v);
}

void check_count(const Json& obj, const char* field, size_t actual) {
  if (obj.contains(field) && static_cast<size_t>(integer_field(obj, field)) != actual) {
    throw ParseError(std::string("field '") + field + "' does not match the length of its list");
  }
}

// "3-graph; maximize 3:123 density; forbid A, B; forbid induced C"
void parse_description(const std::string& text, int& r, std::vector<std::string>& plain,
                       std::vector<std::string>& induced) {
  std::stringstream in(text);
  std::string part;
  bool first = true;
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(' '));
    s.erase(s.find_last_not_of(' ') + 1);
    return s;
  };
  while (std::getline(in, part, ';')) {
    part = trim(part);
    if (first) {
      if (part.size() < 7 || part.substr(1) != "-graph") throw ParseError("description must start with 'r-graph'");
      r = part[0] - '0';
      first = false;
      continue;
    }
    std::vector<std::string>* target = nullptr;
    std::string list;
    if (part.rfind("forbid induced ", 0) == 0) {
      target = &induced;
      list = part.substr(15);
    } else if (part.rfind("forbid ", 0) == 0) {
      target = &plain;
      list = part.substr(7);
    } else {
      continue;
    }
    std::stringstream items(list);
    std::string item;
    while (std::getline(items, item, ',')) target->push_back(trim(item));
  }
}

}  // namespace

std::string upper_triangle_json(const RationalMatrix& m) { return upper_json(m).dump(); }

RationalMatrix parse_upper_triangle_json(std::string_view text) {
  try {
    return parse_upper(Json::parse(text), "matrix");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string emit_certificate(const Certificate& c) {
  Json out;
  std::vector<std::string> plain, induced;
  for (const auto& f : c.forbidden) (f.induced ? induced : plain).push_back(f.graph.notation());
  out["description"] = c.description();
  out["r"] = c.r;
  out["forbidden"] = plain;
  out["forbidden_induced"] = induced;
  out["bound"] = rational_json(c.bound);
  out["order_of_admissible_graphs"] = c.order;
  out["number_of_admissible_graphs"] = c.admissible.size();
  Json graphs = Json::array();
  for (const auto& g : c.admissible) graphs.push_back(g.notation());
  out["admissible_graphs"] = graphs;
  out["number_of_types"] = c.types.size();
  Json types = Json::array();
  for (const auto& t : c.types) types.push_back(t.graph.notation());
  out["types"] = types;
  Json counts = Json::array(), flags = Json::array();
  for (const auto& list : c.flags) {
    counts.push_back(list.size());
    Json names = Json::array();
    for (const auto& f : list) names.push_back(f.notation());
    flags.push_back(names);
  }
  out["numbers_of_flags"] = counts;
  out["flags"] = flags;
  Json q = Json::array(), r = Json::array();
  for (const auto& b : c.blocks) {
    q.push_back(upper_json(b.qdash));
    r.push_back(rows_json(b.r));
  }
  out["qdash_matrices"] = q;
  out["r_matrices"] = r;

  std::string text = "{\n";
  size_t i = 0;
  for (auto it = out.begin(); it != out.end(); ++it, ++i) {
    text += Json(it.key()).dump() + ": " + it.value().dump();
    text += i + 1 < out.size() ? ",\n" : "\n";
  }
  text += "}\n";
  return text;
}

Certificate parse_certificate(std::string_view text) {
  Json in;
  try {
    in = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!in.is_object()) throw ParseError("certificate must be a JSON object");
  try {
    Certificate c;
    int r = 0;
    std::vector<std::string> plain, induced;
    if (in.contains("description") && in["description"].is_string()) {
      parse_description(in["description"].get<std::string>(), r, plain, induced);
    }
    if (in.contains("r")) r = integer_field(in, "r");
    if (r != 2 && r != 3) throw ParseError("certificate uniformity must be 2 or 3");
    c.r = r;
    if (in.contains("forbidden")) plain = string_list(in["forbidden"], "forbidden");
    if (in.contains("forbidden_induced")) induced = string_list(in["forbidden_induced"], "forbidden_induced");
    for (const auto& g : plain) c.forbidden.push_back({Graph::parse(g, r), false});
    for (const auto& g : induced) c.forbidden.push_back({Graph::parse(g, r), true});

    c.bound = json_rational(require(in, "bound"), "bound");
    c.order = integer_field(in, "order_of_admissible_graphs");
    for (const auto& g : string_list(require(in, "admissible_graphs"), "admissible_graphs"))
      c.admissible.push_back(Graph::parse(g, r));
    check_count(in, "number_of_admissible_graphs", c.admissible.size());
    for (const auto& t : string_list(require(in, "types"), "types")) c.types.push_back({Graph::parse(t, r)});
    check_count(in, "number_of_types", c.types.size());

    const Json& flags = require(in, "flags");
    if (!flags.is_array() || flags.size() != c.types.size()) throw ParseError("one flag list per type is required");
    for (const Json& list : flags) {
      std::vector<Flag> parsed;
      for (const auto& f : string_list(list, "flags")) parsed.push_back(Flag::parse(f, r));
      c.flags.push_back(std::move(parsed));
    }
    if (in.contains("numbers_of_flags")) {
      const Json& counts = in["numbers_of_flags"];
      if (!counts.is_array() || counts.size() != c.flags.size()) throw ParseError("numbers_of_flags has the wrong length");
      for (size_t i = 0; i < counts.size(); ++i) {
        if (!counts[i].is_number_integer() || counts[i].get<std::int64_t>() != static_cast<std::int64_t>(c.flags[i].size()))
          throw ParseError("numbers_of_flags does not match the flag lists");
      }
    }

    const Json& q = require(in, "qdash_matrices");
    const Json& rm = require(in, "r_matrices");
    if (!q.is_array() || !rm.is_array() || q.size() != c.types.size() || rm.size() != c.types.size()) {
      throw ParseError("one qdash matrix and one R matrix per type are required");
    }
    for (size_t i = 0; i < q.size(); ++i) {
      CertificateBlock b;
      b.qdash = parse_upper(q[i], "qdash_matrices");
      b.r = parse_rows(rm[i], b.qdash.rows(), "r_matrices");
      c.blocks.push_back(std::move(b));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Verification

VerificationReport verify_certificate(const Certificate& c) {
  VerificationReport rep;
  rep.claimed = c.bound;
  rep.admissible = c.admissible;
  auto fail = [&](int stage, const std::string& why) {
    rep.failed_stage = stage;
    rep.failure = why;
    return rep;
  };

  // Stage 1: the admissible family.
  ProblemSpec spec;
  spec.r = c.r;
  spec.forbidden = c.forbidden;
  spec.m = c.order;
  try {
    spec.validate();
  } catch (const Error& e) {
    return fail(1, std::string("invalid problem: ") + e.what());
  }
  std::set<CanonicalForm> listed;
  for (const auto& g : c.admissible) {
    if (g.order() != c.order) return fail(1, "graph " + g.notation() + " has the wrong order");
    if (!listed.insert(canonical_form(g)).second) return fail(1, "graph " + g.notation() + " is listed twice");
  }
  std::set<CanonicalForm> expected;
  for (const auto& g : admissible_graphs(spec, c.order)) expected.insert(canonical_form(g));
  if (listed != expected) {
    for (const auto& f : expected)
      if (!listed.count(f)) return fail(1, "family incomplete: admissible graph " + f.key() + " is missing");
    for (const auto& f : listed)
      if (!expected.count(f)) return fail(1, "family incorrect: " + f.key() + " is not admissible");
  }
  rep.admissible_family_complete = true;

  // Stage 2: densities from the certificate's own types and flags.
  const size_t nb = c.types.size();
  if (c.flags.size() != nb) return fail(2, "flag lists do not match the types");
  std::vector<std::vector<PairDensityTable>> tables(c.admissible.size());
  try {
    for (size_t b = 0; b < nb; ++b) {
      const TypeGraph& t = c.types[b];
      std::set<CanonicalForm> seen;
      for (const Flag& f : c.flags[b]) {
        if (f.type_order != t.order()) throw DomainError("flag " + f.notation() + " does not match type " + t.graph.notation());
        std::vector<int> prefix(static_cast<size_t>(t.order()));
        for (int i = 0; i < t.order(); ++i) prefix[static_cast<size_t>(i)] = i;
        if (f.graph.induced(prefix).mask() != t.graph.mask())
          throw DomainError("flag " + f.notation() + " does not extend type " + t.graph.notation());
        if (!seen.insert(f.key()).second) throw DomainError("flag " + f.notation() + " is listed twice");
        if (2 * f.order() - f.type_order > c.order)
          throw DomainError("flag " + f.notation() + " is too large for admissible order " + std::to_string(c.order));
      }
    }
    parallel_for(c.admissible.size(), [&](std::size_t h) {
      for (size_t b = 0; b < nb; ++b) tables[h].push_back(pair_density_counts(c.types[b], c.flags[b], c.admissible[h]));
    });
  } catch (const Error& e) {
    return fail(2, e.what());
  }
  for (const auto& g : c.admissible)
    rep.density.push_back(c.order >= c.r ? edge_density(g) : Rational(0));
  rep.densities_ok = true;

  // Stage 3: Q = R Q' Rᵀ with Q' PSD.
  if (c.blocks.size() != nb) return fail(3, "matrix count does not match the types");
  std::vector<ScaledMatrix> q;
  for (size_t b = 0; b < nb; ++b) {
    const CertificateBlock& blk = c.blocks[b];
    const std::string name = "type " + std::to_string(b + 1) + " (" + c.types[b].graph.notation() + ")";
    if (blk.r.rows() != static_cast<int>(c.flags[b].size()))
      return fail(3, "R for " + name + " has " + std::to_string(blk.r.rows()) + " rows, expected " +
                         std::to_string(c.flags[b].size()));
    if (blk.r.cols() != blk.qdash.rows()) return fail(3, "R and Q' dimensions differ for " + name);
    if (blk.qdash.is_diagonal()) {
      for (int i = 0; i < blk.qdash.rows(); ++i)
        if (blk.qdash(i, i) < 0) return fail(3, "Q' not PSD: negative diagonal entry for " + name);
    } else if (!is_psd(blk.qdash)) {
      return fail(3, "Q' not PSD for " + name);
    }
    q.push_back(expand(blk));
  }
  rep.psd_ok = true;

  // Stage 4: coefficients against the claimed bound.
  rep.coefficients = exact_coefficients(rep.density, tables, q);
  rep.achieved = rep.coefficients.empty() ? Rational(0) : *std::max_element(rep.coefficients.begin(), rep.coefficients.end());
  for (size_t h = 0; h < rep.coefficients.size(); ++h)
    if (rep.coefficients[h] == rep.achieved) rep.tight.push_back(static_cast<int>(h));
  rep.bound_ok = rep.achieved <= rep.claimed;
  if (!rep.bound_ok) {
    return fail(4, "bound exceeded: maximum coefficient " + to_string(rep.achieved) + " > claimed " +
                       to_string(rep.claimed));
  }
  return rep;
}

}  // namespace flagcert
