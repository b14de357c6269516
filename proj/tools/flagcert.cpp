#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "flagcert/certify.hpp"
#include "flagcert/construct.hpp"
#include "flagcert/enumerate.hpp"
#include "flagcert/error.hpp"
#include "flagcert/optimize.hpp"
#include "flagcert/problem.hpp"

using namespace flagcert;

namespace {

constexpr int kExitVerification = 2;
constexpr int kExitInput = 3;
constexpr int kExitCapacity = 4;

std::string approx(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string show(const Rational& x) { return to_string(x) + " (≈ " + approx(to_double(x)) + ")"; }

std::string plural(size_t n, const char* word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
  if (!out) throw ParseError("write to " + path + " failed");
}

// --- enumerate --------------------------------------------------------------

struct EnumerateArgs {
  std::string problem;
  bool types = false;
  bool flags = false;
  bool densities = false;
};

int cmd_enumerate(const EnumerateArgs& a) {
  const ProblemFile pf = read_problem(a.problem);
  const auto graphs = admissible_graphs(pf.spec, pf.spec.m);
  std::cout << plural(graphs.size(), "admissible graph") << " of order " << pf.spec.m << "\n";
  for (size_t i = 0; i < graphs.size(); ++i) std::cout << "  H" << i << "  " << graphs[i].notation() << "\n";
  if (a.types || a.flags) {
    const auto types = enumerate_types(pf.spec);
    std::cout << plural(types.size(), "type") << "\n";
    for (size_t t = 0; t < types.size(); ++t) {
      const int l = default_flag_order(pf.spec.m, types[t].order());
      const auto flags = enumerate_flags(types[t], l, pf.spec);
      std::cout << "  T" << t << "  " << types[t].graph.notation() << "  (" << plural(flags.size(), "flag") << ")\n";
      if (a.flags)
        for (const Flag& f : flags) std::cout << "      " << f.notation() << "\n";
    }
  }
  if (a.densities) {
    const SdpProblem p = assemble(pf.spec);
    write_density_tables(p, std::cout);
  }
  return 0;
}

// --- bound ------------------------------------------------------------------

struct BoundArgs {
  std::string problem;
  bool internal = false;
  std::string export_path;
  std::string import_path;
  std::string solution_out;
  double tolerance = 1e-9;
  bool verbose = false;
};

SdpSolution solve_internal(const SdpProblem& p, double tolerance, bool verbose) {
  SolverOptions o;
  o.tolerance = tolerance;
  o.verbose = verbose;
  return solve_small(p, o);
}

SdpSolution load_solution(const SdpProblem& p, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  return import_solution(p, in);
}

int cmd_bound(const BoundArgs& a) {
  const ProblemFile pf = read_problem(a.problem);
  if (a.internal && a.export_path.empty()) {
    // Fail before assembly when the constraint count alone exceeds the cap.
    const auto n = admissible_graphs(pf.spec, pf.spec.m).size();
    if (n > static_cast<std::size_t>(kInternalMaxConstraints))
      throw CapacityError("problem too large for the internal solver (" + std::to_string(n) +
                          " constraints); export it with --export and use an external SDP solver");
  }
  const SdpProblem p = assemble(pf.spec);
  std::cout << plural(p.admissible.size(), "admissible graph") << ", " << plural(p.blocks.size(), "type block") << "\n";
  for (const TypeBlock& b : p.blocks)
    std::cout << "  type " << b.type.graph.notation() << "  block size " << b.dimension() << "\n";
  if (p.degenerate()) {
    std::cout << "bound " << show(p.degenerate_bound()) << "\n";
    return 0;
  }
  if (!a.export_path.empty()) {
    std::ofstream out(a.export_path);
    if (!out) throw ParseError("cannot write " + a.export_path);
    write_sparse_sdp(to_sparse_sdp(p), out);
    std::cout << "wrote " << a.export_path << "\n";
  }
  if (!a.internal && a.import_path.empty()) return 0;
  const SdpSolution s = a.internal ? solve_internal(p, a.tolerance, a.verbose) : load_solution(p, a.import_path);
  std::cout << "bound ≈ " << approx(s.bound) << "\n";
  std::cout << "worst constraint residual " << approx(s.worst_violation, 12) << "\n";
  if (a.internal) std::cout << "iterations " << s.iterations << "\n";
  if (!a.solution_out.empty()) {
    std::ofstream out(a.solution_out);
    if (!out) throw ParseError("cannot write " + a.solution_out);
    write_solution(p, s, out);
  }
  return 0;
}

// --- certify ----------------------------------------------------------------

struct CertifyArgs {
  std::string problem;
  std::string solution;
  bool internal = false;
  std::string construction;
  std::string target;
  std::string denominator = "100000000";
  std::string out;
  bool iterated = false;
  bool keep_qdash = false;
};

int cmd_certify(const CertifyArgs& a) {
  const ProblemFile pf = read_problem(a.problem);
  const SdpProblem p = assemble(pf.spec);
  std::optional<Rational> target = pf.target_bound;
  if (!a.target.empty()) target = parse_rational(a.target);
  std::optional<std::string> construction = pf.construction;
  if (!a.construction.empty()) construction = a.construction;
  Integer q;
  if (q.set_str(a.denominator, 10) != 0 || q < 1) throw ParseError("bad denominator bound '" + a.denominator + "'");

  std::vector<CertificateBlock> blocks;
  if (!p.degenerate()) {
    if (a.solution.empty() && !a.internal) throw ParseError("certify needs --solution PATH or --internal");
    const SdpSolution s = a.internal ? solve_internal(p, 1e-9, false) : load_solution(p, a.solution);
    std::cout << "floating bound ≈ " << approx(s.bound, 9) << "\n";
    if (construction) {
      RoundingOptions o;
      o.denominator = q;
      o.target = target;
      o.diagonalize = !a.keep_qdash;
      const ConstructionTemplate c = resolve_construction(*construction, pf.spec.r, a.iterated);
      blocks = round_with_construction(p, s, c, o);
    } else {
      blocks = round_simple(s.q, q);
    }
  }

  std::vector<ScaledMatrix> expanded;
  for (const auto& b : blocks) expanded.push_back(expand(b));
  const auto coef = exact_coefficients(p.density, p.pair_density, expanded);
  Rational achieved = coef.empty() ? Rational(0) : *std::max_element(coef.begin(), coef.end());
  // With a construction the target is claimed; otherwise the rounded maximum.
  const Rational claimed = (construction && target) ? *target : achieved;

  const Certificate cert = make_certificate(p, std::move(blocks), claimed);
  const VerificationReport r = verify_certificate(cert);
  if (!r.verified()) {
    std::cerr << "internal verification failed at stage " << r.failed_stage << ": " << r.failure << "\n";
    return kExitVerification;
  }
  const std::string text = emit_certificate(cert);
  if (a.out.empty()) std::cout << text;
  else write_file(a.out, text);
  std::cout << "certified bound " << show(claimed) << "\n";
  return 0;
}

// --- verify / inspect -------------------------------------------------------

struct VerifyArgs {
  std::string certificate;
  std::vector<std::string> show;
};

void print_matrix(const RationalMatrix& m, const std::string& indent) {
  for (int i = 0; i < m.rows(); ++i) {
    std::cout << indent;
    for (int j = 0; j < m.cols(); ++j) std::cout << (j ? " " : "") << to_string(m(i, j));
    std::cout << "\n";
  }
}

int cmd_verify(const VerifyArgs& a) {
  const Certificate cert = parse_certificate(read_file(a.certificate));
  const std::set<std::string> want(a.show.begin(), a.show.end());
  const VerificationReport r = verify_certificate(cert);

  std::cout << cert.description() << "\n";
  if (want.count("graphs")) {
    std::cout << plural(cert.admissible.size(), "admissible graph") << " of order " << cert.order << "\n";
    for (size_t i = 0; i < cert.admissible.size(); ++i)
      std::cout << "  H" << i << "  " << cert.admissible[i].notation() << "\n";
  }
  if (want.count("types")) {
    std::cout << plural(cert.types.size(), "type") << "\n";
    for (size_t t = 0; t < cert.types.size(); ++t) std::cout << "  T" << t << "  " << cert.types[t].graph.notation() << "\n";
  }
  if (want.count("flags")) {
    for (size_t t = 0; t < cert.flags.size(); ++t) {
      std::cout << "type " << t << ": " << plural(cert.flags[t].size(), "flag") << "\n";
      for (size_t f = 0; f < cert.flags[t].size(); ++f) std::cout << "  F" << f << "  " << cert.flags[t][f].notation() << "\n";
    }
  }
  if (want.count("q-matrices")) {
    for (size_t t = 0; t < cert.blocks.size(); ++t) {
      std::cout << "type " << t << ": Q'\n";
      print_matrix(cert.blocks[t].qdash, "  ");
      std::cout << "type " << t << ": R\n";
      print_matrix(cert.blocks[t].r, "  ");
      const ScaledMatrix q = expand(cert.blocks[t]);
      RationalMatrix full(q.n, q.n);
      for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) full(i, j) = q.at(i, j);
      std::cout << "type " << t << ": Q = R Q' Rᵀ\n";
      print_matrix(full, "  ");
    }
  }
  if (want.count("densities") && r.density.size() == r.admissible.size()) {
    for (size_t h = 0; h < r.admissible.size(); ++h)
      std::cout << "  d(" << r.admissible[h].notation() << ") = " << show(r.density[h]) << "\n";
  }
  if (want.count("coefficients") && r.coefficients.size() == r.admissible.size()) {
    for (size_t h = 0; h < r.admissible.size(); ++h)
      std::cout << "  H" << h << "  " << r.admissible[h].notation() << "  " << show(r.coefficients[h]) << "\n";
  }
  if (want.count("tight") && r.failed_stage == 0) {
    std::cout << "graphs with a flag algebra coefficient equal to the bound:\n";
    for (int h : r.tight)
      std::cout << "  H" << h << "  " << r.admissible[static_cast<size_t>(h)].notation() << "\n";
  }

  if (r.failed_stage != 0) {
    std::cout << "stage " << r.failed_stage << " failed: " << r.failure << "\n";
    return kExitVerification;
  }
  if (!r.bound_ok) {
    std::cout << "stage 4 failed: " << r.failure << "\n";
    return kExitVerification;
  }
  std::cout << "VERIFIED: bound " << to_string(r.claimed) << "\n";
  std::cout << "achieved bound " << show(r.achieved) << ", " << plural(r.tight.size(), "tight graph") << "\n";
  if (r.achieved < r.claimed) std::cout << "note: the claimed bound is weaker than the achieved bound\n";
  return 0;
}

// --- lower-bound ------------------------------------------------------------

struct LowerBoundArgs {
  std::string construction;
  bool iterated = false;
  int r = 0;
};

int cmd_lower_bound(const LowerBoundArgs& a) {
  int r = a.r;
  if (r == 0) r = a.construction.find(' ') == std::string::npos ? named_template(a.construction).r : 3;
  const ConstructionTemplate c = resolve_construction(a.construction, r, a.iterated);
  std::cout << (c.kind == ConstructionKind::IteratedBlowUp ? "iterated blow-up of " : "blow-up of ")
            << c.tmpl.notation() << "\n";
  std::cout << "density " << show(construction_density(c)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flag algebra upper bounds with exact certificates"};
  app.require_subcommand(1);

  EnumerateArgs ea;
  auto* en = app.add_subcommand("enumerate", "List admissible graphs, types and flags");
  en->add_option("problem", ea.problem, "Problem file")->required();
  en->add_flag("--types", ea.types, "Also list types");
  en->add_flag("--flags", ea.flags, "Also list flags");
  en->add_flag("--densities", ea.densities, "Print every nonzero flag-pair density");

  BoundArgs ba;
  auto* bo = app.add_subcommand("bound", "Floating-point flag algebra bound");
  bo->add_option("problem", ba.problem, "Problem file")->required();
  auto* internal = bo->add_flag("--internal", ba.internal, "Solve with the built-in solver");
  bo->add_option("--export", ba.export_path, "Write the SDP in sparse SDPA format");
  auto* import = bo->add_option("--import", ba.import_path, "Read an external solver's solution file");
  internal->excludes(import);
  bo->add_option("--write-solution", ba.solution_out, "Write the solution in the import format");
  bo->add_option("--tolerance", ba.tolerance, "Solver tolerance");
  bo->add_flag("--verbose", ba.verbose, "Print solver iterations");

  CertifyArgs ca;
  auto* ce = app.add_subcommand("certify", "Round a solution and emit a verified certificate");
  ce->add_option("problem", ca.problem, "Problem file")->required();
  auto* sol = ce->add_option("--solution", ca.solution, "Solution file");
  auto* cint = ce->add_flag("--internal", ca.internal, "Solve with the built-in solver");
  sol->excludes(cint);
  ce->add_option("--construction", ca.construction, "Named template or custom blow-up");
  ce->add_flag("--iterated", ca.iterated, "Use the iterated blow-up");
  ce->add_option("--target", ca.target, "Target bound p/q");
  ce->add_option("--denominator,-q", ca.denominator, "Denominator bound q");
  ce->add_flag("--keep-qdash", ca.keep_qdash, "Keep Q' non-diagonal instead of diagonalising");
  ce->add_option("--out,-o", ca.out, "Certificate path (default stdout)");

  const std::vector<std::string> shows{"graphs", "types", "flags", "q-matrices", "densities", "coefficients", "tight"};
  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "Independently verify a certificate");
  ve->add_option("certificate", va.certificate, "Certificate file")->required();
  ve->add_option("--show", va.show, "Details to print")->check(CLI::IsMember(shows));
  VerifyArgs ia;
  auto* in = app.add_subcommand("inspect", "Verify a certificate and show its contents");
  in->add_option("certificate", ia.certificate, "Certificate file")->required();
  in->add_option("--show", ia.show, "Details to print")->check(CLI::IsMember(shows));

  LowerBoundArgs la;
  auto* lb = app.add_subcommand("lower-bound", "Exact edge density of a construction");
  lb->add_option("--construction", la.construction, "Named template or custom blow-up")->required();
  lb->add_flag("--iterated", la.iterated, "Iterated blow-up");
  lb->add_option("--r", la.r, "Uniformity for custom constructions (default 3)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*en) return cmd_enumerate(ea);
    if (*bo) return cmd_bound(ba);
    if (*ce) return cmd_certify(ca);
    if (*ve) return cmd_verify(va);
    if (*in) {
      if (ia.show.empty()) ia.show = shows;
      return cmd_verify(ia);
    }
    if (*lb) return cmd_lower_bound(la);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const RoundingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
