#include <sstream>

#include "doctest.h"
#include "flagcert/error.hpp"
#include "flagcert/optimize.hpp"

using namespace flagcert;

namespace {

ProblemSpec spec(int r, std::vector<std::string> forbid, int m) {
  ProblemSpec s;
  s.r = r;
  s.m = m;
  for (const auto& f : forbid) s.forbidden.push_back({Graph::parse(f, r), false});
  return s;
}

const ProblemSpec mantel = spec(2, {"3:121323"}, 3);

std::string export_text(const SdpProblem& p) {
  std::ostringstream out;
  write_sparse_sdp(to_sparse_sdp(p), out);
  return out.str();
}

}  // namespace

TEST_CASE("assembly") {
  const SdpProblem p = assemble(mantel);
  CHECK(p.constraint_count() == 3);
  REQUIRE(p.blocks.size() == 1);
  CHECK(p.blocks[0].dimension() == 2);
  CHECK(p.density == std::vector<Rational>{0, Rational(1, 3), Rational(2, 3)});

  const SdpProblem e = assemble(spec(3, {"3:123"}, 3));
  CHECK(e.constraint_count() == 1);
  CHECK(solve_small(e).bound == doctest::Approx(0).epsilon(1e-9));

  const ProblemSpec k4m = spec(3, {"4:123124134"}, 5);
  const SdpProblem q = assemble(k4m);
  CHECK(q.constraint_count() == static_cast<int>(admissible_graphs(k4m, 5).size()));
  CHECK(q.blocks.size() == enumerate_types(k4m).size());
  for (const TypeBlock& b : q.blocks)
    CHECK(b.dimension() == static_cast<int>(enumerate_flags(b.type, default_flag_order(5, b.type.order()), k4m).size()));
}

TEST_CASE("degenerate problems") {
  const SdpProblem none = assemble(spec(3, {"3:"}, 3));
  CHECK(none.admissible.empty());
  CHECK(none.degenerate());
  CHECK(none.degenerate_bound() == 0);
  CHECK_THROWS_AS(to_sparse_sdp(none), DomainError);
  CHECK(solve_small(none).bound == 0);
}

TEST_CASE("sparse SDPA export") {
  const SdpProblem p = assemble(mantel);
  const SparseSdp s = to_sparse_sdp(p);
  CHECK(s.variables == 4);
  CHECK(s.block_sizes == std::vector<int>{2, -3});
  CHECK(s.objective == std::vector<double>{1, 0, 0, 0});
  const std::string text = export_text(p);
  CHECK(text.rfind("4\n2\n2 -3\n", 0) == 0);
  std::istringstream in(text);
  CHECK(parse_sparse_sdp(in) == s);
  CHECK(export_text(p) == text);
}

TEST_CASE("SDPA numbers") {
  CHECK(sdpa_number(Rational(1, 4)) == "0.25");
  CHECK(sdpa_number(Rational(3)) == "3");
  CHECK(sdpa_number(Rational(-1, 8)) == "-0.125");
  CHECK(std::stod(sdpa_number(Rational(1, 3))) == 1.0 / 3.0);
}

TEST_CASE("SDPA parser errors") {
  std::istringstream bad("2\n1\n2\n1 0\n1 1 1 x 1\n");
  CHECK_THROWS_AS(parse_sparse_sdp(bad), ParseError);
  std::istringstream short_header("2\n");
  CHECK_THROWS_AS(parse_sparse_sdp(short_header), ParseError);
}

TEST_CASE("export is invariant under relabelling the forbidden graphs") {
  const std::string a = export_text(assemble(spec(3, {"4:123124134", "5:123124125345"}, 5)));
  const std::string b = export_text(assemble(spec(3, {"4:234134124", "5:134234345125"}, 5)));
  CHECK(a == b);
}

TEST_CASE("internal solver") {
  SUBCASE("Mantel") {
    const SdpProblem p = assemble(mantel);
    const SdpSolution s = solve_small(p);
    CHECK(s.bound == doctest::Approx(0.5).epsilon(1e-5));
    REQUIRE(s.q.size() == 1);
    // Q is a multiple of [[1,-1],[-1,1]] on the optimal face.
    CHECK(s.q[0](0, 0) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(s.q[0](0, 1) == doctest::Approx(-0.5).epsilon(1e-4));
    CHECK(s.q[0](1, 1) == doctest::Approx(0.5).epsilon(1e-4));
  }
  SUBCASE("Mantel at order 4") {
    CHECK(solve_small(assemble(spec(2, {"3:121323"}, 4))).bound == doctest::Approx(0.5).epsilon(1e-5));
  }
  SUBCASE("nothing forbidden") {
    CHECK(std::abs(solve_small(assemble(spec(3, {}, 3))).bound - 1.0) < 1e-8);
  }
  SUBCASE("feasibility and construction lower bounds") {
    const SdpProblem p = assemble(spec(3, {"4:123124134"}, 5));
    const SdpSolution s = solve_small(p);
    for (double c : float_coefficients(p, s.q)) CHECK(c <= s.bound + 1e-7);
    for (const auto& q : s.q) CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues()(0) > -1e-7);
    // The iterated blow-up of H6 is K4- free with density 2/7.
    CHECK(s.bound >= 2.0 / 7.0 - 1e-6);
  }
  SUBCASE("bounds do not increase with the order") {
    double previous = 2;
    for (int m = 3; m <= 5; ++m) {
      const double b = solve_small(assemble(spec(2, {"3:121323"}, m))).bound;
      CHECK(b <= previous + 1e-6);
      CHECK(b >= 0.5 - 1e-6);
      previous = b;
    }
  }
  SUBCASE("capacity") {
    SdpProblem p = assemble(mantel);
    p.blocks[0].flags.resize(kInternalMaxDenseDimension + 1, p.blocks[0].flags[0]);
    CHECK_THROWS_AS(solve_small(p), CapacityError);
  }
}

TEST_CASE("solution files") {
  const SdpProblem p = assemble(spec(2, {"3:121323"}, 4));
  const SdpSolution s = solve_small(p);
  std::ostringstream out;
  write_solution(p, s, out);
  const std::string text = out.str();

  std::istringstream in(text);
  const SdpSolution back = import_solution(p, in);
  CHECK(back.bound == doctest::Approx(s.bound).epsilon(1e-12));
  REQUIRE(back.q.size() == s.q.size());
  CHECK((back.q[0] - s.q[0]).cwiseAbs().maxCoeff() < 1e-12);

  SUBCASE("truncated file") {
    const std::string cut = text.substr(0, text.find("\n2 ") + 1);
    std::istringstream t(cut);
    try {
      import_solution(p, t);
      FAIL("truncated file accepted");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("block") != std::string::npos);
    }
    std::string partial = text.substr(0, text.rfind('\n', text.size() - 2) + 1) + "2 1 1";
    std::istringstream half(partial);
    CHECK_THROWS_AS(import_solution(p, half), ParseError);
  }
  SUBCASE("wrong problem") {
    std::istringstream t(text);
    try {
      import_solution(assemble(mantel), t);
      FAIL("mismatched solution accepted");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("dimension mismatch") != std::string::npos);
    }
  }
  SUBCASE("garbage") {
    std::istringstream t("not a number\n");
    CHECK_THROWS_AS(import_solution(p, t), ParseError);
  }
}

TEST_CASE("density table export") {
  std::ostringstream out;
  write_density_tables(assemble(mantel), out);
  const std::string text = out.str();
  CHECK(text.find("3:12 2:(1) 2:(1) 1/3") != std::string::npos);
  CHECK(text.find("3:1213 2:12(1) 2:12(1) 1/3") != std::string::npos);
}
