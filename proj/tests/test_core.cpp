#include <numeric>
#include <random>

#include "doctest.h"
#include "flagcert/error.hpp"
#include "flagcert/graph.hpp"
#include "flagcert/rational.hpp"
#include "oracle.hpp"

using namespace flagcert;

namespace {

const Graph k4 = Graph::parse("4:123124134234", 3);
const Graph k4minus = Graph::parse("4:123124134", 3);
const Graph f32 = Graph::parse("5:123124125345", 3);
const Graph c5 = Graph::parse("5:123234345145125", 3);
const Graph h6 = Graph::parse("6:123234345145125136356256246146", 3);
const Graph h7 = Graph::parse("7:124137156235267346457653647621542517431327", 3);

std::vector<int> random_perm(std::mt19937_64& rng, int n) {
  std::vector<int> p(static_cast<size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

Graph k4_blowup_2222() {
  Graph g(3, 8);
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      for (int c = b + 1; c < 8; ++c)
        if (a / 2 != b / 2 && b / 2 != c / 2 && a / 2 != c / 2) g.add_edge(a, b, c);
  return g;
}

}  // namespace

TEST_CASE("rationals print as integers or p/q and parse back") {
  CHECK(to_string(Rational(3) / 6) == "1/2");
  CHECK(to_string(Rational(4) / 2) == "2");
  CHECK(to_string(Rational(-5, 3)) == "-5/3");
  CHECK(parse_rational("10/4") == Rational(5, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK(nearest_rational(0.3333333333, 1000) == Rational(1, 3));
}

TEST_CASE("graph notation") {
  const Graph e = Graph::parse("3:123", 3);
  CHECK(e.order() == 3);
  CHECK(e.edge_count() == 1);
  CHECK(e.has_edge(0, 1, 2));
  const Graph empty = Graph::parse("3:", 3);
  CHECK(empty.order() == 3);
  CHECK(empty.edge_count() == 0);
  CHECK(k4minus.edge_count() == 3);
  CHECK(oracle::isomorphic(k4minus, Graph::parse("4:213214234", 3)));
  CHECK(k4minus.notation() == "4:123124134");
  CHECK(Graph::parse(k4minus.notation(), 3) == k4minus);

  CHECK_THROWS_AS(Graph::parse("3123", 3), ParseError);
  CHECK_THROWS_AS(Graph::parse("3:12", 3), ParseError);
  CHECK_THROWS_AS(Graph::parse("3:124", 3), ParseError);
  CHECK_THROWS_AS(Graph::parse("3:112", 3), ParseError);
  CHECK_THROWS_AS(Graph::parse("3:123123", 3), ParseError);
  CHECK_THROWS_AS(Graph::parse("3:123132", 3), ParseError);
  CHECK_THROWS_AS(Graph::parse("4:1x3", 3), ParseError);
  CHECK_THROWS_AS(Graph::parse("3:11", 2), ParseError);
}

TEST_CASE("canonical form examples") {
  CHECK(canonical_form(Graph::parse("4:123124134", 3)) == canonical_form(Graph::parse("4:213214234", 3)));
  const Graph empty(3, 4);
  std::vector<int> p{3, 1, 0, 2};
  CHECK(canonical_form(empty) == canonical_form(empty.relabelled(p)));
  CHECK(canonical_form(k4) != canonical_form(k4minus));
}

TEST_CASE("canonical form is invariant under 1000 random relabellings") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    const int r = t % 4 == 0 ? 2 : 3;
    const int n = 1 + static_cast<int>(rng() % 7);
    const Graph g = oracle::random_graph(rng, r, n, 0.1 + 0.8 * (rng() % 100) / 100.0);
    const auto p = random_perm(rng, n);
    const Graph h = g.relabelled(p);
    // The relabelling really is an isomorphism.
    REQUIRE(oracle::maps_edges(g, h, p, true));
    CHECK(canonical_form(g) == canonical_form(h));
  }
}

TEST_CASE("equal canonical forms exactly when isomorphic (n <= 6)") {
  std::mt19937_64 rng(12);
  int iso = 0;
  for (int t = 0; t < 400; ++t) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const int r = t % 3 == 0 ? 2 : 3;
    // Sparse edge sets collide often enough to exercise both outcomes.
    const Graph a = oracle::random_graph(rng, r, n, 0.25);
    const Graph b = rng() % 2 ? a.relabelled(random_perm(rng, n)) : oracle::random_graph(rng, r, n, 0.25);
    const bool same = canonical_form(a) == canonical_form(b);
    CHECK(same == oracle::isomorphic(a, b));
    iso += same;
  }
  CHECK(iso > 100);
  CHECK(iso < 400);
}

TEST_CASE("partially labelled canonical forms respect the labels") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const int fixed = static_cast<int>(rng() % 3);
    const Graph a = oracle::random_graph(rng, 3, n, 0.4);
    std::vector<int> p(static_cast<size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin() + (rng() % 2 ? fixed : 0), p.end(), rng);
    const Graph b = a.relabelled(p);
    CHECK((canonical_form(a, fixed) == canonical_form(b, fixed)) == oracle::label_isomorphic(a, b, fixed));
  }
}

TEST_CASE("subgraph containment") {
  CHECK(contains_subgraph(k4, k4minus));
  CHECK_FALSE(contains_subgraph(k4minus, k4));
  CHECK_FALSE(contains_subgraph(k4_blowup_2222(), f32));
  CHECK_FALSE(contains_subgraph(h7, c5));
  CHECK(contains_subgraph(h6, c5));
  CHECK_THROWS_AS(contains_subgraph(k4, Graph::parse("3:12", 2)), DomainError);
}

TEST_CASE("induced containment") {
  const Graph g1 = Graph::parse("4:123", 3);
  CHECK_FALSE(contains_induced(k4, k4minus));
  CHECK_FALSE(contains_induced(k4_blowup_2222(), k4minus));
  CHECK(oracle::embeds(k4minus, k4_blowup_2222(), true) == false);
  CHECK(contains_induced(f32, g1));
  CHECK(oracle::embeds(g1, f32, true));
  CHECK_THROWS_AS(contains_induced(k4, Graph::parse("3:12", 2)), DomainError);
}

TEST_CASE("containment agrees with brute force") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 300; ++t) {
    const int n = 4 + static_cast<int>(rng() % 3);
    const Graph g = oracle::random_graph(rng, 3, n, 0.5);
    const Graph h = oracle::random_graph(rng, 3, 3 + static_cast<int>(rng() % 2), 0.5);
    const bool sub = contains_subgraph(g, h), ind = contains_induced(g, h);
    CHECK(sub == oracle::embeds(h, g, false));
    CHECK(ind == oracle::embeds(h, g, true));
    // An induced copy is in particular a copy.
    if (ind) CHECK(sub);
  }
}

TEST_CASE("complement") {
  CHECK(complement(Graph(3, 4)) == k4);
  const Graph fano = Graph::parse("7:124137156235267346457", 3);
  CHECK(complement(fano).edge_count() == 28);
  std::mt19937_64 rng(15);
  for (int t = 0; t < 100; ++t) {
    const int r = t % 2 ? 2 : 3;
    const Graph g = oracle::random_graph(rng, r, 1 + static_cast<int>(rng() % 8));
    CHECK(complement(complement(g)) == g);
    const Graph h = g.relabelled(random_perm(rng, g.order()));
    CHECK(canonical_form(complement(g)) == canonical_form(complement(h)));
  }
}

TEST_CASE("link graphs") {
  const Graph cycle5 = Graph::parse("5:1223344515", 2);
  const Graph cycle6 = Graph::parse("6:122334455616", 2);
  for (int x = 0; x < 6; ++x) CHECK(oracle::isomorphic(link_graph(h6, x), cycle5));
  for (int x = 0; x < 7; ++x) CHECK(oracle::isomorphic(link_graph(h7, x), cycle6));
  const Graph l = link_graph(Graph(3, 5), 2);
  CHECK(l.uniformity() == 2);
  CHECK(l.order() == 4);
  CHECK(l.edge_count() == 0);
  CHECK_THROWS_AS(link_graph(h6, 6), DomainError);
}

TEST_CASE("graphs whose 4-sets span 0 or 2 edges are K4- and F32 free") {
  // Exhaustive over every labelled 3-graph on at most 6 vertices.
  long checked = 0;
  for (int n = 1; n <= 6; ++n) {
    const auto triples = oracle::all_r_sets(n, 3);
    std::vector<unsigned long long> quad_masks;
    for_each_subset(n, 4, [&](std::span<const int> q) {
      unsigned long long m = 0;
      for (size_t k = 0; k < triples.size(); ++k) {
        const auto& e = triples[k];
        if (std::count(q.begin(), q.end(), e[0]) && std::count(q.begin(), q.end(), e[1]) &&
            std::count(q.begin(), q.end(), e[2]))
          m |= 1ULL << k;
      }
      quad_masks.push_back(m);
    });
    for (unsigned long long bits = 0; bits < (1ULL << triples.size()); ++bits) {
      bool ok = true;
      for (unsigned long long m : quad_masks) {
        const int c = __builtin_popcountll(bits & m);
        if (c != 0 && c != 2) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const Graph g = oracle::from_bits(3, n, bits);
      CHECK_FALSE(contains_subgraph(g, k4minus));
      if (n >= 5) CHECK_FALSE(contains_subgraph(g, f32));
      ++checked;
    }
  }
  CHECK(checked > 100);
}
