#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "flagcert/enumerate.hpp"
#include "flagcert/error.hpp"
#include "oracle.hpp"

using namespace flagcert;

namespace {

ProblemSpec spec(int r, std::vector<std::string> forbid, int m, bool induced = false) {
  ProblemSpec s;
  s.r = r;
  s.m = m;
  for (const auto& f : forbid) s.forbidden.push_back({Graph::parse(f, r), induced});
  return s;
}

// Isomorphism classes of admissible order-k graphs by brute force over all
// labelled graphs.
std::vector<Graph> brute_admissible(const ProblemSpec& s, int k) {
  std::vector<Graph> reps;
  const size_t nsets = oracle::all_r_sets(k, s.r).size();
  for (unsigned long long bits = 0; bits < (1ULL << nsets); ++bits) {
    const Graph g = oracle::from_bits(s.r, k, bits);
    bool ok = true;
    for (const auto& f : s.forbidden)
      if (oracle::embeds(f.graph, g, f.induced)) ok = false;
    if (!ok) continue;
    bool seen = false;
    for (const Graph& h : reps)
      if (oracle::isomorphic(g, h)) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(g);
  }
  return reps;
}

}  // namespace

TEST_CASE("admissible 3-graph counts without forbidden graphs") {
  const ProblemSpec s = spec(3, {}, 6);
  const std::vector<size_t> expected{1, 1, 2, 5, 34};
  for (int k = 1; k <= 5; ++k) CHECK(admissible_graphs(s, k).size() == expected[static_cast<size_t>(k - 1)]);
}

TEST_CASE("triangle-free 2-graphs") {
  const ProblemSpec s = spec(2, {"3:121323"}, 4);
  const auto three = admissible_graphs(s, 3);
  REQUIRE(three.size() == 3);
  std::set<int> edges;
  for (const Graph& g : three) edges.insert(g.edge_count());
  CHECK(edges == std::set<int>{0, 1, 2});
  CHECK(admissible_graphs(s, 4).size() == 7);
  CHECK(brute_admissible(s, 4).size() == 7);
}

TEST_CASE("forbidding the edge leaves only the empty graph") {
  const auto g = admissible_graphs(spec(3, {"3:123"}, 4), 4);
  REQUIRE(g.size() == 1);
  CHECK(g[0].edge_count() == 0);
}

TEST_CASE("closure against brute force at orders up to 5") {
  const std::vector<ProblemSpec> specs{
      spec(3, {"4:123124134"}, 5),
      spec(3, {"4:123124134", "5:123124125345"}, 5),
      spec(3, {"4:123"}, 5, true),
      spec(2, {"3:121323"}, 5),
      spec(2, {"4:12233441"}, 5),
  };
  for (const ProblemSpec& s : specs) {
    for (int k = 3; k <= (s.r == 3 ? 5 : 5); ++k) {
      const auto got = admissible_graphs(s, k);
      const auto want = brute_admissible(s, k);
      CHECK(got.size() == want.size());
      std::set<CanonicalForm> forms;
      for (const Graph& g : got) {
        forms.insert(canonical_form(g));
        for (const auto& f : s.forbidden) CHECK_FALSE(oracle::embeds(f.graph, g, f.induced));
      }
      CHECK(forms.size() == got.size());
      for (const Graph& w : want) CHECK(forms.count(canonical_form(w)) == 1);
    }
  }
}

TEST_CASE("enlarging the forbidden family never enlarges the admissible list") {
  const auto a = admissible_graphs(spec(3, {"4:123124134"}, 6), 6);
  const auto b = admissible_graphs(spec(3, {"4:123124134", "5:123124125345"}, 6), 6);
  CHECK(b.size() <= a.size());
  std::set<CanonicalForm> fa;
  for (const Graph& g : a) fa.insert(canonical_form(g));
  for (const Graph& g : b) CHECK(fa.count(canonical_form(g)) == 1);
}

TEST_CASE("output is deterministic and sorted by edge count, then canonical form") {
  const ProblemSpec s = spec(3, {"4:123124134"}, 5);
  const auto a = admissible_graphs(s, 5), b = admissible_graphs(s, 5);
  CHECK(a == b);
  for (size_t i = 1; i < a.size(); ++i) {
    const int ea = a[i - 1].edge_count(), eb = a[i].edge_count();
    CHECK((ea < eb || (ea == eb && canonical_form(a[i - 1]) < canonical_form(a[i]))));
  }
}

TEST_CASE("types") {
  const auto mantel = enumerate_types(spec(2, {"3:121323"}, 3));
  REQUIRE(mantel.size() == 1);
  CHECK(mantel[0].order() == 1);

  const auto m2 = enumerate_types(spec(3, {}, 2));
  REQUIRE(m2.size() == 1);
  CHECK(m2[0].order() == 0);

  const ProblemSpec k4m = spec(3, {"4:123124134"}, 5);
  const auto types = enumerate_types(k4m);
  std::map<int, size_t> by_order;
  for (const auto& t : types) ++by_order[t.order()];
  CHECK(by_order.size() == 2);
  CHECK(by_order[1] == brute_admissible(k4m, 1).size());
  CHECK(by_order[3] == brute_admissible(k4m, 3).size());
}

TEST_CASE("flags") {
  const ProblemSpec mantel = spec(2, {"3:121323"}, 3);
  const TypeGraph vertex = enumerate_types(mantel)[0];
  const auto f = enumerate_flags(vertex, 2, mantel);
  REQUIRE(f.size() == 2);
  CHECK(f[0].graph.edge_count() + f[1].graph.edge_count() == 1);
  CHECK(default_flag_order(3, 1) == 2);

  const ProblemSpec free3 = spec(3, {}, 4);
  TypeGraph pair{Graph(3, 2)};
  const auto ext = enumerate_flags(pair, 3, free3);
  CHECK(ext.size() == 2);
  CHECK(enumerate_flags(pair, 2, free3).size() == 1);
  CHECK_THROWS(enumerate_flags(pair, 1, free3));
}

TEST_CASE("flags are admissible, extend the type and are pairwise non-isomorphic") {
  const ProblemSpec s = spec(3, {"4:123124134", "5:123124125345"}, 6);
  for (const TypeGraph& t : enumerate_types(s)) {
    const int l = default_flag_order(s.m, t.order());
    const auto flags = enumerate_flags(t, l, s);
    for (size_t i = 0; i < flags.size(); ++i) {
      const Flag& f = flags[i];
      CHECK(f.order() == l);
      CHECK(f.type_order == t.order());
      std::vector<int> prefix(static_cast<size_t>(t.order()));
      std::iota(prefix.begin(), prefix.end(), 0);
      CHECK(f.graph.induced(prefix) == t.graph);
      for (const auto& fb : s.forbidden) CHECK_FALSE(contains_subgraph(f.graph, fb.graph));
      for (size_t j = 0; j < i; ++j) CHECK_FALSE(oracle::label_isomorphic(f.graph, flags[j].graph, t.order()));
    }
  }
}

TEST_CASE("flag notation round-trips") {
  const Flag f = Flag::parse("3:123(2)", 3);
  CHECK(f.type_order == 2);
  CHECK(f.notation() == "3:123(2)");
  CHECK_THROWS_AS(Flag::parse("3:123(x)", 3), ParseError);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(spec(3, {}, 8).validate(), DomainError);
  CHECK_THROWS_AS(spec(3, {"5:123124125345"}, 4).validate(), DomainError);
  ProblemSpec mixed = spec(3, {}, 4);
  mixed.forbidden.push_back({Graph::parse("3:12", 2), false});
  CHECK_THROWS_AS(mixed.validate(), DomainError);
}
