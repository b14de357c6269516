// Brute-force reference implementations used as test oracles. They share
// nothing with the library beyond the Graph container and subset iteration.
#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "flagcert/graph.hpp"
#include "flagcert/rational.hpp"

namespace oracle {

using flagcert::Graph;
using flagcert::Rational;

inline std::vector<std::vector<int>> all_r_sets(int n, int r) {
  std::vector<std::vector<int>> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (r == 2) {
        out.push_back({a, b});
        continue;
      }
      for (int c = b + 1; c < n; ++c) out.push_back({a, b, c});
    }
  return out;
}

inline Graph from_bits(int r, int n, unsigned long long bits) {
  Graph g(r, n);
  const auto sets = all_r_sets(n, r);
  for (size_t k = 0; k < sets.size(); ++k)
    if (bits >> k & 1) g.add_edge(sets[k]);
  return g;
}

inline Graph random_graph(std::mt19937_64& rng, int r, int n, double p = 0.5) {
  Graph g(r, n);
  std::bernoulli_distribution coin(p);
  for (const auto& e : all_r_sets(n, r))
    if (coin(rng)) g.add_edge(e);
  return g;
}

inline bool edge_in(const Graph& g, const std::vector<int>& v) {
  return v.size() == 2 ? g.has_edge(v[0], v[1]) : g.has_edge(v[0], v[1], v[2]);
}

// Image of h under vertex map f (h vertex i -> f[i]).
inline bool maps_edges(const Graph& h, const Graph& g, const std::vector<int>& f, bool induced) {
  for (const auto& e : all_r_sets(h.order(), h.uniformity())) {
    std::vector<int> img;
    for (int v : e) img.push_back(f[static_cast<size_t>(v)]);
    std::sort(img.begin(), img.end());
    const bool in_h = edge_in(h, e), in_g = edge_in(g, img);
    if (in_h && !in_g) return false;
    if (induced && in_g && !in_h) return false;
  }
  return true;
}

// Tries every injection V(h) -> V(g).
inline bool embeds(const Graph& h, const Graph& g, bool induced) {
  if (h.order() > g.order()) return false;
  std::vector<int> pool(static_cast<size_t>(g.order()));
  std::iota(pool.begin(), pool.end(), 0);
  // Enumerate ordered selections via permutations of subsets.
  std::vector<bool> pick(static_cast<size_t>(g.order()), false);
  std::fill(pick.begin(), pick.begin() + h.order(), true);
  do {
    std::vector<int> chosen;
    for (int i = 0; i < g.order(); ++i)
      if (pick[static_cast<size_t>(i)]) chosen.push_back(i);
    do {
      if (maps_edges(h, g, chosen, induced)) return true;
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

inline bool isomorphic(const Graph& a, const Graph& b) {
  return a.order() == b.order() && a.edge_count() == b.edge_count() && embeds(a, b, true);
}

// Partially labelled isomorphism: vertices < fixed must map to themselves.
inline bool label_isomorphic(const Graph& a, const Graph& b, int fixed) {
  if (a.order() != b.order() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> f(static_cast<size_t>(a.order()));
  std::iota(f.begin(), f.end(), 0);
  do {
    if (maps_edges(a, b, f, true)) return true;
  } while (std::next_permutation(f.begin() + fixed, f.end()));
  return false;
}

inline Rational choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  Rational c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

// Fraction of k-subsets of V(g) inducing a copy of h.
inline Rational induced_density(const Graph& h, const Graph& g) {
  const int k = h.order();
  long hits = 0;
  flagcert::for_each_subset(g.order(), k, [&](std::span<const int> s) {
    if (oracle::isomorphic(g.induced(s), h)) ++hits;
  });
  return Rational(hits) / choose(g.order(), k);
}

inline Rational edge_density(const Graph& g) {
  return Rational(g.edge_count()) / choose(g.order(), g.uniformity());
}

}  // namespace oracle
