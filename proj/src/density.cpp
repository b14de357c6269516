#include "flagcert/density.hpp"

#include <algorithm>
#include <map>

#include "flagcert/error.hpp"

namespace flagcert {

Rational subgraph_density(const Graph& h, const Graph& g) {
  if (h.uniformity() != g.uniformity()) throw DomainError("uniformity mismatch");
  if (h.order() > g.order()) throw DomainError("subgraph larger than host graph");
  const CanonicalForm target = canonical_form(h);
  std::int64_t hits = 0;
  for_each_subset(g.order(), h.order(), [&](std::span<const int> s) {
    Graph sub = g.induced(s);
    if (sub.edge_count() == h.edge_count() && canonical_form(sub) == target) ++hits;
  });
  Rational d(hits, binomial(g.order(), h.order()));
  d.canonicalize();
  return d;
}

Rational edge_density(const Graph& h) {
  if (h.order() < h.uniformity()) throw DomainError("edge density needs at least r vertices");
  Rational d(h.edge_count(), binomial(h.order(), h.uniformity()));
  d.canonicalize();
  return d;
}

std::vector<std::pair<CanonicalForm, Rational>> induced_distribution(const Graph& g, int k) {
  if (k < 0 || k > g.order()) throw DomainError("subset order out of range");
  std::map<CanonicalForm, std::int64_t> counts;
  for_each_subset(g.order(), k, [&](std::span<const int> s) { ++counts[canonical_form(g.induced(s))]; });
  const std::int64_t total = binomial(g.order(), k);
  std::vector<std::pair<CanonicalForm, Rational>> out;
  for (const auto& [form, count] : counts) {
    Rational d(count, total);
    d.canonicalize();
    out.emplace_back(form, d);
  }
  return out;
}

FlagIndex::FlagIndex(std::span<const Flag> flags) : size_(static_cast<int>(flags.size())) {
  for (size_t i = 0; i < flags.size(); ++i) sorted_.emplace_back(flags[i].key(), static_cast<int>(i));
  std::sort(sorted_.begin(), sorted_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

int FlagIndex::find(const Graph& g, int type_order) const {
  CanonicalForm key = canonical_form(g, type_order);
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), key,
                             [](const auto& entry, const CanonicalForm& k) { return entry.first < k; });
  if (it == sorted_.end() || !(it->first == key)) return -1;
  return it->second;
}

namespace {

// Calls fn(theta) for every ordered tuple of s distinct vertices of {0..n-1}.
template <typename Fn>
void for_each_injection(int n, int s, Fn&& fn) {
  std::vector<int> theta(static_cast<size_t>(s));
  std::vector<bool> used(static_cast<size_t>(n), false);
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == s) {
      fn(std::span<const int>(theta));
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[static_cast<size_t>(v)]) continue;
      used[static_cast<size_t>(v)] = true;
      theta[static_cast<size_t>(depth)] = v;
      self(self, depth + 1);
      used[static_cast<size_t>(v)] = false;
    }
  };
  rec(rec, 0);
}

std::int64_t falling_factorial(int n, int k) {
  std::int64_t out = 1;
  for (int i = 0; i < k; ++i) out *= n - i;
  return out;
}

int common_flag_order(const TypeGraph& type, std::span<const Flag> flags) {
  const int l = flags.front().order();
  for (const Flag& f : flags) {
    if (f.order() != l) throw DomainError("flags of different orders in one table");
    if (f.type_order != type.order()) throw DomainError("flag " + f.notation() + " does not match the type order");
    if (f.graph.uniformity() != type.graph.uniformity()) throw DomainError("flag uniformity mismatch");
  }
  return l;
}

// For a labelling theta that induces the type: the flag index of every
// (l-s)-subset of the remaining vertices, keyed by the subset's vertex bitmask.
std::vector<std::pair<unsigned, int>> extension_indices(const Graph& h, std::span<const int> theta, int free,
                                                        const FlagIndex& index) {
  const int s = static_cast<int>(theta.size());
  std::vector<int> rest;
  for (int v = 0; v < h.order(); ++v)
    if (std::find(theta.begin(), theta.end(), v) == theta.end()) rest.push_back(v);
  std::vector<std::pair<unsigned, int>> out;
  std::vector<int> vertices(theta.begin(), theta.end());
  vertices.resize(static_cast<size_t>(s + free));
  for_each_subset(static_cast<int>(rest.size()), free, [&](std::span<const int> pick) {
    unsigned bits = 0;
    for (int i = 0; i < free; ++i) {
      int v = rest[static_cast<size_t>(pick[static_cast<size_t>(i)])];
      vertices[static_cast<size_t>(s + i)] = v;
      bits |= 1u << v;
    }
    out.emplace_back(bits, index.find(h.induced(vertices), s));
  });
  return out;
}

}  // namespace

PairDensityTable pair_density_counts(const TypeGraph& type, std::span<const Flag> flags, const Graph& h) {
  PairDensityTable out;
  if (flags.empty()) return out;
  if (type.graph.uniformity() != h.uniformity()) throw DomainError("uniformity mismatch");
  const int s = type.order();
  const int l = common_flag_order(type, flags);
  const int n = h.order();
  const int free = l - s;
  if (n < 2 * l - s) {
    throw DomainError("graph of order " + std::to_string(n) + " too small for flag pairs of order " +
                      std::to_string(l) + " over a type of order " + std::to_string(s));
  }
  const FlagIndex index(flags);
  std::map<std::pair<int, int>, std::uint32_t> counts;
  for_each_injection(n, s, [&](std::span<const int> theta) {
    if (h.induced(theta).mask() != type.graph.mask()) return;
    auto ext = extension_indices(h, theta, free, index);
    for (const auto& [bits1, f1] : ext) {
      if (f1 < 0) continue;
      for (const auto& [bits2, f2] : ext) {
        if (f2 < 0 || (bits1 & bits2) != 0) continue;
        ++counts[{f1, f2}];
      }
    }
  });
  out.dimension = static_cast<int>(flags.size());
  out.denominator = falling_factorial(n, s) * binomial(n - s, free) * binomial(n - s - free, free);
  for (const auto& [ij, c] : counts)
    out.entries.push_back({static_cast<std::uint16_t>(ij.first), static_cast<std::uint16_t>(ij.second), c});
  return out;
}

Rational PairDensityTable::at(int i, int j) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), std::make_pair(i, j), [](const Entry& e, const auto& key) {
    return std::make_pair(static_cast<int>(e.i), static_cast<int>(e.j)) < key;
  });
  if (it == entries.end() || it->i != i || it->j != j) return 0;
  Rational v(static_cast<long>(it->count), denominator);
  v.canonicalize();
  return v;
}

RationalMatrix PairDensityTable::dense() const {
  RationalMatrix m(dimension, dimension);
  for (const Entry& e : entries) {
    Rational v(static_cast<long>(e.count), denominator);
    v.canonicalize();
    m(e.i, e.j) = v;
  }
  return m;
}

RationalMatrix flag_pair_density_table(const TypeGraph& type, std::span<const Flag> flags, const Graph& h) {
  return pair_density_counts(type, flags, h).dense();
}

std::vector<Rational> flag_densities(const TypeGraph& type, std::span<const Flag> flags, const Graph& g) {
  if (flags.empty()) return {};
  const int s = type.order();
  const int l = common_flag_order(type, flags);
  const int n = g.order();
  if (n < l) throw DomainError("graph smaller than the flags");
  const FlagIndex index(flags);
  std::vector<std::int64_t> counts(flags.size(), 0);
  for_each_injection(n, s, [&](std::span<const int> theta) {
    if (g.induced(theta).mask() != type.graph.mask()) return;
    for (const auto& [bits, f] : extension_indices(g, theta, l - s, index)) {
      if (f >= 0) ++counts[static_cast<size_t>(f)];
    }
  });
  const std::int64_t total = falling_factorial(n, s) * binomial(n - s, l - s);
  std::vector<Rational> out;
  for (auto c : counts) {
    Rational v(c, total);
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

Rational type_density(const TypeGraph& type, const Graph& g) {
  const int s = type.order();
  if (s > g.order()) throw DomainError("type larger than graph");
  std::int64_t hits = 0;
  for_each_injection(g.order(), s, [&](std::span<const int> theta) {
    if (g.induced(theta).mask() == type.graph.mask()) ++hits;
  });
  Rational d(hits, falling_factorial(g.order(), s));
  d.canonicalize();
  return d;
}

bool averaging_check(const TypeGraph& type, std::span<const Flag> flags, const Graph& g, int m) {
  if (flags.empty()) return true;
  const int l = common_flag_order(type, flags);
  if (m < 2 * l - type.order() || m > g.order()) throw DomainError("averaging check needs |V(G)| >= m >= 2l - s");
  const RationalMatrix direct = flag_pair_density_table(type, flags, g);
  RationalMatrix averaged(direct.rows(), direct.cols());
  for (const auto& [form, weight] : induced_distribution(g, m)) {
    const RationalMatrix t = flag_pair_density_table(type, flags, form.graph());
    for (int i = 0; i < t.rows(); ++i)
      for (int j = 0; j < t.cols(); ++j) averaged(i, j) += weight * t(i, j);
  }
  return averaged == direct;
}

}  // namespace flagcert
