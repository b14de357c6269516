#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flagcert/enumerate.hpp"
#include "flagcert/rational.hpp"

namespace flagcert {

/// Probability that a uniformly random |V(h)|-subset of V(g) induces a copy of h.
Rational subgraph_density(const Graph& h, const Graph& g);

/// |E(h)| / C(|V(h)|, r).
Rational edge_density(const Graph& h);

/// Exact distribution of the isomorphism class induced by a random k-subset
/// of V(g): pairs (canonical form, density), sorted by canonical form.
std::vector<std::pair<CanonicalForm, Rational>> induced_distribution(const Graph& g, int k);

/// Maps a partially labelled graph to its position in a flag list, or -1.
class FlagIndex {
 public:
  explicit FlagIndex(std::span<const Flag> flags);
  int find(const Graph& g, int type_order) const;
  int size() const { return size_; }

 private:
  std::vector<std::pair<CanonicalForm, int>> sorted_;
  int size_ = 0;
};

/// Flag-pair densities as integer counts over one common denominator; only
/// nonzero entries are stored, sorted by (i, j).
struct PairDensityTable {
  struct Entry {
    std::uint16_t i;
    std::uint16_t j;
    std::uint32_t count;
  };
  int dimension = 0;
  std::int64_t denominator = 1;
  std::vector<Entry> entries;

  Rational at(int i, int j) const;
  RationalMatrix dense() const;
};

PairDensityTable pair_density_counts(const TypeGraph& type, std::span<const Flag> flags, const Graph& h);

/// Flag-pair densities d_{F,F'}(h) for every pair of flags over `type`,
/// computed by enumerating every injective labelling of the type into V(h)
/// and every ordered pair of disjoint extension sets. Labellings that do not
/// induce the type stay in the sample space and contribute nothing.
/// Requires all flags to share one order l with |V(h)| >= 2l - s.
RationalMatrix flag_pair_density_table(const TypeGraph& type, std::span<const Flag> flags, const Graph& h);

/// Flag densities d_F(g) for one random labelling and one extension set.
std::vector<Rational> flag_densities(const TypeGraph& type, std::span<const Flag> flags, const Graph& g);

/// Probability that a random injective labelling of type's vertices into g
/// induces the type.
Rational type_density(const TypeGraph& type, const Graph& g);

/// Checks d_{F,F'}(g) = sum_H d_H(g) d_{F,F'}(H) over all order-m classes H.
bool averaging_check(const TypeGraph& type, std::span<const Flag> flags, const Graph& g, int m);

}  // namespace flagcert
