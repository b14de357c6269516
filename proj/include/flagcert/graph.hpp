#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flagcert {

inline constexpr int kMaxOrder = 9;

/// Bit set over all r-subsets of {0,...,8}. Subsets are ranked in
/// lexicographic order; rank k occupies bit 127-k, so a larger mask means a
/// lexicographically smaller sorted edge list.
using EdgeMask = unsigned __int128;

/// Sorted vertex tuple (0-based). Only the first r entries are meaningful.
using Edge = std::array<std::uint8_t, 3>;

/// An r-uniform hypergraph (r = 2 or 3) on vertices {0,...,n-1}, n <= 9.
/// Printed and parsed 1-based in the "n:digits" notation.
class Graph {
 public:
  Graph() = default;
  Graph(int r, int n);

  /// Parses "n:" followed by concatenated r-digit edges, e.g. "4:123124134".
  static Graph parse(std::string_view notation, int r);

  int uniformity() const { return r_; }
  int order() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  EdgeMask mask() const { return mask_; }

  bool has_edge(const Edge& e) const;
  bool has_edge(int a, int b) const;
  bool has_edge(int a, int b, int c) const;

  /// Adds the edge on the given distinct vertices (any order). Adding an
  /// existing edge is a no-op.
  void add_edge(std::span<const int> vertices);
  void add_edge(int a, int b) { add_edge(std::array{a, b}); }
  void add_edge(int a, int b, int c) { add_edge(std::array{a, b, c}); }

  /// Relabels vertex v as perm[v].
  Graph relabelled(std::span<const int> perm) const;
  /// Induced subgraph; vertex i of the result is vertices[i].
  Graph induced(std::span<const int> vertices) const;

  std::string notation() const;
  int degree(int v) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.r_ == b.r_ && a.n_ == b.n_ && a.mask_ == b.mask_;
  }

 private:
  void insert(Edge e);

  int r_ = 3;
  int n_ = 0;
  EdgeMask mask_ = 0;
  std::vector<Edge> edges_;  // sorted lexicographically
};

/// Lexicographic rank of a sorted r-subset of {0,...,8}.
int edge_rank(int r, const Edge& e);
EdgeMask edge_bit(int r, const Edge& e);

/// Isomorphism-class key. Holds the relabelling of the graph whose sorted
/// edge list is lexicographically minimal, among relabellings that keep the
/// first `fixed` vertices in place. With fixed = 0 equal keys mean isomorphic
/// graphs; with fixed = s they mean isomorphic by a map fixing 0,...,s-1.
struct CanonicalForm {
  int r = 3;
  int n = 0;
  int fixed = 0;
  EdgeMask mask = 0;

  /// The canonical graph in "n:digits" notation; doubles as a printable key.
  std::string key() const;
  Graph graph() const;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend std::strong_ordering operator<=>(const CanonicalForm& a, const CanonicalForm& b);
};

struct CanonicalFormHash {
  size_t operator()(const CanonicalForm& c) const noexcept;
};

CanonicalForm canonical_form(const Graph& g, int fixed = 0);

/// Canonical form together with the relabelling that produces it:
/// canonical graph == g.relabelled(perm).
struct CanonicalLabelling {
  CanonicalForm form;
  std::vector<int> perm;
};
CanonicalLabelling canonical_labelling(const Graph& g, int fixed = 0);

bool isomorphic(const Graph& a, const Graph& b);

/// True iff some injection V(h) -> V(g) maps every edge of h onto an edge of g.
bool contains_subgraph(const Graph& g, const Graph& h);
/// True iff some |V(h)|-subset of V(g) induces a copy of h.
bool contains_induced(const Graph& g, const Graph& h);

Graph complement(const Graph& g);

/// Link of vertex x (0-based) of a 3-graph: the 2-graph on the other n-1
/// vertices, relabelled in order, with ab an edge iff xab is.
Graph link_graph(const Graph& g, int x);

/// Iterates all k-subsets of {0,...,n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::span<const int>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace flagcert
