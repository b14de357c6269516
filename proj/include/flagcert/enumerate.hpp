#pragma once

#include <vector>

#include "flagcert/graph.hpp"

namespace flagcert {

inline constexpr int kMaxAdmissibleOrder = 7;

struct Forbidden {
  Graph graph;
  bool induced = false;
};

/// The family of forbidden configurations plus the admissible order m.
struct ProblemSpec {
  int r = 3;
  std::vector<Forbidden> forbidden;
  int m = 3;

  /// Throws DomainError when a forbidden graph has the wrong uniformity or
  /// order above m, or m is outside [1, 7].
  void validate() const;
};

/// A fully labelled graph of order s; vertex i carries label i+1.
struct TypeGraph {
  Graph graph;

  int order() const { return graph.order(); }
};

/// A graph of order l whose first s vertices carry the labels of `type`.
/// Two flags are equal iff some isomorphism fixes each labelled vertex.
struct Flag {
  Graph graph;
  int type_order = 0;

  int order() const { return graph.order(); }
  int free_vertices() const { return graph.order() - type_order; }
  CanonicalForm key() const { return canonical_form(graph, type_order); }
  /// "l:digits(s)"
  std::string notation() const;
  static Flag parse(std::string_view text, int r);
};

/// No forbidden subgraph (or induced subgraph, per entry) occurs in g.
bool is_admissible(const ProblemSpec& spec, const Graph& g);

/// One canonical representative per isomorphism class of admissible graphs
/// of order k, ordered by edge count and then canonical form.
std::vector<Graph> admissible_graphs(const ProblemSpec& spec, int k);

/// Admissible types of each order s <= m-2 with s = m (mod 2), one per
/// isomorphism class, each in its canonical labelling.
std::vector<TypeGraph> enumerate_types(const ProblemSpec& spec);

/// Admissible flags of order l over `type`, one per label-fixing
/// isomorphism class, in canonical order.
std::vector<Flag> enumerate_flags(const TypeGraph& type, int l, const ProblemSpec& spec);

/// Flag order used by the default pipeline: s + (m - s) / 2.
int default_flag_order(int m, int s);

}  // namespace flagcert
