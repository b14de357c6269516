#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flagcert/density.hpp"
#include "flagcert/enumerate.hpp"
#include "flagcert/rational.hpp"

namespace flagcert {

/// Template graph whose edges are r-multisets over {0,...,n-1}; an edge such
/// as "112" puts all edges with two vertices in part 1 and one in part 2 into
/// a blow-up. All-equal edges ("333") are allowed only for r = 3.
struct DegenerateTemplate {
  int r = 3;
  int n = 0;
  std::vector<Edge> edges;  // sorted multisets, sorted list

  /// Same notation as graphs, but vertices may repeat inside an edge.
  static DegenerateTemplate parse(std::string_view notation, int r);
  static DegenerateTemplate from_graph(const Graph& g);

  bool is_degenerate() const;
  bool has_edge(Edge multiset) const;
  std::string notation() const;
};

enum class ConstructionKind { BlowUp, IteratedBlowUp };

struct ConstructionTemplate {
  ConstructionKind kind = ConstructionKind::BlowUp;
  DegenerateTemplate tmpl;
  std::vector<Rational> weights;  // one per template vertex, positive, summing to 1

  static ConstructionTemplate balanced(DegenerateTemplate t, ConstructionKind kind = ConstructionKind::BlowUp);
  void validate() const;
};

/// Named templates: h6, h7, k4, k5, fano, complement-fano, turan,
/// keevash-mubayi, construction6, construction7, edge, c5, k4j4,
/// bipartite (2-graph), bipartite3, one-way-bipartite.
std::vector<std::string> template_names();
DegenerateTemplate named_template(std::string_view name);

/// Parses "blowup <notation> [weights p1/q1,p2/q2,...]" or
/// "iterated <notation>"; weights default to balanced.
ConstructionTemplate parse_construction(std::string_view text, int r);

/// Named template or custom description, balanced blow-up unless iterated.
ConstructionTemplate resolve_construction(std::string_view name_or_text, int r, bool iterated = false);

/// Limit edge density of the blow-up as part sizes grow in proportion to the
/// weights.
Rational blowup_density(const ConstructionTemplate& c);

/// Limit edge density of the balanced iterated blow-up: r! e / (t^r - t).
Rational iterated_blowup_density(const DegenerateTemplate& t);

/// Density of whichever kind `c` describes.
Rational construction_density(const ConstructionTemplate& c);

/// Concrete blow-up with the given part sizes (total at most 9).
Graph blowup_instance(const ConstructionTemplate& c, std::span<const int> part_sizes);

/// n points evenly spaced on a circle (n odd, 5 <= n <= 9); a triple is an
/// edge iff the triangle contains the centre.
Graph circle_instance(int n);

/// The iterated blow-up truncated after `depth` levels, as an ordinary
/// blow-up template on t^depth parts.
ConstructionTemplate expand_iterated(const ConstructionTemplate& c, int depth);

/// Limit density of every order-k isomorphism class in the construction,
/// sorted by canonical form; classes with zero density are omitted.
std::vector<std::pair<CanonicalForm, Rational>> construction_graph_densities(const ConstructionTemplate& c, int k,
                                                                             int depth = 2);

/// For each way of placing the labelled vertices into parts that induces the
/// type, the limit probabilities of each flag over a random extension.
/// Identical vectors are reported once, in first-found order.
std::vector<std::vector<Rational>> limit_flag_density_vectors(const TypeGraph& type, std::span<const Flag> flags,
                                                              const ConstructionTemplate& c, int depth = 2);

}  // namespace flagcert
