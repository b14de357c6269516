#include "flagcert/enumerate.hpp"

#include <algorithm>
#include <set>

#include "flagcert/error.hpp"
#include "flagcert/parallel.hpp"

namespace flagcert {

void ProblemSpec::validate() const {
  if (r != 2 && r != 3) throw DomainError("uniformity must be 2 or 3");
  if (m < 1 || m > kMaxAdmissibleOrder) {
    throw DomainError("admissible order must be between 1 and 7, got " + std::to_string(m));
  }
  for (const Forbidden& f : forbidden) {
    if (f.graph.uniformity() != r) throw DomainError("forbidden graph " + f.graph.notation() + " has wrong uniformity");
    if (f.graph.order() > m) {
      throw DomainError("forbidden graph " + f.graph.notation() + " is larger than the admissible order");
    }
  }
}

std::string Flag::notation() const { return graph.notation() + "(" + std::to_string(type_order) + ")"; }

Flag Flag::parse(std::string_view text, int r) {
  Flag f;
  auto open = text.find('(');
  if (open == std::string_view::npos) {
    f.graph = Graph::parse(text, r);
    return f;
  }
  if (text.back() != ')') throw ParseError("bad flag notation '" + std::string(text) + "'");
  std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  if (inner.size() != 1 || inner[0] < '0' || inner[0] > '9') {
    throw ParseError("bad labelled-vertex count in flag '" + std::string(text) + "'");
  }
  f.graph = Graph::parse(text.substr(0, open), r);
  f.type_order = inner[0] - '0';
  if (f.type_order > f.graph.order()) throw ParseError("flag '" + std::string(text) + "' has more labels than vertices");
  return f;
}

bool is_admissible(const ProblemSpec& spec, const Graph& g) {
  for (const Forbidden& f : spec.forbidden) {
    if (f.graph.order() > g.order()) continue;
    if (f.induced ? contains_induced(g, f.graph) : contains_subgraph(g, f.graph)) return false;
  }
  return true;
}

namespace {

bool canonical_less(const Graph& a, const Graph& b) {
  if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
  return a.mask() > b.mask();
}

// All r-subsets of {0,...,n-1} that meet {from,...,n-1}.
std::vector<std::vector<int>> edges_touching(int r, int n, int from) {
  std::vector<std::vector<int>> out;
  for_each_subset(n, r, [&](std::span<const int> s) {
    if (s.back() >= from) out.emplace_back(s.begin(), s.end());
  });
  return out;
}

std::vector<Graph> extend_by_one(const ProblemSpec& spec, const std::vector<Graph>& parents) {
  if (parents.empty()) return {};
  const int n = parents.front().order() + 1;
  const auto candidates = edges_touching(spec.r, n, n - 1);
  if (candidates.size() > 24) throw CapacityError("too many extension edges at order " + std::to_string(n));
  const std::uint64_t combos = std::uint64_t(1) << candidates.size();

  std::vector<std::vector<CanonicalForm>> found(parents.size());
  parallel_for(parents.size(), [&](std::size_t p) {
    std::set<CanonicalForm> local;
    for (std::uint64_t bits = 0; bits < combos; ++bits) {
      Graph child(spec.r, n);
      for (const Edge& e : parents[p].edges()) {
        std::array<int, 3> v{e[0], e[1], e[2]};
        child.add_edge(std::span<const int>(v.data(), static_cast<size_t>(spec.r)));
      }
      for (size_t i = 0; i < candidates.size(); ++i)
        if (bits >> i & 1) child.add_edge(candidates[i]);
      if (!is_admissible(spec, child)) continue;
      local.insert(canonical_form(child));
    }
    found[p].assign(local.begin(), local.end());
  });

  std::set<CanonicalForm> merged;
  for (auto& f : found) merged.insert(f.begin(), f.end());
  std::vector<Graph> out;
  out.reserve(merged.size());
  for (const auto& c : merged) out.push_back(c.graph());
  return out;
}

}  // namespace

std::vector<Graph> admissible_graphs(const ProblemSpec& spec, int k) {
  if (k < 0 || k > kMaxOrder) throw DomainError("order out of range");
  std::vector<Graph> level;
  Graph empty(spec.r, 0);
  if (is_admissible(spec, empty)) level.push_back(empty);
  for (int order = 1; order <= k; ++order) level = extend_by_one(spec, level);
  std::sort(level.begin(), level.end(), canonical_less);
  return level;
}

int default_flag_order(int m, int s) { return s + (m - s) / 2; }

std::vector<TypeGraph> enumerate_types(const ProblemSpec& spec) {
  std::vector<TypeGraph> types;
  for (int s = spec.m % 2; s <= spec.m - 2; s += 2) {
    for (Graph& g : admissible_graphs(spec, s)) types.push_back(TypeGraph{std::move(g)});
  }
  return types;
}

std::vector<Flag> enumerate_flags(const TypeGraph& type, int l, const ProblemSpec& spec) {
  const int s = type.order();
  if (l < s) throw DomainError("flag order below type order");
  if (l > kMaxOrder) throw CapacityError("flag order above 9");
  const auto candidates = edges_touching(spec.r, l, s);
  if (candidates.size() > 24) throw CapacityError("too many flag extension edges");

  std::set<CanonicalForm> seen;
  std::vector<Flag> flags;
  const std::uint64_t combos = std::uint64_t(1) << candidates.size();
  for (std::uint64_t bits = 0; bits < combos; ++bits) {
    Graph g(spec.r, l);
    for (const Edge& e : type.graph.edges()) {
      std::array<int, 3> v{e[0], e[1], e[2]};
      g.add_edge(std::span<const int>(v.data(), static_cast<size_t>(spec.r)));
    }
    for (size_t i = 0; i < candidates.size(); ++i)
      if (bits >> i & 1) g.add_edge(candidates[i]);
    if (!is_admissible(spec, g)) continue;
    CanonicalForm key = canonical_form(g, s);
    if (seen.insert(key).second) flags.push_back(Flag{key.graph(), s});
  }
  std::sort(flags.begin(), flags.end(), [](const Flag& a, const Flag& b) { return canonical_less(a.graph, b.graph); });
  return flags;
}

}  // namespace flagcert
