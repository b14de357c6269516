#include "flagcert/graph.hpp"

#include <algorithm>
#include <functional>

#include "flagcert/error.hpp"

namespace flagcert {
namespace {

struct RankTables {
  int pair[kMaxOrder][kMaxOrder]{};
  int triple[kMaxOrder][kMaxOrder][kMaxOrder]{};

  RankTables() {
    int k = 0;
    for (int a = 0; a < kMaxOrder; ++a)
      for (int b = a + 1; b < kMaxOrder; ++b) pair[a][b] = k++;
    k = 0;
    for (int a = 0; a < kMaxOrder; ++a)
      for (int b = a + 1; b < kMaxOrder; ++b)
        for (int c = b + 1; c < kMaxOrder; ++c) triple[a][b][c] = k++;
  }
};

const RankTables& tables() {
  static const RankTables t;
  return t;
}

void check_uniformity(int r) {
  if (r != 2 && r != 3) throw DomainError("uniformity must be 2 or 3, got " + std::to_string(r));
}

Edge sorted_edge(int r, int a, int b, int c) {
  if (r == 2) {
    if (a > b) std::swap(a, b);
    return {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), 0};
  }
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c)};
}

}  // namespace

int edge_rank(int r, const Edge& e) {
  const auto& t = tables();
  return r == 2 ? t.pair[e[0]][e[1]] : t.triple[e[0]][e[1]][e[2]];
}

EdgeMask edge_bit(int r, const Edge& e) { return EdgeMask(1) << (127 - edge_rank(r, e)); }

Graph::Graph(int r, int n) : r_(r), n_(n) {
  check_uniformity(r);
  if (n < 0 || n > kMaxOrder) {
    throw CapacityError("graph order must be between 0 and 9, got " + std::to_string(n));
  }
}

Graph Graph::parse(std::string_view notation, int r) {
  check_uniformity(r);
  auto colon = notation.find(':');
  if (colon != 1 || notation.empty()) {
    throw ParseError("graph notation must look like 'n:digits', got '" + std::string(notation) + "'");
  }
  char nc = notation[0];
  if (nc < '0' || nc > '9') throw ParseError("bad order in '" + std::string(notation) + "'");
  Graph g(r, nc - '0');
  std::string_view digits = notation.substr(2);
  if (digits.size() % static_cast<size_t>(r) != 0) {
    throw ParseError("edge digit count is not a multiple of " + std::to_string(r) + " in '" +
                     std::string(notation) + "'");
  }
  for (size_t pos = 0; pos < digits.size(); pos += static_cast<size_t>(r)) {
    std::array<int, 3> v{};
    for (int i = 0; i < r; ++i) {
      char c = digits[pos + static_cast<size_t>(i)];
      if (c < '0' || c > '9') throw ParseError("non-digit in '" + std::string(notation) + "'");
      v[static_cast<size_t>(i)] = c - '0';
      if (v[static_cast<size_t>(i)] < 1 || v[static_cast<size_t>(i)] > g.n_) {
        throw ParseError("vertex " + std::string(1, c) + " out of range in '" + std::string(notation) + "'");
      }
    }
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (v[static_cast<size_t>(i)] == v[static_cast<size_t>(j)]) {
          throw ParseError("repeated vertex within an edge in '" + std::string(notation) + "'");
        }
    Edge e = sorted_edge(r, v[0] - 1, v[1] - 1, r == 3 ? v[2] - 1 : 0);
    if (g.has_edge(e)) throw ParseError("duplicate edge in '" + std::string(notation) + "'");
    g.insert(e);
  }
  return g;
}

bool Graph::has_edge(const Edge& e) const { return (mask_ & edge_bit(r_, e)) != 0; }

bool Graph::has_edge(int a, int b) const { return has_edge(sorted_edge(2, a, b, 0)); }

bool Graph::has_edge(int a, int b, int c) const { return has_edge(sorted_edge(3, a, b, c)); }

void Graph::insert(Edge e) {
  EdgeMask bit = edge_bit(r_, e);
  if (mask_ & bit) return;
  mask_ |= bit;
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  edges_.insert(it, e);
}

void Graph::add_edge(std::span<const int> vertices) {
  if (static_cast<int>(vertices.size()) != r_) throw DomainError("edge size does not match uniformity");
  for (int v : vertices) {
    if (v < 0 || v >= n_) throw DomainError("edge vertex out of range");
  }
  for (size_t i = 0; i < vertices.size(); ++i)
    for (size_t j = i + 1; j < vertices.size(); ++j)
      if (vertices[i] == vertices[j]) throw DomainError("repeated vertex within an edge");
  insert(sorted_edge(r_, vertices[0], vertices[1], r_ == 3 ? vertices[2] : 0));
}

Graph Graph::relabelled(std::span<const int> perm) const {
  Graph out(r_, n_);
  for (const Edge& e : edges_) {
    out.insert(sorted_edge(r_, perm[e[0]], perm[e[1]], r_ == 3 ? perm[e[2]] : 0));
  }
  return out;
}

Graph Graph::induced(std::span<const int> vertices) const {
  Graph out(r_, static_cast<int>(vertices.size()));
  std::array<int, kMaxOrder> where;
  where.fill(-1);
  for (size_t i = 0; i < vertices.size(); ++i) where[static_cast<size_t>(vertices[i])] = static_cast<int>(i);
  for (const Edge& e : edges_) {
    int a = where[e[0]], b = where[e[1]], c = r_ == 3 ? where[e[2]] : 0;
    if (a < 0 || b < 0 || c < 0) continue;
    out.insert(sorted_edge(r_, a, b, c));
  }
  return out;
}

std::string Graph::notation() const {
  std::string s;
  s.reserve(2 + edges_.size() * static_cast<size_t>(r_));
  s += static_cast<char>('0' + n_);
  s += ':';
  for (const Edge& e : edges_)
    for (int i = 0; i < r_; ++i) s += static_cast<char>('1' + e[static_cast<size_t>(i)]);
  return s;
}

int Graph::degree(int v) const {
  int d = 0;
  for (const Edge& e : edges_)
    for (int i = 0; i < r_; ++i)
      if (e[static_cast<size_t>(i)] == v) ++d;
  return d;
}

// ---------------------------------------------------------------------------
// Canonical forms

std::string CanonicalForm::key() const { return graph().notation(); }

Graph CanonicalForm::graph() const {
  Graph g(r, n);
  for_each_subset(n, r, [&](std::span<const int> s) {
    Edge e = sorted_edge(r, s[0], s[1], r == 3 ? s[2] : 0);
    if (mask & edge_bit(r, e)) g.add_edge(s);
  });
  return g;
}

std::strong_ordering operator<=>(const CanonicalForm& a, const CanonicalForm& b) {
  if (auto c = a.r <=> b.r; c != 0) return c;
  if (auto c = a.n <=> b.n; c != 0) return c;
  if (auto c = a.fixed <=> b.fixed; c != 0) return c;
  // Larger mask first: that is lexicographically smaller edge lists first.
  if (a.mask == b.mask) return std::strong_ordering::equal;
  return a.mask > b.mask ? std::strong_ordering::less : std::strong_ordering::greater;
}

size_t CanonicalFormHash::operator()(const CanonicalForm& c) const noexcept {
  auto lo = static_cast<std::uint64_t>(c.mask);
  auto hi = static_cast<std::uint64_t>(c.mask >> 64);
  std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
  h ^= static_cast<std::uint64_t>(c.n) << 56 ^ static_cast<std::uint64_t>(c.fixed) << 48 ^
       static_cast<std::uint64_t>(c.r) << 40;
  return static_cast<size_t>(h);
}

namespace {

// Vertex invariant used to split the free vertices into cells. It must be
// preserved by every isomorphism that fixes the first `fixed` vertices.
std::uint64_t vertex_invariant(const Graph& g, int v, int fixed, std::span<const int> degrees) {
  const int r = g.uniformity();
  std::uint64_t neighbour_sum = 0;
  std::uint64_t labelled_pattern = 0;
  for (const Edge& e : g.edges()) {
    bool contains = false;
    for (int i = 0; i < r; ++i) contains = contains || e[static_cast<size_t>(i)] == v;
    if (!contains) continue;
    int labelled_bits = 0;
    int other_free = 0;
    for (int i = 0; i < r; ++i) {
      int u = e[static_cast<size_t>(i)];
      if (u == v) continue;
      neighbour_sum += static_cast<std::uint64_t>(degrees[static_cast<size_t>(u)]);
      if (u < fixed) {
        labelled_bits |= 1 << u;
      } else {
        ++other_free;
      }
    }
    if (other_free == 0 && fixed > 0) {
      // Edge made of v and labelled vertices only: record which ones.
      labelled_pattern |= std::uint64_t(1) << (labelled_bits % 64);
    }
  }
  return (static_cast<std::uint64_t>(degrees[static_cast<size_t>(v)]) << 56) ^ (neighbour_sum << 40) ^
         labelled_pattern;
}

}  // namespace

CanonicalLabelling canonical_labelling(const Graph& g, int fixed) {
  const int n = g.order();
  const int r = g.uniformity();
  if (fixed < 0 || fixed > n) throw DomainError("fixed prefix longer than the graph");

  std::vector<int> degrees(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) degrees[static_cast<size_t>(v)] = g.degree(v);

  std::vector<std::pair<std::uint64_t, int>> keyed;
  for (int v = fixed; v < n; ++v) keyed.emplace_back(vertex_invariant(g, v, fixed, degrees), v);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });

  // Cells of free vertices with equal invariant, in invariant order. Cell c
  // receives the next block of labels.
  std::vector<std::vector<int>> cells;
  for (size_t i = 0; i < keyed.size(); ++i) {
    if (i == 0 || keyed[i].first != keyed[i - 1].first) cells.emplace_back();
    cells.back().push_back(keyed[i].second);
  }

  std::vector<int> perm(static_cast<size_t>(n));
  for (int v = 0; v < fixed; ++v) perm[static_cast<size_t>(v)] = v;

  EdgeMask best = 0;
  bool have_best = false;
  std::vector<int> best_perm;

  const auto& edges = g.edges();
  auto evaluate = [&]() {
    EdgeMask m = 0;
    for (const Edge& e : edges) {
      m |= edge_bit(r, sorted_edge(r, perm[e[0]], perm[e[1]], r == 3 ? perm[e[2]] : 0));
    }
    if (!have_best || m > best) {
      best = m;
      best_perm = perm;
      have_best = true;
    }
  };

  std::function<void(size_t, int)> recurse = [&](size_t cell, int next_label) {
    if (cell == cells.size()) {
      evaluate();
      return;
    }
    std::vector<int>& vs = cells[cell];
    std::sort(vs.begin(), vs.end());
    do {
      for (size_t i = 0; i < vs.size(); ++i) perm[static_cast<size_t>(vs[i])] = next_label + static_cast<int>(i);
      recurse(cell + 1, next_label + static_cast<int>(vs.size()));
    } while (std::next_permutation(vs.begin(), vs.end()));
  };
  recurse(0, fixed);

  CanonicalLabelling out;
  out.form = CanonicalForm{r, n, fixed, best};
  out.perm = std::move(best_perm);
  return out;
}

CanonicalForm canonical_form(const Graph& g, int fixed) { return canonical_labelling(g, fixed).form; }

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.uniformity() != b.uniformity() || a.order() != b.order() || a.edge_count() != b.edge_count()) {
    return false;
  }
  return canonical_form(a) == canonical_form(b);
}

// ---------------------------------------------------------------------------
// Containment

namespace {

class SubgraphSearch {
 public:
  SubgraphSearch(const Graph& g, const Graph& h) : g_(g), h_(h) {
    const int hn = h.order();
    // Place high-degree pattern vertices first, then those most connected to
    // already placed ones.
    std::vector<bool> placed(static_cast<size_t>(hn), false);
    for (int step = 0; step < hn; ++step) {
      int best = -1;
      int best_score = -1;
      for (int v = 0; v < hn; ++v) {
        if (placed[static_cast<size_t>(v)]) continue;
        int score = 0;
        for (const Edge& e : h.edges()) {
          bool has_v = false;
          int others_placed = 0;
          for (int i = 0; i < h.uniformity(); ++i) {
            int u = e[static_cast<size_t>(i)];
            if (u == v) has_v = true;
            else if (placed[static_cast<size_t>(u)]) ++others_placed;
          }
          if (has_v) score += 1 + 4 * others_placed;
        }
        if (score > best_score) {
          best_score = score;
          best = v;
        }
      }
      placed[static_cast<size_t>(best)] = true;
      order_.push_back(best);
    }
    position_.assign(static_cast<size_t>(hn), 0);
    for (int i = 0; i < hn; ++i) position_[static_cast<size_t>(order_[static_cast<size_t>(i)])] = i;
    checks_.assign(static_cast<size_t>(hn), {});
    for (const Edge& e : h.edges()) {
      int last = 0;
      for (int i = 0; i < h.uniformity(); ++i) last = std::max(last, position_[e[static_cast<size_t>(i)]]);
      checks_[static_cast<size_t>(last)].push_back(e);
    }
    image_.assign(static_cast<size_t>(hn), -1);
  }

  bool run() {
    if (h_.order() > g_.order()) return false;
    if (h_.edge_count() > g_.edge_count()) return false;
    return extend(0, 0);
  }

 private:
  bool extend(int depth, unsigned used) {
    if (depth == h_.order()) return true;
    int hv = order_[static_cast<size_t>(depth)];
    for (int gv = 0; gv < g_.order(); ++gv) {
      if (used & (1u << gv)) continue;
      image_[static_cast<size_t>(hv)] = gv;
      bool ok = true;
      for (const Edge& e : checks_[static_cast<size_t>(depth)]) {
        bool present = h_.uniformity() == 2
                           ? g_.has_edge(image_[e[0]], image_[e[1]])
                           : g_.has_edge(image_[e[0]], image_[e[1]], image_[e[2]]);
        if (!present) {
          ok = false;
          break;
        }
      }
      if (ok && extend(depth + 1, used | (1u << gv))) return true;
    }
    image_[static_cast<size_t>(hv)] = -1;
    return false;
  }

  const Graph& g_;
  const Graph& h_;
  std::vector<int> order_;
  std::vector<int> position_;
  std::vector<std::vector<Edge>> checks_;
  std::vector<int> image_;
};

void check_same_uniformity(const Graph& g, const Graph& h) {
  if (g.uniformity() != h.uniformity()) throw DomainError("uniformity mismatch");
}

}  // namespace

bool contains_subgraph(const Graph& g, const Graph& h) {
  check_same_uniformity(g, h);
  return SubgraphSearch(g, h).run();
}

bool contains_induced(const Graph& g, const Graph& h) {
  check_same_uniformity(g, h);
  if (h.order() > g.order()) return false;
  const CanonicalForm target = canonical_form(h);
  bool found = false;
  for_each_subset(g.order(), h.order(), [&](std::span<const int> s) {
    if (found) return;
    Graph sub = g.induced(s);
    if (sub.edge_count() == h.edge_count() && canonical_form(sub) == target) found = true;
  });
  return found;
}

Graph complement(const Graph& g) {
  Graph out(g.uniformity(), g.order());
  for_each_subset(g.order(), g.uniformity(), [&](std::span<const int> s) {
    Edge e = sorted_edge(g.uniformity(), s[0], s[1], g.uniformity() == 3 ? s[2] : 0);
    if (!g.has_edge(e)) out.add_edge(s);
  });
  return out;
}

Graph link_graph(const Graph& g, int x) {
  if (g.uniformity() != 3) throw DomainError("link graphs are defined for 3-graphs");
  if (x < 0 || x >= g.order()) throw DomainError("vertex out of range for link graph");
  Graph out(2, g.order() - 1);
  auto shrink = [x](int v) { return v > x ? v - 1 : v; };
  for (const Edge& e : g.edges()) {
    if (e[0] != x && e[1] != x && e[2] != x) continue;
    std::array<int, 2> rest{};
    int k = 0;
    for (int v : e)
      if (v != x) rest[static_cast<size_t>(k++)] = shrink(v);
    out.add_edge(rest[0], rest[1]);
  }
  return out;
}

}  // namespace flagcert
