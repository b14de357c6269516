#include "flagcert/construct.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "flagcert/error.hpp"

namespace flagcert {
namespace {

Edge sorted_multiset(int r, std::span<const int> v) {
  std::array<int, 3> a{0, 0, 0};
  for (int i = 0; i < r; ++i) a[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
  std::sort(a.begin(), a.begin() + r);
  return {static_cast<std::uint8_t>(a[0]), static_cast<std::uint8_t>(a[1]), static_cast<std::uint8_t>(a[2])};
}

// Graph on vertices 0..k-1 where vertex i lies in part parts[i].
Graph graph_from_parts(const DegenerateTemplate& t, std::span<const int> parts) {
  const int k = static_cast<int>(parts.size());
  Graph g(t.r, k);
  std::array<int, 3> p{};
  for_each_subset(k, t.r, [&](std::span<const int> s) {
    for (int i = 0; i < t.r; ++i) p[static_cast<size_t>(i)] = parts[static_cast<size_t>(s[static_cast<size_t>(i)])];
    if (t.has_edge(sorted_multiset(t.r, p))) g.add_edge(s);
  });
  return g;
}

// Calls fn(parts, multiplicity) for each non-decreasing k-tuple over [0, t);
// multiplicity is the number of ordered tuples with the same content.
template <typename Fn>
void for_each_multiset(int t, int k, Fn&& fn) {
  std::vector<int> parts(static_cast<size_t>(k), 0);
  std::vector<std::int64_t> factorial(static_cast<size_t>(k) + 1, 1);
  for (int i = 1; i <= k; ++i) factorial[static_cast<size_t>(i)] = factorial[static_cast<size_t>(i - 1)] * i;
  auto rec = [&](auto&& self, int pos, int from) -> void {
    if (pos == k) {
      std::int64_t mult = factorial[static_cast<size_t>(k)];
      int run = 1;
      for (int i = 1; i <= k; ++i) {
        if (i < k && parts[static_cast<size_t>(i)] == parts[static_cast<size_t>(i - 1)]) {
          ++run;
        } else {
          mult /= factorial[static_cast<size_t>(run)];
          run = 1;
        }
      }
      fn(std::span<const int>(parts), mult);
      return;
    }
    for (int p = from; p < t; ++p) {
      parts[static_cast<size_t>(pos)] = p;
      self(self, pos + 1, p);
    }
  };
  rec(rec, 0, 0);
}

Rational weight_product(const ConstructionTemplate& c, std::span<const int> parts) {
  Rational w = 1;
  for (int p : parts) w *= c.weights[static_cast<size_t>(p)];
  return w;
}

const ConstructionTemplate& as_blowup(const ConstructionTemplate& c, int depth, ConstructionTemplate& storage) {
  if (c.kind == ConstructionKind::BlowUp) return c;
  storage = expand_iterated(c, depth);
  return storage;
}

}  // namespace

// ---------------------------------------------------------------------------
// Templates

DegenerateTemplate DegenerateTemplate::parse(std::string_view notation, int r) {
  if (r != 2 && r != 3) throw DomainError("uniformity must be 2 or 3");
  if (notation.size() < 2 || notation[1] != ':' || notation[0] < '1' || notation[0] > '9') {
    throw ParseError("template notation must look like 'n:digits', got '" + std::string(notation) + "'");
  }
  DegenerateTemplate t;
  t.r = r;
  t.n = notation[0] - '0';
  std::string_view digits = notation.substr(2);
  if (digits.size() % static_cast<size_t>(r) != 0) throw ParseError("edge digit count not a multiple of r");
  for (size_t pos = 0; pos < digits.size(); pos += static_cast<size_t>(r)) {
    std::array<int, 3> v{0, 0, 0};
    for (int i = 0; i < r; ++i) {
      char ch = digits[pos + static_cast<size_t>(i)];
      if (ch < '1' || ch - '0' > t.n) throw ParseError("template vertex out of range in '" + std::string(notation) + "'");
      v[static_cast<size_t>(i)] = ch - '1';
    }
    Edge e = sorted_multiset(r, v);
    bool all_equal = e[0] == e[static_cast<size_t>(r - 1)];
    if (all_equal && r != 3) throw ParseError("all-equal template edges need r = 3");
    if (t.has_edge(e)) throw ParseError("duplicate template edge in '" + std::string(notation) + "'");
    t.edges.insert(std::lower_bound(t.edges.begin(), t.edges.end(), e), e);
  }
  return t;
}

DegenerateTemplate DegenerateTemplate::from_graph(const Graph& g) {
  DegenerateTemplate t;
  t.r = g.uniformity();
  t.n = g.order();
  t.edges = g.edges();
  return t;
}

bool DegenerateTemplate::is_degenerate() const {
  for (const Edge& e : edges)
    for (int i = 1; i < r; ++i)
      if (e[static_cast<size_t>(i)] == e[static_cast<size_t>(i - 1)]) return true;
  return false;
}

bool DegenerateTemplate::has_edge(Edge multiset) const {
  if (r == 2) multiset[2] = 0;
  return std::binary_search(edges.begin(), edges.end(), multiset);
}

std::string DegenerateTemplate::notation() const {
  std::string s = std::to_string(n) + ":";
  for (const Edge& e : edges)
    for (int i = 0; i < r; ++i) s += static_cast<char>('1' + e[static_cast<size_t>(i)]);
  return s;
}

ConstructionTemplate ConstructionTemplate::balanced(DegenerateTemplate t, ConstructionKind kind) {
  ConstructionTemplate c;
  c.kind = kind;
  c.weights.assign(static_cast<size_t>(t.n), Rational(1, t.n));
  c.tmpl = std::move(t);
  return c;
}

void ConstructionTemplate::validate() const {
  if (static_cast<int>(weights.size()) != tmpl.n) throw DomainError("one weight per template vertex is required");
  Rational total = 0;
  for (const Rational& w : weights) {
    if (w <= 0) throw DomainError("template weights must be positive");
    total += w;
  }
  if (total != 1) throw DomainError("template weights must sum to 1");
  if (kind == ConstructionKind::IteratedBlowUp) {
    if (tmpl.is_degenerate()) throw DomainError("iterated blow-ups need a non-degenerate template");
    for (const Rational& w : weights)
      if (w != weights.front()) throw DomainError("iterated blow-ups are balanced");
  }
}

std::vector<std::string> template_names() {
  return {"h6",   "h7",         "k4",   "k5",          "fano",        "complement-fano", "turan",
          "keevash-mubayi", "construction6", "construction7", "edge", "c5", "k4j4", "bipartite",
          "bipartite3", "one-way-bipartite"};
}

DegenerateTemplate named_template(std::string_view name) {
  static const std::map<std::string, std::pair<int, std::string>, std::less<>> library = {
      {"h6", {3, "6:123234345145125136356256246146"}},
      {"h7", {3, "7:124137156235267346457653647621542517431327"}},
      {"k4", {3, "4:123124134234"}},
      {"k5", {3, "5:123124125134135145234235245345"}},
      {"fano", {3, "7:124137156235267346457"}},
      {"turan", {3, "3:123112223331"}},
      {"keevash-mubayi", {3, "4:123124134234112223334441113331224442"}},
      {"construction6", {3, "7:123124125136137146247256257347356357456467"}},
      {"construction7", {3, "7:123124125136146157237247256345356367457467"}},
      {"edge", {3, "3:123"}},
      {"c5", {3, "5:123234345451512"}},
      {"k4j4", {3, "6:123124125134135146156236245246256345346356"}},
      {"bipartite", {2, "2:12"}},
      {"bipartite3", {3, "2:112122"}},
      {"one-way-bipartite", {3, "2:112"}},
  };
  if (name == "complement-fano") {
    return DegenerateTemplate::from_graph(complement(Graph::parse(library.at("fano").second, 3)));
  }
  auto it = library.find(name);
  if (it == library.end()) throw DomainError("unknown construction '" + std::string(name) + "'");
  return DegenerateTemplate::parse(it->second.second, it->second.first);
}

ConstructionTemplate parse_construction(std::string_view text, int r) {
  std::istringstream in{std::string(text)};
  std::string kind, notation, keyword, weight_list;
  in >> kind >> notation;
  ConstructionKind k;
  if (kind == "blowup") k = ConstructionKind::BlowUp;
  else if (kind == "iterated") k = ConstructionKind::IteratedBlowUp;
  else throw ParseError("construction must start with 'blowup' or 'iterated'");
  if (notation.empty()) throw ParseError("construction is missing its template");
  auto c = ConstructionTemplate::balanced(DegenerateTemplate::parse(notation, r), k);
  if (in >> keyword) {
    if (keyword != "weights" || !(in >> weight_list)) throw ParseError("expected 'weights p1/q1,...'");
    c.weights.clear();
    std::string item;
    std::istringstream items(weight_list);
    while (std::getline(items, item, ',')) c.weights.push_back(parse_rational(item));
  }
  c.validate();
  return c;
}

ConstructionTemplate resolve_construction(std::string_view name_or_text, int r, bool iterated) {
  if (name_or_text.find(' ') != std::string_view::npos) {
    ConstructionTemplate c = parse_construction(name_or_text, r);
    if (iterated) c.kind = ConstructionKind::IteratedBlowUp;
    c.validate();
    return c;
  }
  DegenerateTemplate t = named_template(name_or_text);
  if (t.r != r) {
    throw DomainError("construction '" + std::string(name_or_text) + "' is " + std::to_string(t.r) +
                      "-uniform, problem is " + std::to_string(r) + "-uniform");
  }
  auto c = ConstructionTemplate::balanced(std::move(t),
                                          iterated ? ConstructionKind::IteratedBlowUp : ConstructionKind::BlowUp);
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Densities

Rational blowup_density(const ConstructionTemplate& c) {
  if (static_cast<int>(c.weights.size()) != c.tmpl.n) throw DomainError("weight count does not match template order");
  Rational d = 0;
  for (const Edge& e : c.tmpl.edges) {
    // Number of orderings of the multiset: r! / prod(multiplicity!).
    int r = c.tmpl.r;
    std::int64_t orderings = r == 3 ? 6 : 2;
    if (r == 3) {
      if (e[0] == e[1] && e[1] == e[2]) orderings = 1;
      else if (e[0] == e[1] || e[1] == e[2]) orderings = 3;
    } else if (e[0] == e[1]) {
      orderings = 1;
    }
    Rational term = orderings;
    for (int i = 0; i < r; ++i) term *= c.weights[e[static_cast<size_t>(i)]];
    d += term;
  }
  return d;
}

Rational iterated_blowup_density(const DegenerateTemplate& t) {
  if (t.is_degenerate()) throw DomainError("iterated blow-up density needs a non-degenerate template");
  if (t.n < 2) throw DomainError("iterated blow-up needs at least two parts");
  Integer tr;
  mpz_ui_pow_ui(tr.get_mpz_t(), static_cast<unsigned long>(t.n), static_cast<unsigned long>(t.r));
  Rational d(Integer((t.r == 3 ? 6 : 2) * static_cast<long>(t.edges.size())), tr - t.n);
  d.canonicalize();
  return d;
}

Rational construction_density(const ConstructionTemplate& c) {
  c.validate();
  return c.kind == ConstructionKind::BlowUp ? blowup_density(c) : iterated_blowup_density(c.tmpl);
}

Graph blowup_instance(const ConstructionTemplate& c, std::span<const int> part_sizes) {
  if (static_cast<int>(part_sizes.size()) != c.tmpl.n) throw DomainError("one part size per template vertex");
  int total = 0;
  for (int s : part_sizes) {
    if (s < 0) throw DomainError("negative part size");
    total += s;
  }
  if (total > kMaxOrder) throw CapacityError("blow-up instance larger than 9 vertices");
  std::vector<int> parts;
  for (int p = 0; p < c.tmpl.n; ++p)
    for (int i = 0; i < part_sizes[static_cast<size_t>(p)]; ++i) parts.push_back(p);
  return graph_from_parts(c.tmpl, parts);
}

Graph circle_instance(int n) {
  if (n < 4 || n > kMaxOrder) throw DomainError("circle construction needs 4 <= n <= 9");
  if (n % 2 == 0) throw DomainError("even n puts antipodal points on a diameter");
  Graph g(3, n);
  for_each_subset(n, 3, [&](std::span<const int> s) {
    // Gaps in units of 1/n of the circle; the centre is inside iff each gap
    // is shorter than half the circle.
    int g1 = s[1] - s[0], g2 = s[2] - s[1], g3 = n - (s[2] - s[0]);
    if (2 * g1 < n && 2 * g2 < n && 2 * g3 < n) g.add_edge(s);
  });
  return g;
}

ConstructionTemplate expand_iterated(const ConstructionTemplate& c, int depth) {
  if (c.kind != ConstructionKind::IteratedBlowUp) return c;
  c.validate();
  if (depth < 1) throw DomainError("expansion depth must be at least 1");
  const int t = c.tmpl.n;
  const int r = c.tmpl.r;
  int parts = 1;
  for (int i = 0; i < depth; ++i) parts *= t;
  if (parts > 400) throw CapacityError("iterated expansion has too many parts");

  auto digit = [&](int part, int level) {
    for (int i = depth - 1; i > level; --i) part /= t;
    return part % t;
  };
  ConstructionTemplate out;
  out.kind = ConstructionKind::BlowUp;
  out.tmpl.r = r;
  out.tmpl.n = parts;
  out.weights.assign(static_cast<size_t>(parts), Rational(1, parts));
  for_each_subset(parts, r, [&](std::span<const int> s) {
    for (int level = 0; level < depth; ++level) {
      std::array<int, 3> d{};
      for (int i = 0; i < r; ++i) d[static_cast<size_t>(i)] = digit(s[static_cast<size_t>(i)], level);
      bool all_same = true;
      for (int i = 1; i < r; ++i) all_same = all_same && d[static_cast<size_t>(i)] == d[0];
      if (all_same) continue;
      // First level where the vertices split: an edge iff they land in
      // distinct parts forming a template edge.
      if (c.tmpl.has_edge(sorted_multiset(r, d))) {
        Edge e = sorted_multiset(r, s);
        out.tmpl.edges.push_back(e);
      }
      return;
    }
  });
  std::sort(out.tmpl.edges.begin(), out.tmpl.edges.end());
  return out;
}

std::vector<std::pair<CanonicalForm, Rational>> construction_graph_densities(const ConstructionTemplate& c, int k,
                                                                             int depth) {
  ConstructionTemplate storage;
  const ConstructionTemplate& b = as_blowup(c, depth, storage);
  b.validate();
  std::map<CanonicalForm, Rational> acc;
  for_each_multiset(b.tmpl.n, k, [&](std::span<const int> parts, std::int64_t mult) {
    acc[canonical_form(graph_from_parts(b.tmpl, parts))] += Rational(mult) * weight_product(b, parts);
  });
  std::vector<std::pair<CanonicalForm, Rational>> out;
  for (auto& [form, d] : acc)
    if (d != 0) out.emplace_back(form, d);
  return out;
}

std::vector<std::vector<Rational>> limit_flag_density_vectors(const TypeGraph& type, std::span<const Flag> flags,
                                                              const ConstructionTemplate& c, int depth) {
  if (flags.empty()) return {};
  ConstructionTemplate storage;
  const ConstructionTemplate& b = as_blowup(c, depth, storage);
  b.validate();
  if (b.tmpl.r != type.graph.uniformity()) throw DomainError("construction and type uniformity differ");
  const int s = type.order();
  const int l = flags.front().order();
  const int t = b.tmpl.n;
  double assignments = 1;
  for (int i = 0; i < s; ++i) assignments *= t;
  if (assignments > 2e6) throw CapacityError("too many labelled-vertex placements");

  const FlagIndex index(flags);
  std::vector<std::vector<Rational>> vectors;
  std::vector<int> labelled(static_cast<size_t>(s), 0);
  std::vector<int> all(static_cast<size_t>(l), 0);

  auto visit = [&]() {
    if (graph_from_parts(b.tmpl, labelled).mask() != type.graph.mask()) return;
    std::vector<Rational> v(flags.size(), Rational(0));
    std::copy(labelled.begin(), labelled.end(), all.begin());
    for_each_multiset(t, l - s, [&](std::span<const int> free_parts, std::int64_t mult) {
      std::copy(free_parts.begin(), free_parts.end(), all.begin() + s);
      int f = index.find(graph_from_parts(b.tmpl, all), s);
      if (f >= 0) v[static_cast<size_t>(f)] += Rational(mult) * weight_product(b, free_parts);
    });
    if (std::find(vectors.begin(), vectors.end(), v) == vectors.end()) vectors.push_back(std::move(v));
  };

  // Odometer over [0, t)^s.
  while (true) {
    visit();
    int i = s - 1;
    while (i >= 0 && labelled[static_cast<size_t>(i)] == t - 1) labelled[static_cast<size_t>(i--)] = 0;
    if (i < 0) break;
    ++labelled[static_cast<size_t>(i)];
  }
  return vectors;
}

}  // namespace flagcert
