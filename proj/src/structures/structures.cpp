#include "autohom/structures.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace autohom {

Signature::Signature(std::vector<Predicate> predicates) : preds_(std::move(predicates)) {
  std::set<std::string> seen;
  for (const auto& p : preds_) {
    if (p.name.empty()) throw ArgumentError("predicate with empty name");
    if (p.arity == 0) throw ArgumentError("predicate " + p.name + " has arity 0");
    if (!seen.insert(p.name).second) throw ArgumentError("duplicate predicate " + p.name);
  }
}

Signature Signature::graph() { return Signature({{"E", 2}}); }

std::optional<std::size_t> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < preds_.size(); ++i)
    if (preds_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Signature::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) throw ArgumentError("unknown predicate " + std::string(name));
  return *i;
}

bool Signature::unary_only() const {
  return std::all_of(preds_.begin(), preds_.end(), [](const Predicate& p) { return p.arity == 1; });
}

std::size_t Signature::max_arity() const {
  std::size_t m = 0;
  for (const auto& p : preds_) m = std::max(m, p.arity);
  return m;
}

std::string Signature::to_string() const {
  std::string s;
  for (const auto& p : preds_) {
    if (!s.empty()) s += ' ';
    s += p.name + "/" + std::to_string(p.arity);
  }
  return s;
}

FiniteStructure::FiniteStructure(Signature sig, std::vector<std::string> names)
    : sig_(std::move(sig)), names_(std::move(names)), rels_(sig_.size()) {
  std::set<std::string_view> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw ArgumentError("duplicate element " + n);
}

FiniteStructure::FiniteStructure(Signature sig, std::size_t n)
    : sig_(std::move(sig)), rels_(sig_.size()) {
  names_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names_.push_back(std::to_string(i));
}

std::optional<Element> FiniteStructure::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Element>(i);
  return std::nullopt;
}

Element FiniteStructure::element(std::string_view name) const {
  auto e = find(name);
  if (!e) throw ArgumentError("unknown element " + std::string(name));
  return *e;
}

void FiniteStructure::check_tuple(std::size_t pred, const Tuple& t) const {
  if (pred >= sig_.size()) throw ArgumentError("predicate index out of range");
  if (t.size() != sig_[pred].arity)
    throw ArgumentError("tuple of length " + std::to_string(t.size()) + " for " + sig_[pred].name +
                        "/" + std::to_string(sig_[pred].arity));
  for (Element e : t)
    if (e >= names_.size()) throw ArgumentError("tuple entry outside the domain");
}

void FiniteStructure::add_tuple(std::size_t pred, Tuple t) {
  check_tuple(pred, t);
  auto& r = rels_[pred];
  auto it = std::lower_bound(r.begin(), r.end(), t);
  if (it == r.end() || *it != t) r.insert(it, std::move(t));
}

void FiniteStructure::add_tuple(std::string_view pred, const std::vector<std::string>& elems) {
  Tuple t;
  for (const auto& n : elems) t.push_back(element(n));
  add_tuple(sig_.index_of(pred), std::move(t));
}

void FiniteStructure::set_tuples(std::size_t pred, std::vector<Tuple> tuples) {
  for (const auto& t : tuples) check_tuple(pred, t);
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  rels_[pred] = std::move(tuples);
}

bool FiniteStructure::contains(std::size_t pred, const Tuple& t) const {
  return std::binary_search(rels_[pred].begin(), rels_[pred].end(), t);
}

std::size_t FiniteStructure::tuple_count() const {
  std::size_t n = 0;
  for (const auto& r : rels_) n += r.size();
  return n;
}

namespace {

void require_nonnegative(int k, const char* what) {
  if (k < 0) throw ArgumentError(std::string(what) + " parameter must be non-negative");
}

void require_same_signature(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.signature() != b.signature())
    throw SignatureMismatch("signatures differ: [" + a.signature().to_string() + "] vs [" +
                            b.signature().to_string() + "]");
}

}  // namespace

FiniteStructure clique(int k) {
  require_nonnegative(k, "clique");
  FiniteStructure s(Signature::graph(), static_cast<std::size_t>(k));
  std::vector<Tuple> e;
  for (Element i = 0; i < Element(k); ++i)
    for (Element j = 0; j < Element(k); ++j)
      if (i != j) e.push_back({i, j});
  s.set_tuples(0, std::move(e));
  return s;
}

FiniteStructure path(int k) {
  require_nonnegative(k, "path");
  FiniteStructure s(Signature::graph(), static_cast<std::size_t>(k) + 1);
  for (Element i = 0; i < Element(k); ++i) s.add_tuple(0, {i, i + 1});
  return s;
}

FiniteStructure transitive_tournament(int k) {
  require_nonnegative(k, "transitive tournament");
  FiniteStructure s(Signature::graph(), static_cast<std::size_t>(k) + 1);
  std::vector<Tuple> e;
  for (Element i = 0; i <= Element(k); ++i)
    for (Element j = i + 1; j <= Element(k); ++j) e.push_back({i, j});
  s.set_tuples(0, std::move(e));
  return s;
}

FiniteStructure zigzag(int n) {
  require_nonnegative(n, "zigzag");
  std::vector<std::string> names{"a'0"};
  for (int i = 0; i <= n; ++i) {
    names.push_back("a" + std::to_string(i));
    names.push_back("b" + std::to_string(i));
  }
  names.push_back("b'" + std::to_string(n));
  FiniteStructure s(Signature::graph(), std::move(names));
  auto a = [](int i) { return Element(2 * i + 1); };
  auto b = [](int i) { return Element(2 * i + 2); };
  s.add_tuple(0, {0, a(0)});
  for (int i = 0; i <= n; ++i) {
    if (i > 0) s.add_tuple(0, {a(i), b(i - 1)});
    s.add_tuple(0, {a(i), b(i)});
  }
  s.add_tuple(0, {b(n), Element(2 * n + 3)});
  return s;
}

FiniteStructure link(int n, const Signature& sig) {
  require_nonnegative(n, "link");
  FiniteStructure s(sig, static_cast<std::size_t>(n) + 1);
  for (std::size_t p = 0; p < sig.size(); ++p) {
    std::size_t k = sig[p].arity;
    std::vector<Tuple> ts;
    // tuples over {i, i+1}; the constant ones are shared by neighbouring windows
    for (Element i = 0; i <= Element(n); ++i) {
      std::size_t width = (i < Element(n)) ? 2 : 1;
      std::size_t total = 1;
      for (std::size_t j = 0; j < k; ++j) total *= width;
      for (std::size_t code = 0; code < total; ++code) {
        Tuple t(k);
        std::size_t c = code;
        for (std::size_t j = 0; j < k; ++j) {
          t[j] = i + Element(c % width);
          c /= width;
        }
        ts.push_back(std::move(t));
      }
    }
    s.set_tuples(p, std::move(ts));
  }
  return s;
}

FiniteStructure unary_singleton(const Signature& sig, const std::vector<std::string>& tau) {
  if (!sig.unary_only()) throw ArgumentError("unary_singleton needs a unary-only signature");
  FiniteStructure s(sig, std::vector<std::string>{"*"});
  for (const auto& p : tau) s.add_tuple(sig.index_of(p), {0});
  return s;
}

FiniteStructure generate(GeneratorKind kind, int n) {
  switch (kind) {
    case GeneratorKind::Clique: return clique(n);
    case GeneratorKind::Path: return path(n);
    case GeneratorKind::TransitiveTournament: return transitive_tournament(n);
    case GeneratorKind::Zigzag: return zigzag(n);
    case GeneratorKind::Link: return link(n);
  }
  throw ArgumentError("unknown generator");
}

FiniteStructure product(const FiniteStructure& a, const FiniteStructure& b) {
  require_same_signature(a, b);
  std::vector<std::string> names;
  names.reserve(a.size() * b.size());
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < b.size(); ++y)
      names.push_back("(" + a.name(Element(x)) + "," + b.name(Element(y)) + ")");
  FiniteStructure s(a.signature(), std::move(names));
  const Element nb = Element(b.size());
  for (std::size_t p = 0; p < a.signature().size(); ++p) {
    std::vector<Tuple> ts;
    for (const auto& ta : a.tuples(p))
      for (const auto& tb : b.tuples(p)) {
        Tuple t(ta.size());
        for (std::size_t j = 0; j < ta.size(); ++j) t[j] = ta[j] * nb + tb[j];
        ts.push_back(std::move(t));
      }
    s.set_tuples(p, std::move(ts));
  }
  return s;
}

FiniteStructure disjoint_union(const FiniteStructure& a, const FiniteStructure& b) {
  require_same_signature(a, b);
  std::vector<std::string> names;
  for (const auto& n : a.names()) names.push_back("L:" + n);
  for (const auto& n : b.names()) names.push_back("R:" + n);
  FiniteStructure s(a.signature(), std::move(names));
  const Element off = Element(a.size());
  for (std::size_t p = 0; p < a.signature().size(); ++p) {
    std::vector<Tuple> ts = a.tuples(p);
    for (auto t : b.tuples(p)) {
      for (auto& e : t) e += off;
      ts.push_back(std::move(t));
    }
    s.set_tuples(p, std::move(ts));
  }
  return s;
}

FiniteStructure induced(const FiniteStructure& a, const std::vector<Element>& keep) {
  std::vector<Element> pos(a.size(), Element(-1));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= a.size()) throw ArgumentError("induced: element out of range");
    if (pos[keep[i]] != Element(-1)) throw ArgumentError("induced: repeated element");
    pos[keep[i]] = Element(i);
    names.push_back(a.name(keep[i]));
  }
  FiniteStructure s(a.signature(), std::move(names));
  for (std::size_t p = 0; p < a.signature().size(); ++p) {
    std::vector<Tuple> ts;
    for (const auto& t : a.tuples(p)) {
      Tuple u;
      for (Element e : t) {
        if (pos[e] == Element(-1)) break;
        u.push_back(pos[e]);
      }
      if (u.size() == t.size()) ts.push_back(std::move(u));
    }
    s.set_tuples(p, std::move(ts));
  }
  return s;
}

FiniteStructure remove_tuple(const FiniteStructure& a, std::size_t pred, std::size_t index) {
  FiniteStructure s = a;
  std::vector<Tuple> ts = a.tuples(pred);
  ts.erase(ts.begin() + static_cast<std::ptrdiff_t>(index));
  s.set_tuples(pred, std::move(ts));
  return s;
}

Signature marked_signature(const FiniteStructure& b) {
  std::vector<Predicate> preds = b.signature().predicates();
  for (const auto& n : b.names()) preds.push_back({"P_" + n, 1});
  return Signature(std::move(preds));
}

MarkedStructure mark_target(const FiniteStructure& b) {
  if (b.empty()) throw ArgumentError("mark_target: empty domain");
  FiniteStructure s(marked_signature(b), b.names());
  const std::size_t base = b.signature().size();
  for (std::size_t p = 0; p < base; ++p) s.set_tuples(p, b.tuples(p));
  for (Element e = 0; e < b.size(); ++e) s.add_tuple(base + e, {e});
  return s;
}

FiniteStructure collapse_marks(const MarkedStructure& a, const FiniteStructure& b) {
  if (a.signature() != marked_signature(b))
    throw SignatureMismatch("collapse_marks: source signature is not the marking of the target");
  std::vector<std::string> names;
  for (const auto& n : a.names()) names.push_back("A:" + n);
  for (const auto& n : b.names()) names.push_back("B:" + n);
  FiniteStructure s(b.signature(), std::move(names));
  const Element off = Element(a.size());
  const std::size_t base = b.signature().size();
  // marked[y] = elements of a carrying the mark of y
  std::vector<std::vector<Element>> marked(b.size());
  for (Element y = 0; y < b.size(); ++y)
    for (const auto& t : a.tuples(base + y)) marked[y].push_back(t[0]);
  for (std::size_t p = 0; p < base; ++p) {
    std::vector<Tuple> ts = a.tuples(p);
    for (const auto& tb : b.tuples(p)) {
      Tuple shifted = tb;
      for (auto& e : shifted) e += off;
      ts.push_back(shifted);
      for (std::size_t i = 0; i < tb.size(); ++i)
        for (Element x : marked[tb[i]]) {
          Tuple t = shifted;
          t[i] = x;
          ts.push_back(std::move(t));
        }
    }
    s.set_tuples(p, std::move(ts));
  }
  return s;
}

std::vector<Tuple> adjacency(const FiniteStructure& a, Element elem, std::size_t pred,
                             std::size_t pos) {
  if (pred >= a.signature().size()) throw ArgumentError("adjacency: bad predicate");
  if (pos >= a.signature()[pred].arity) throw ArgumentError("adjacency: bad position");
  if (elem >= a.size()) throw ArgumentError("adjacency: bad element");
  std::vector<Tuple> out;
  for (const auto& t : a.tuples(pred)) {
    if (t[pos] != elem) continue;
    Tuple u;
    for (std::size_t j = 0; j < t.size(); ++j)
      if (j != pos) u.push_back(t[j]);
    out.push_back(std::move(u));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IncidenceGraph incidence_graph(const FiniteStructure& a) {
  IncidenceGraph g;
  g.elements = a.size();
  for (std::size_t p = 0; p < a.signature().size(); ++p)
    for (std::size_t i = 0; i < a.tuples(p).size(); ++i) g.hyperedges.emplace_back(p, i);
  g.adj.assign(g.elements + g.hyperedges.size(), {});
  for (std::size_t h = 0; h < g.hyperedges.size(); ++h) {
    auto [p, i] = g.hyperedges[h];
    Tuple t = a.tuples(p)[i];
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    for (Element e : t) {
      g.adj[e].push_back(g.elements + h);
      g.adj[g.elements + h].push_back(e);
    }
  }
  return g;
}

namespace {

std::vector<std::size_t> bfs(const IncidenceGraph& g, std::size_t src) {
  std::vector<std::size_t> d(g.adj.size(), kInfinite);
  std::deque<std::size_t> q{src};
  d[src] = 0;
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto w : g.adj[v])
      if (d[w] == kInfinite) {
        d[w] = d[v] + 1;
        q.push_back(w);
      }
  }
  return d;
}

}  // namespace

std::vector<std::size_t> distances_from(const FiniteStructure& a, Element x) {
  auto g = incidence_graph(a);
  auto d = bfs(g, x);
  std::vector<std::size_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = d[i] == kInfinite ? kInfinite : d[i] / 2;
  return out;
}

std::size_t distance(const FiniteStructure& a, Element x, Element y) {
  return distances_from(a, x).at(y);
}

std::size_t diameter(const FiniteStructure& a) {
  auto g = incidence_graph(a);
  std::size_t best = 0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    auto d = bfs(g, x);
    for (std::size_t y = 0; y < a.size(); ++y) {
      if (d[y] == kInfinite) return kInfinite;
      best = std::max(best, d[y] / 2);
    }
  }
  return best;
}

std::vector<std::vector<Element>> connected_components(const FiniteStructure& a) {
  auto g = incidence_graph(a);
  std::vector<bool> seen(g.adj.size(), false);
  std::vector<std::vector<Element>> comps;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (seen[x]) continue;
    std::vector<Element> comp;
    std::vector<std::size_t> stack{x};
    seen[x] = true;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      if (v < a.size()) comp.push_back(Element(v));
      for (auto w : g.adj[v])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool is_connected(const FiniteStructure& a) { return connected_components(a).size() == 1; }

FiniteStructure ball(const FiniteStructure& a, Element center, std::size_t radius) {
  auto d = distances_from(a, center);
  std::vector<Element> keep;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (d[i] <= radius) keep.push_back(Element(i));
  return induced(a, keep);
}

bool is_sigma_tree(const FiniteStructure& a) {
  if (!is_connected(a)) return false;
  // acyclic incidence multigraph: one edge per tuple position, so a repeated
  // element inside a tuple already closes a cycle
  std::size_t edges = 0, nodes = a.size();
  for (std::size_t p = 0; p < a.signature().size(); ++p) {
    edges += a.tuples(p).size() * a.signature()[p].arity;
    nodes += a.tuples(p).size();
  }
  return edges + 1 == nodes;
}

}  // namespace autohom
