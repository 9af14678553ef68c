#include "autohom/homset.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>

#include "autohom/consistency.hpp"

namespace autohom {

bool is_hom(const FiniteStructure& a, const FiniteStructure& b, const Assignment& f) {
  if (a.signature() != b.signature() || f.size() != a.size()) return false;
  for (Element x : f)
    if (x >= b.size()) return false;
  for (std::size_t p = 0; p < a.signature().size(); ++p)
    for (const auto& t : a.tuples(p)) {
      Tuple u(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) u[j] = f[t[j]];
      if (!b.contains(p, u)) return false;
    }
  return true;
}

namespace {

void require_same_signature(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.signature() != b.signature())
    throw SignatureMismatch("signatures differ: [" + a.signature().to_string() + "] vs [" +
                            b.signature().to_string() + "]");
}

// smallest non-singleton image, ties broken by element order; -1 if none
std::ptrdiff_t branch_variable(const GuessFunction& f) {
  std::ptrdiff_t best = -1;
  std::size_t best_size = 0;
  for (std::size_t x = 0; x < f.image.size(); ++x) {
    std::size_t c = f.image[x].count();
    if (c > 1 && (best < 0 || c < best_size)) {
      best = std::ptrdiff_t(x);
      best_size = c;
    }
  }
  return best;
}

Assignment read_off(const GuessFunction& f) {
  Assignment m(f.image.size());
  for (std::size_t x = 0; x < m.size(); ++x) m[x] = f.image[x].first();
  return m;
}

struct Search {
  const Propagator& prop;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  bool exhausted = false;

  // visit returns true to stop the search
  bool dfs(GuessFunction& f, const std::function<bool(const Assignment&)>& visit) {
    if (budget && nodes >= budget) {
      exhausted = true;
      return true;
    }
    ++nodes;
    auto v = branch_variable(f);
    if (v < 0) return visit(read_off(f));
    for (Element val : f.image[std::size_t(v)].elements()) {
      GuessFunction g = f;
      g.image[std::size_t(v)].clear();
      g.image[std::size_t(v)].set(val);
      if (!prop.run(g, {Element(v)})) continue;
      if (dfs(g, visit)) return true;
    }
    return false;
  }
};

}  // namespace

HomResult find_hom(const FiniteStructure& a, const FiniteStructure& b, std::uint64_t budget) {
  require_same_signature(a, b);
  HomResult r;
  if (a.empty()) {
    r.status = HomStatus::Found;
    return r;
  }
  Propagator prop(a, b);
  GuessFunction f = top_guess(a, b);
  if (b.empty() || !prop.run(f)) {
    r.status = HomStatus::NoHom;
    r.nodes = 1;
    return r;
  }
  Search s{prop, budget};
  bool found = false;
  s.dfs(f, [&](const Assignment& m) {
    r.map = m;
    found = true;
    return true;
  });
  r.nodes = s.nodes;
  r.status = found ? HomStatus::Found : (s.exhausted ? HomStatus::Unknown : HomStatus::NoHom);
  return r;
}

bool hom_exists(const FiniteStructure& a, const FiniteStructure& b) {
  return find_hom(a, b).status == HomStatus::Found;
}

std::vector<Assignment> enumerate_homs(const FiniteStructure& a, const FiniteStructure& b,
                                       std::uint64_t guard) {
  require_same_signature(a, b);
  std::vector<Assignment> out;
  if (a.empty()) return {Assignment{}};
  Propagator prop(a, b);
  GuessFunction f = top_guess(a, b);
  if (b.empty() || !prop.run(f)) return out;
  Search s{prop, 0};
  s.dfs(f, [&](const Assignment& m) {
    if (out.size() >= guard)
      throw SizeGuardExceeded("enumerate_homs: more than " + std::to_string(guard) +
                              " homomorphisms");
    out.push_back(m);
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Graph-like signatures (arity at most 2) into targets of at most 64
// elements: candidate sets are bitmasks narrowed by already assigned
// neighbours, and independent components multiply.
class SmallCounter {
 public:
  static bool applies(const FiniteStructure& a, const FiniteStructure& b) {
    return b.size() <= 64 && a.signature().max_arity() <= 2;
  }

  SmallCounter(const FiniteStructure& a, const FiniteStructure& b) : a_(a), f_(a.size()) {
    const auto& sig = a.signature();
    std::uint64_t all = b.size() == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << b.size()) - 1;
    unary_.assign(sig.size(), all);
    loop_.assign(sig.size(), 0);
    out_.assign(sig.size(), std::vector<std::uint64_t>(b.size(), 0));
    in_ = out_;
    for (std::size_t p = 0; p < sig.size(); ++p) {
      if (sig[p].arity == 1) {
        std::uint64_t m = 0;
        for (const auto& t : b.tuples(p)) m |= std::uint64_t(1) << t[0];
        unary_[p] = m;
      } else if (sig[p].arity == 2) {
        for (const auto& t : b.tuples(p)) {
          out_[p][t[0]] |= std::uint64_t(1) << t[1];
          in_[p][t[1]] |= std::uint64_t(1) << t[0];
          if (t[0] == t[1]) loop_[p] |= std::uint64_t(1) << t[0];
        }
      } else if (b.tuples(p).empty() && !a.tuples(p).empty()) {
        nullary_fails_ = true;
      }
    }
    all_ = all;
  }

  std::uint64_t run() {
    if (nullary_fails_) return 0;
    const std::size_t n = a_.size();
    std::vector<std::vector<Element>> nb(n);
    for (std::size_t p = 0; p < a_.signature().size(); ++p)
      if (a_.signature()[p].arity == 2)
        for (const auto& t : a_.tuples(p)) nb[t[0]].push_back(t[1]), nb[t[1]].push_back(t[0]);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> pos(n);
    std::uint64_t total = 1;
    for (Element r = 0; r < n && total; ++r) {
      if (seen[r]) continue;
      // BFS order of one component; each vertex is checked against the
      // tuples linking it to earlier ones
      order_.clear();
      order_.push_back(r);
      seen[r] = true;
      for (std::size_t i = 0; i < order_.size(); ++i)
        for (Element y : nb[order_[i]])
          if (!seen[y]) seen[y] = true, order_.push_back(y);
      for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i]] = i;
      checks_.assign(order_.size(), {});
      base_.assign(order_.size(), all_);
      for (std::size_t p = 0; p < a_.signature().size(); ++p) {
        std::size_t ar = a_.signature()[p].arity;
        for (const auto& t : a_.tuples(p)) {
          if (ar == 1) {
            if (in_component(t[0], pos)) base_[pos[t[0]]] &= unary_[p];
            continue;
          }
          if (ar != 2 || !in_component(t[0], pos)) continue;
          std::size_t i = pos[t[0]], j = pos[t[1]];
          if (i == j)
            base_[i] &= loop_[p];
          else if (i > j)
            checks_[i].push_back({p, true, j});  // t[0] is later: must reach f(t[1])
          else
            checks_[j].push_back({p, false, i});
        }
      }
      total *= count(0);
    }
    return total;
  }

 private:
  struct Check {
    std::size_t pred;
    bool outgoing;  // the later vertex is the tail of the tuple
    std::size_t earlier;
  };

  bool in_component(Element x, const std::vector<std::size_t>& pos) const {
    return pos[x] < order_.size() && order_[pos[x]] == x;
  }

  std::uint64_t count(std::size_t i) {
    if (i == order_.size()) return 1;
    std::uint64_t cand = base_[i];
    for (const auto& c : checks_[i]) {
      Element img = f_[c.earlier];
      cand &= c.outgoing ? in_[c.pred][img] : out_[c.pred][img];
      if (!cand) return 0;
    }
    std::uint64_t total = 0;
    while (cand) {
      Element y = Element(__builtin_ctzll(cand));
      cand &= cand - 1;
      f_[i] = y;
      total += count(i + 1);
    }
    return total;
  }

  const FiniteStructure& a_;
  std::vector<std::uint64_t> unary_, loop_;
  std::vector<std::vector<std::uint64_t>> out_, in_;
  std::uint64_t all_ = 0;
  bool nullary_fails_ = false;
  std::vector<Element> order_;
  std::vector<std::uint64_t> base_;
  std::vector<std::vector<Check>> checks_;
  Assignment f_;  // indexed by BFS position
};

class Counter {
 public:
  Counter(const FiniteStructure& a, const FiniteStructure& b) : a_(a), b_(b), prop_(a, b) {
    for (std::size_t p = 0; p < a.signature().size(); ++p)
      for (std::size_t i = 0; i < a.tuples(p).size(); ++i) all_.emplace_back(p, i);
  }

  std::uint64_t run() {
    GuessFunction f = top_guess(a_, b_);
    if (!prop_.run(f)) return 0;
    std::vector<Element> vars(a_.size());
    for (std::size_t x = 0; x < vars.size(); ++x) vars[x] = Element(x);
    return count(f, vars, all_);
  }

 private:
  using Ref = std::pair<std::size_t, std::size_t>;

  bool entailed(const GuessFunction& f, const Ref& h) const {
    const Tuple& t = a_.tuples(h.first)[h.second];
    std::vector<std::vector<Element>> doms;
    std::size_t total = 1;
    for (Element x : t) {
      doms.push_back(f.image[x].elements());
      total *= doms.back().size();
      if (total > 256) return false;
    }
    // every combination consistent with repeated source elements must be a tuple
    std::vector<std::size_t> idx(t.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
      std::size_t c = n;
      bool consistent = true;
      Tuple u(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) {
        idx[j] = c % doms[j].size();
        c /= doms[j].size();
        u[j] = doms[j][idx[j]];
        for (std::size_t l = 0; l < j; ++l)
          if (t[l] == t[j] && u[l] != u[j]) consistent = false;
      }
      if (consistent && !b_.contains(h.first, u)) return false;
    }
    return true;
  }

  std::uint64_t count(const GuessFunction& f, const std::vector<Element>& vars,
                      const std::vector<Ref>& cons) {
    std::vector<Ref> live;
    for (const auto& h : cons)
      if (!entailed(f, h)) live.push_back(h);
    // union-find over vars through live constraints
    std::map<Element, Element> parent;
    std::function<Element(Element)> root = [&](Element x) {
      Element r = parent[x];
      return r == x ? x : (parent[x] = root(r));
    };
    for (Element x : vars) parent[x] = x;
    std::map<Element, bool> involved;
    for (const auto& h : live) {
      const Tuple& t = a_.tuples(h.first)[h.second];
      for (Element x : t) {
        involved[x] = true;
        parent[root(x)] = root(t[0]);
      }
    }
    std::uint64_t total = 1;
    for (Element x : vars)
      if (!involved.count(x)) total *= f.image[x].count();
    if (total == 0) return 0;
    std::map<Element, std::pair<std::vector<Element>, std::vector<Ref>>> comps;
    for (Element x : vars)
      if (involved.count(x)) comps[root(x)].first.push_back(x);
    for (const auto& h : live) comps[root(a_.tuples(h.first)[h.second][0])].second.push_back(h);
    for (auto& [r, comp] : comps) {
      total *= branch(f, comp.first, comp.second);
      if (total == 0) return 0;
    }
    return total;
  }

  std::uint64_t branch(const GuessFunction& f, const std::vector<Element>& vars,
                       const std::vector<Ref>& cons) {
    Element v = vars[0];
    std::size_t best = 0;
    for (Element x : vars) {
      std::size_t c = f.image[x].count();
      if (c > 1 && (best == 0 || c < best)) {
        best = c;
        v = x;
      }
    }
    std::uint64_t total = 0;
    for (Element val : f.image[v].elements()) {
      GuessFunction g = f;
      g.image[v].clear();
      g.image[v].set(val);
      if (!prop_.run(g, {v})) continue;
      total += count(g, vars, cons);
    }
    return total;
  }

  const FiniteStructure& a_;
  const FiniteStructure& b_;
  Propagator prop_;
  std::vector<Ref> all_;
};

}  // namespace

std::uint64_t count_homs(const FiniteStructure& a, const FiniteStructure& b) {
  require_same_signature(a, b);
  if (a.empty()) return 1;
  if (b.empty()) return 0;
  if (SmallCounter::applies(a, b)) return SmallCounter(a, b).run();
  return Counter(a, b).run();
}

std::size_t PowerStructure::index_of(const Assignment& h) const {
  auto it = std::lower_bound(maps.begin(), maps.end(), h);
  if (it == maps.end() || *it != h) throw ArgumentError("not an element of the power structure");
  return std::size_t(it - maps.begin());
}

namespace {

std::vector<Assignment> all_maps(std::size_t n, std::size_t m, std::uint64_t guard) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= m;
    if (total > guard) throw SizeGuardExceeded("power: more than " + std::to_string(guard) + " maps");
  }
  std::vector<Assignment> out;
  out.reserve(total);
  Assignment f(n, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = n; i-- > 0;) f[i] = Element(c % m), c /= m;
    out.push_back(f);
  }
  return out;
}

}  // namespace

PowerStructure power_structure(const FiniteStructure& c, const FiniteStructure& b,
                               std::uint64_t guard, PowerDomain domain) {
  require_same_signature(c, b);
  PowerStructure pw;
  const bool homs_only = domain == PowerDomain::Homomorphisms;
  pw.maps = homs_only ? enumerate_homs(b, c, guard) : all_maps(b.size(), c.size(), guard);
  std::vector<std::string> names;
  for (const auto& h : pw.maps) {
    std::string s = "[";
    for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + c.name(h[i]);
    names.push_back(s + "]");
  }
  pw.structure = FiniteStructure(c.signature(), std::move(names));
  const std::size_t nb = b.size();
  const Signature& sig = c.signature();
  for (std::size_t p = 0; p < sig.size(); ++p) {
    const std::size_t k = sig[p].arity;
    // k copies of b plus one p-tuple across the copies per p-tuple of b:
    // homomorphisms from this structure into c are the p-tuples of c^b.
    // Over all maps the copies carry no tuples of their own.
    FiniteStructure m(sig, nb * k);
    for (std::size_t q = 0; q < sig.size(); ++q) {
      std::vector<Tuple> ts;
      for (std::size_t j = 0; j < k && homs_only; ++j)
        for (auto t : b.tuples(q)) {
          for (auto& e : t) e += Element(j * nb);
          ts.push_back(std::move(t));
        }
      if (q == p)
        for (auto t : b.tuples(p)) {
          for (std::size_t j = 0; j < k; ++j) t[j] += Element(j * nb);
          ts.push_back(std::move(t));
        }
      m.set_tuples(q, std::move(ts));
    }
    std::vector<Tuple> rel;
    for (const auto& g : enumerate_homs(m, c, guard)) {
      Tuple t(k);
      for (std::size_t j = 0; j < k; ++j)
        t[j] = Element(pw.index_of(Assignment(g.begin() + std::ptrdiff_t(j * nb),
                                              g.begin() + std::ptrdiff_t((j + 1) * nb))));
      rel.push_back(std::move(t));
    }
    pw.structure.set_tuples(p, std::move(rel));
  }
  return pw;
}

FiniteStructure power(const FiniteStructure& c, const FiniteStructure& b, std::uint64_t guard,
                      PowerDomain domain) {
  return power_structure(c, b, guard, domain).structure;
}

Assignment curry(const FiniteStructure& a, const FiniteStructure& b, const FiniteStructure& c,
                 const PowerStructure& pw, const Assignment& f) {
  if (!is_hom(product(a, b), c, f)) throw ArgumentError("curry: not a homomorphism");
  Assignment out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) {
    Assignment h(f.begin() + std::ptrdiff_t(x * b.size()),
                 f.begin() + std::ptrdiff_t((x + 1) * b.size()));
    out[x] = Element(pw.index_of(h));
  }
  return out;
}

Assignment uncurry(const FiniteStructure& a, const FiniteStructure& b, const FiniteStructure& c,
                   const PowerStructure& pw, const Assignment& big_f) {
  if (!is_hom(a, pw.structure, big_f)) throw ArgumentError("uncurry: not a homomorphism");
  (void)c;
  Assignment out;
  out.reserve(a.size() * b.size());
  for (std::size_t x = 0; x < a.size(); ++x) {
    const auto& h = pw.maps[big_f[x]];
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

namespace {

std::vector<Element> without(const std::vector<Element>& keep, Element v) {
  std::vector<Element> out;
  for (Element x : keep)
    if (x != v) out.push_back(x);
  return out;
}

bool next_combination(std::vector<Element>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] < Element(n - k + i)) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (std::uint64_t(1) << 40)) return r;
  }
  return r;
}

}  // namespace

CoreResult core_of(const FiniteStructure& a) {
  if (a.empty()) throw ArgumentError("core: empty domain");
  // greedy shrinking gives the core size
  std::vector<Element> keep(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) keep[x] = Element(x);
  for (bool shrunk = true; shrunk;) {
    shrunk = false;
    FiniteStructure cur = induced(a, keep);
    for (Element v : keep) {
      auto smaller = without(keep, v);
      if (hom_exists(cur, induced(a, smaller))) {
        keep = std::move(smaller);
        shrunk = true;
        break;
      }
    }
  }
  // canonical representative: least subset of that size admitting a retraction
  const std::size_t c = keep.size();
  if (binomial(a.size(), c) <= kCoreSubsetGuard) {
    std::vector<Element> comb(c);
    for (std::size_t i = 0; i < c; ++i) comb[i] = Element(i);
    do {
      if (hom_exists(a, induced(a, comb))) {
        keep = comb;
        break;
      }
    } while (next_combination(comb, a.size()));
  }
  CoreResult r;
  r.kept = keep;
  r.core = induced(a, keep);
  Assignment h = find_hom(a, r.core).map;
  // h restricted to the core is an automorphism; undo it to get a retraction
  Assignment inv(c);
  for (std::size_t i = 0; i < c; ++i) inv[h[keep[i]]] = Element(i);
  r.retraction.resize(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) r.retraction[x] = inv[h[x]];
  return r;
}

FiniteStructure core(const FiniteStructure& a) { return core_of(a).core; }

bool is_core(const FiniteStructure& a) {
  if (a.empty()) throw ArgumentError("is_core: empty domain");
  std::vector<Element> all(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) all[x] = Element(x);
  for (Element v = 0; v < a.size(); ++v)
    if (hom_exists(a, induced(a, without(all, v)))) return false;
  return true;
}

bool is_rigid(const FiniteStructure& a) {
  std::size_t automorphisms = 0;
  for (const auto& h : enumerate_homs(a, a)) {
    std::vector<bool> hit(a.size(), false);
    bool bij = true;
    for (Element x : h) {
      if (hit[x]) bij = false;
      hit[x] = true;
    }
    if (bij) ++automorphisms;
  }
  return automorphisms == 1;
}

}  // namespace autohom
