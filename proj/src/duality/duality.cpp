#include "autohom/duality.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "autohom/canonical.hpp"

namespace autohom {

namespace {

std::uint64_t subset_mask(const ElementSet& s) {
  std::uint64_t m = 0;
  for (Element e : s.elements()) m |= std::uint64_t(1) << e;
  return m;
}

}  // namespace

ElementSet fv_subset(const FiniteStructure& b, Element e) {
  ElementSet s(b.size());
  std::uint64_t m = std::uint64_t(e) + 1;
  for (Element i = 0; i < b.size(); ++i)
    if (m >> i & 1) s.set(i);
  return s;
}

Element fv_element(const ElementSet& s) { return Element(subset_mask(s) - 1); }

FiniteStructure feder_vardi(const FiniteStructure& b) {
  const std::size_t n = b.size();
  if (n == 0) throw ArgumentError("feder_vardi: empty domain");
  if (n > kFederVardiMaxTarget) throw SizeGuardExceeded("feder_vardi: target too large");
  const std::uint64_t subsets = (std::uint64_t(1) << n) - 1;
  std::vector<std::string> names;
  for (std::uint64_t m = 1; m <= subsets; ++m) {
    std::string s = "{";
    bool first = true;
    for (Element i = 0; i < n; ++i)
      if (m >> i & 1) {
        s += (first ? "" : ",") + b.name(i);
        first = false;
      }
    names.push_back(s + "}");
  }
  FiniteStructure fv(b.signature(), std::move(names));
  for (std::size_t p = 0; p < b.signature().size(); ++p) {
    const std::size_t k = b.signature()[p].arity;
    double total = 1;
    for (std::size_t j = 0; j < k; ++j) total *= double(subsets);
    if (total > 2e7) throw SizeGuardExceeded("feder_vardi: too many candidate tuples");
    std::vector<Tuple> rel;
    std::vector<std::uint64_t> y(k, 1);
    for (;;) {
      // cover[i] = i-th coordinates of the b-tuples lying inside y
      std::vector<std::uint64_t> cover(k, 0);
      for (const auto& s : b.tuples(p)) {
        bool inside = true;
        for (std::size_t j = 0; j < k && inside; ++j) inside = y[j] >> s[j] & 1;
        if (!inside) continue;
        for (std::size_t j = 0; j < k; ++j) cover[j] |= std::uint64_t(1) << s[j];
      }
      if (cover == y) {
        Tuple t(k);
        for (std::size_t j = 0; j < k; ++j) t[j] = Element(y[j] - 1);
        rel.push_back(std::move(t));
      }
      std::size_t j = 0;
      while (j < k && y[j] == subsets) y[j++] = 1;
      if (j == k) break;
      ++y[j];
    }
    fv.set_tuples(p, std::move(rel));
  }
  return fv;
}

TreeDuality tree_duality(const FiniteStructure& b) {
  TreeDuality td;
  auto r = find_hom(feder_vardi(b), b);
  td.holds = r.found();
  if (td.holds) td.retraction = r.map;
  return td;
}

bool has_tree_duality(const FiniteStructure& b) { return tree_duality(b).holds; }

HcDecision hc_decides(const FiniteStructure& a, const FiniteStructure& b) {
  HcDecision d;
  d.trace = hc_fixpoint(a, b);
  d.all_nonempty = !d.trace.fixpoint().any_empty();
  d.sound = has_tree_duality(b);
  return d;
}

namespace {

// every tuple over {x,y} lies in every relation
bool one_linked_pair(const FiniteStructure& b, Element x, Element y) {
  for (std::size_t p = 0; p < b.signature().size(); ++p) {
    const std::size_t k = b.signature()[p].arity;
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << k); ++code) {
      Tuple t(k);
      for (std::size_t j = 0; j < k; ++j) t[j] = (code >> j & 1) ? y : x;
      if (!b.contains(p, t)) return false;
    }
  }
  return true;
}

}  // namespace

LinkedAnalysis linked_analysis(const FiniteStructure& b) {
  const std::size_t n = b.size();
  LinkedAnalysis la;
  la.one_linked.assign(n, std::vector<bool>(n, false));
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) la.one_linked[x][y] = one_linked_pair(b, x, y);
  la.linked = la.one_linked;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t x = 0; x < n; ++x)
      if (la.linked[x][m])
        for (std::size_t y = 0; y < n; ++y)
          if (la.linked[m][y]) la.linked[x][y] = true;
  std::vector<bool> done(n, false);
  for (Element x = 0; x < n; ++x) {
    if (done[x] || !la.linked[x][x]) continue;
    std::vector<Element> cls;
    for (Element y = 0; y < n; ++y)
      if (la.linked[x][y]) {
        cls.push_back(y);
        done[y] = true;
      }
    la.classes.push_back(std::move(cls));
  }
  return la;
}

namespace {

// Neighbours of f among the unseen homomorphisms b2 -> b: g is one-linked to
// f when every tuple mixing f and g pointwise over an R-tuple of b2 lands in
// R(b). Patterns with a single g position reduce to per-element domains.
class LinkSearch {
 public:
  LinkSearch(const FiniteStructure& b, const FiniteStructure& b2) : b_(b), b2_(b2) {}

  std::vector<std::size_t> neighbours(const Assignment& f, const std::vector<Assignment>& homs,
                                      const std::vector<bool>& seen) const {
    const Signature& sig = b_.signature();
    std::vector<ElementSet> dom(b2_.size(), ElementSet(b_.size(), true));
    for (std::size_t p = 0; p < sig.size(); ++p) {
      const std::size_t k = sig[p].arity;
      for (const auto& t : b2_.tuples(p))
        for (std::size_t j = 0; j < k; ++j) {
          ElementSet allowed(b_.size());
          for (const auto& s : b_.tuples(p)) {
            bool ok = true;
            for (std::size_t l = 0; l < k && ok; ++l) ok = l == j || s[l] == f[t[l]];
            if (ok) allowed.set(s[j]);
          }
          dom[t[j]] &= allowed;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < homs.size(); ++i) {
      if (seen[i]) continue;
      const Assignment& g = homs[i];
      bool ok = true;
      for (std::size_t y = 0; y < g.size() && ok; ++y) ok = dom[y].test(g[y]);
      if (ok && sig.max_arity() > 2) ok = mixed_patterns_hold(f, g);
      if (ok) out.push_back(i);
    }
    return out;
  }

 private:
  bool mixed_patterns_hold(const Assignment& f, const Assignment& g) const {
    const Signature& sig = b_.signature();
    for (std::size_t p = 0; p < sig.size(); ++p) {
      const std::size_t k = sig[p].arity;
      for (const auto& t : b2_.tuples(p))
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t(1) << k); ++mask) {
          Tuple u(k);
          for (std::size_t j = 0; j < k; ++j) u[j] = (mask >> j & 1) ? g[t[j]] : f[t[j]];
          if (!b_.contains(p, u)) return false;
        }
    }
    return true;
  }

  const FiniteStructure& b_;
  const FiniteStructure& b2_;
};

}  // namespace

FiniteDuality finite_duality(const FiniteStructure& b, std::uint64_t guard) {
  FiniteDuality fd;
  if (b.empty()) throw ArgumentError("finite_duality: empty domain");
  if (b.signature().unary_only()) {
    fd.verdict = Tristate::Yes;
    fd.note = "unary-only signature";
    return fd;
  }
  const FiniteStructure b2 = product(b, b);
  const std::size_t n = b.size();
  Assignment pi1(n * n), pi2(n * n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      pi1[x * n + y] = x;
      pi2[x * n + y] = y;
    }
  try {
    const std::vector<Assignment> homs = enumerate_homs(b2, b, guard);
    fd.power_size = homs.size();
    const std::size_t s = std::size_t(std::lower_bound(homs.begin(), homs.end(), pi1) - homs.begin());
    const std::size_t t = std::size_t(std::lower_bound(homs.begin(), homs.end(), pi2) - homs.begin());
    // breadth-first search from pi1 along one-linked pairs (every element
    // of the power structure is a homomorphism, hence one-linked to itself)
    LinkSearch ls(b, b2);
    std::vector<bool> seen(homs.size(), false);
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    bool linked = false;
    while (!queue.empty() && !linked) {
      std::size_t x = queue.front();
      queue.pop_front();
      linked = x == t;
      for (std::size_t y : ls.neighbours(homs[x], homs, seen)) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
    fd.verdict = linked ? Tristate::Yes : Tristate::No;
  } catch (const SizeGuardExceeded& e) {
    fd.verdict = Tristate::Unknown;
    fd.note = e.what();
  }
  return fd;
}

Tristate has_finite_duality(const FiniteStructure& b, std::uint64_t guard) {
  return finite_duality(b, guard).verdict;
}

bool is_critical_obstruction(const FiniteStructure& d, const FiniteStructure& b) {
  if (hom_exists(d, b)) return false;
  for (std::size_t p = 0; p < d.signature().size(); ++p)
    for (std::size_t i = 0; i < d.tuples(p).size(); ++i)
      if (!hom_exists(remove_tuple(d, p, i), b)) return false;
  for (Element v = 0; v < d.size(); ++v) {
    std::vector<Element> keep;
    for (Element x = 0; x < d.size(); ++x)
      if (x != v) keep.push_back(x);
    if (!hom_exists(induced(d, keep), b)) return false;
  }
  return true;
}

namespace {

// restricted growth strings of length k: equality patterns of a tuple
void growth_strings(std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> s(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == k) {
      out.push_back(s);
      return;
    }
    for (std::size_t v = 0; v <= blocks; ++v) {
      s[i] = v;
      rec(i + 1, std::max(blocks, v + 1));
    }
  };
  rec(0, 0);
}

FiniteStructure relabel_canonical(const FiniteStructure& s, const CanonicalForm& cf) {
  FiniteStructure r = induced(s, cf.order);
  FiniteStructure out(s.signature(), s.size());
  for (std::size_t p = 0; p < s.signature().size(); ++p) out.set_tuples(p, r.tuples(p));
  return out;
}

}  // namespace

std::vector<FiniteStructure> critical_obstructions(const FiniteStructure& b, std::size_t max_vertices,
                                                   std::size_t max_tuples, std::uint64_t guard) {
  const Signature& sig = b.signature();
  std::set<std::vector<std::uint32_t>> seen;
  std::map<std::vector<std::uint32_t>, FiniteStructure> found;
  std::uint64_t explored = 0;
  std::vector<FiniteStructure> frontier;

  // classify a new connected structure: extend it, record it, or drop it
  auto consider = [&](const FiniteStructure& s, std::vector<FiniteStructure>& next) {
    auto cf = canonical_form(s);
    if (!seen.insert(cf.key).second) return;
    if (++explored > guard)
      throw SizeGuardExceeded("critical_obstructions: explored more than " + std::to_string(guard) +
                              " structures");
    FiniteStructure c = relabel_canonical(s, cf);
    if (hom_exists(c, b)) {
      next.push_back(std::move(c));
    } else if (is_critical_obstruction(c, b)) {
      found.emplace(cf.key, std::move(c));
    }
  };

  if (max_tuples >= 1)
    for (std::size_t p = 0; p < sig.size(); ++p) {
      std::vector<std::vector<std::size_t>> pats;
      growth_strings(sig[p].arity, pats);
      for (const auto& pat : pats) {
        std::size_t n = *std::max_element(pat.begin(), pat.end()) + 1;
        if (n > max_vertices) continue;
        FiniteStructure s(sig, n);
        Tuple t(pat.begin(), pat.end());
        s.add_tuple(p, t);
        consider(s, frontier);
      }
    }

  for (std::size_t m = 1; m < max_tuples && !frontier.empty(); ++m) {
    std::vector<FiniteStructure> next;
    for (const auto& s : frontier) {
      const std::size_t n = s.size();
      for (std::size_t p = 0; p < sig.size(); ++p) {
        const std::size_t k = sig[p].arity;
        // entries < n are old vertices, n, n+1, ... are new ones in order of appearance
        Tuple t(k);
        std::function<void(std::size_t, std::size_t, bool)> rec = [&](std::size_t i, std::size_t fresh,
                                                                     bool uses_old) {
          if (i == k) {
            if (!uses_old || s.contains(p, t)) return;
            FiniteStructure e(sig, n + fresh);
            for (std::size_t q = 0; q < sig.size(); ++q) e.set_tuples(q, s.tuples(q));
            e.add_tuple(p, t);
            consider(e, next);
            return;
          }
          for (Element v = 0; v < n; ++v) {
            t[i] = v;
            rec(i + 1, fresh, true);
          }
          for (std::size_t f = 0; f <= fresh; ++f) {
            std::size_t now = f == fresh ? fresh + 1 : fresh;
            if (n + now > max_vertices) continue;
            t[i] = Element(n + f);
            rec(i + 1, now, uses_old);
          }
        };
        rec(0, 0, false);
      }
    }
    frontier = std::move(next);
  }

  std::vector<FiniteStructure> out;
  for (auto& [k, s] : found) out.push_back(std::move(s));
  std::stable_sort(out.begin(), out.end(), [](const FiniteStructure& x, const FiniteStructure& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x.tuple_count() < y.tuple_count();
  });
  return out;
}

DualCheck verify_dual(const FiniteStructure& b, const std::vector<FiniteStructure>& duals,
                      const std::vector<FiniteStructure>& corpus) {
  DualCheck r;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    bool maps = hom_exists(corpus[i], b);
    bool blocked = std::any_of(duals.begin(), duals.end(),
                               [&](const FiniteStructure& d) { return hom_exists(d, corpus[i]); });
    if (maps == blocked) {
      r.ok = false;
      r.counterexample = i;
      return r;
    }
  }
  return r;
}

std::vector<FiniteStructure> unary_dual(const FiniteStructure& b) {
  const Signature& sig = b.signature();
  if (!sig.unary_only()) throw ArgumentError("unary_dual: signature is not unary-only");
  if (sig.size() > 20) throw SizeGuardExceeded("unary_dual: too many predicates");
  std::vector<std::uint64_t> types(b.size(), 0);
  for (std::size_t p = 0; p < sig.size(); ++p)
    for (const auto& t : b.tuples(p)) types[t[0]] |= std::uint64_t(1) << p;
  std::vector<FiniteStructure> out;
  for (std::uint64_t tau = 0; tau < (std::uint64_t(1) << sig.size()); ++tau) {
    bool realised = std::any_of(types.begin(), types.end(),
                                [&](std::uint64_t ty) { return (tau & ~ty) == 0; });
    if (realised) continue;
    std::vector<std::string> names;
    for (std::size_t p = 0; p < sig.size(); ++p)
      if (tau >> p & 1) names.push_back(sig[p].name);
    out.push_back(unary_singleton(sig, names));
  }
  return out;
}

}  // namespace autohom
