#include "autohom/canonical.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace autohom {

namespace {

struct Occurrence {
  std::uint32_t pred;
  std::uint32_t index;
  std::uint32_t pos;
};

class Canonizer {
 public:
  explicit Canonizer(const FiniteStructure& a) : a_(a), occ_(a.size()) {
    for (std::size_t p = 0; p < a.signature().size(); ++p)
      for (std::size_t i = 0; i < a.tuples(p).size(); ++i)
        for (std::size_t j = 0; j < a.tuples(p)[i].size(); ++j)
          occ_[a.tuples(p)[i][j]].push_back({std::uint32_t(p), std::uint32_t(i), std::uint32_t(j)});
  }

  CanonicalForm run() {
    std::vector<std::uint32_t> colors(a_.size(), 0);
    refine(colors);
    search(colors);
    return {best_order_, best_key_};
  }

 private:
  // Refines until the number of colour classes stops growing. Colours are
  // ranks of (old colour, sorted occurrence signature), so they only depend
  // on the structure up to isomorphism.
  std::size_t refine(std::vector<std::uint32_t>& colors) const {
    std::size_t classes = count_classes(colors);
    for (;;) {
      std::vector<std::vector<std::uint32_t>> sig(a_.size());
      for (std::size_t v = 0; v < a_.size(); ++v) {
        std::vector<std::vector<std::uint32_t>> entries;
        for (const auto& o : occ_[v]) {
          const Tuple& t = a_.tuples(o.pred)[o.index];
          std::vector<std::uint32_t> e{o.pred, o.pos};
          for (Element x : t) e.push_back(colors[x]);
          entries.push_back(std::move(e));
        }
        std::sort(entries.begin(), entries.end());
        sig[v].push_back(colors[v]);
        for (const auto& e : entries) {
          sig[v].push_back(std::uint32_t(e.size()));
          sig[v].insert(sig[v].end(), e.begin(), e.end());
        }
      }
      std::vector<std::vector<std::uint32_t>> sorted = sig;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (std::size_t v = 0; v < a_.size(); ++v)
        colors[v] = std::uint32_t(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
      if (sorted.size() == classes) return classes;
      classes = sorted.size();
    }
  }

  static std::size_t count_classes(const std::vector<std::uint32_t>& colors) {
    std::set<std::uint32_t> s(colors.begin(), colors.end());
    return s.size();
  }

  bool transposition_is_automorphism(Element u, Element w) const {
    auto swap = [&](Element x) { return x == u ? w : (x == w ? u : x); };
    for (std::size_t p = 0; p < a_.signature().size(); ++p)
      for (const auto& t : a_.tuples(p)) {
        bool touched = false;
        Tuple s = t;
        for (auto& x : s) {
          if (x == u || x == w) touched = true;
          x = swap(x);
        }
        if (touched && !a_.contains(p, s)) return false;
      }
    return true;
  }

  void search(std::vector<std::uint32_t> colors) {
    const std::size_t n = a_.size();
    // smallest colour that is shared by several elements
    std::vector<std::size_t> count(n + 1, 0);
    for (auto c : colors) ++count[c];
    std::uint32_t target = std::uint32_t(-1);
    for (std::size_t c = 0; c < count.size(); ++c)
      if (count[c] > 1) {
        target = std::uint32_t(c);
        break;
      }
    if (target == std::uint32_t(-1)) {
      leaf(colors);
      return;
    }
    std::vector<Element> cell;
    for (std::size_t v = 0; v < n; ++v)
      if (colors[v] == target) cell.push_back(Element(v));
    // When every member is interchangeable with the first one by a
    // transposition, all branches give the same leaves.
    bool symmetric = true;
    for (std::size_t i = 1; i < cell.size() && symmetric; ++i)
      symmetric = transposition_is_automorphism(cell[0], cell[i]);
    std::size_t branches = symmetric ? 1 : cell.size();
    for (std::size_t i = 0; i < branches; ++i) {
      std::vector<std::uint32_t> c = colors;
      for (std::size_t v = 0; v < n; ++v) c[v] = 2 * c[v] + (v == cell[i] ? 0 : 1);
      refine(c);
      search(std::move(c));
    }
  }

  void leaf(const std::vector<std::uint32_t>& colors) {
    const std::size_t n = a_.size();
    std::vector<Element> order(n);
    for (std::size_t v = 0; v < n; ++v) order[colors[v]] = Element(v);
    std::vector<std::uint32_t> key{std::uint32_t(n)};
    for (std::size_t p = 0; p < a_.signature().size(); ++p) {
      std::vector<Tuple> ts;
      for (const auto& t : a_.tuples(p)) {
        Tuple u = t;
        for (auto& x : u) x = colors[x];
        ts.push_back(std::move(u));
      }
      std::sort(ts.begin(), ts.end());
      key.push_back(std::uint32_t(ts.size()));
      for (const auto& t : ts) key.insert(key.end(), t.begin(), t.end());
    }
    if (!have_best_ || key < best_key_) {
      have_best_ = true;
      best_key_ = std::move(key);
      best_order_ = std::move(order);
    }
  }

  const FiniteStructure& a_;
  std::vector<std::vector<Occurrence>> occ_;
  bool have_best_ = false;
  std::vector<std::uint32_t> best_key_;
  std::vector<Element> best_order_;
};

}  // namespace

CanonicalForm canonical_form(const FiniteStructure& a) { return Canonizer(a).run(); }

FiniteStructure canonical_structure(const FiniteStructure& a) {
  auto cf = canonical_form(a);
  FiniteStructure s = induced(a, cf.order);
  FiniteStructure out(a.signature(), a.size());
  for (std::size_t p = 0; p < a.signature().size(); ++p) out.set_tuples(p, s.tuples(p));
  return out;
}

bool isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.signature() != b.signature() || a.size() != b.size() ||
      a.tuple_count() != b.tuple_count())
    return false;
  return canonical_form(a).key == canonical_form(b).key;
}

void for_each_structure(const Signature& sig, std::size_t n,
                        const std::function<void(const FiniteStructure&)>& f) {
  // all candidate tuples, predicate by predicate
  std::vector<std::pair<std::size_t, Tuple>> slots;
  for (std::size_t p = 0; p < sig.size(); ++p) {
    std::size_t k = sig[p].arity;
    std::size_t total = 1;
    for (std::size_t j = 0; j < k; ++j) total *= n;
    for (std::size_t code = 0; code < total; ++code) {
      Tuple t(k);
      std::size_t c = code;
      for (std::size_t j = k; j-- > 0;) {
        t[j] = Element(c % n);
        c /= n;
      }
      slots.emplace_back(p, std::move(t));
    }
  }
  if (slots.size() > 24) throw SizeGuardExceeded("for_each_structure: more than 2^24 structures");
  const std::uint64_t limit = std::uint64_t(1) << slots.size();
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    FiniteStructure s(sig, n);
    std::vector<std::vector<Tuple>> rels(sig.size());
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) rels[slots[i].first].push_back(slots[i].second);
    for (std::size_t p = 0; p < sig.size(); ++p) s.set_tuples(p, std::move(rels[p]));
    f(s);
  }
}

std::vector<FiniteStructure> structure_corpus(const Signature& sig, std::size_t max_n) {
  std::vector<FiniteStructure> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::map<std::vector<std::uint32_t>, FiniteStructure> seen;
    for_each_structure(sig, n, [&](const FiniteStructure& s) {
      auto cf = canonical_form(s);
      if (seen.count(cf.key)) return;
      FiniteStructure c(sig, n);
      FiniteStructure r = induced(s, cf.order);
      for (std::size_t p = 0; p < sig.size(); ++p) c.set_tuples(p, r.tuples(p));
      seen.emplace(std::move(cf.key), std::move(c));
    });
    for (auto& [k, s] : seen) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace autohom
