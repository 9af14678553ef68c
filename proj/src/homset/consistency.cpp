#include "autohom/consistency.hpp"

#include <bit>
#include <deque>

namespace autohom {

ElementSet::ElementSet(std::size_t universe, bool full) : n_(universe), w_((universe + 63) / 64, 0) {
  if (full) {
    for (std::size_t i = 0; i < universe / 64; ++i) w_[i] = ~std::uint64_t(0);
    if (universe % 64) w_.back() = (std::uint64_t(1) << (universe % 64)) - 1;
  }
}

void ElementSet::clear() {
  for (auto& w : w_) w = 0;
}

std::size_t ElementSet::count() const {
  std::size_t c = 0;
  for (auto w : w_) c += std::size_t(std::popcount(w));
  return c;
}

bool ElementSet::none() const {
  for (auto w : w_)
    if (w) return false;
  return true;
}

Element ElementSet::first() const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i]) return Element(i * 64 + std::size_t(std::countr_zero(w_[i])));
  throw ArgumentError("first() of an empty set");
}

std::vector<Element> ElementSet::elements() const {
  std::vector<Element> out;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    auto w = w_[i];
    while (w) {
      out.push_back(Element(i * 64 + std::size_t(std::countr_zero(w))));
      w &= w - 1;
    }
  }
  return out;
}

bool ElementSet::subset_of(const ElementSet& o) const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i] & ~o.w_[i]) return false;
  return true;
}

ElementSet& ElementSet::operator&=(const ElementSet& o) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  return *this;
}

ElementSet& ElementSet::operator|=(const ElementSet& o) {
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  return *this;
}

bool GuessFunction::any_empty() const {
  for (const auto& s : image)
    if (s.none()) return true;
  return false;
}

bool GuessFunction::all_empty() const {
  for (const auto& s : image)
    if (!s.none()) return false;
  return true;
}

GuessFunction top_guess(const FiniteStructure& a, const FiniteStructure& b) {
  return {std::vector<ElementSet>(a.size(), ElementSet(b.size(), true))};
}

bool refines(const GuessFunction& f, const GuessFunction& g) {
  if (f.image.size() != g.image.size()) return false;
  for (std::size_t i = 0; i < f.image.size(); ++i)
    if (!f.image[i].subset_of(g.image[i])) return false;
  return true;
}

std::vector<ElementSet> supports(const FiniteStructure& b, std::size_t pred, const Tuple& t,
                                 const GuessFunction& f) {
  const std::size_t k = t.size();
  std::vector<ElementSet> allowed(k, ElementSet(b.size()));
  for (const auto& s : b.tuples(pred)) {
    // number of coordinates where s leaves the current images
    std::size_t misses = 0, where = 0;
    for (std::size_t l = 0; l < k && misses < 2; ++l)
      if (!f.image[t[l]].test(s[l])) {
        ++misses;
        where = l;
      }
    if (misses == 0) {
      for (std::size_t i = 0; i < k; ++i) allowed[i].set(s[i]);
    } else if (misses == 1) {
      allowed[where].set(s[where]);
    }
  }
  return allowed;
}

GuessFunction hc_step(const FiniteStructure& a, const FiniteStructure& b, const GuessFunction& f) {
  GuessFunction g = f;
  for (std::size_t p = 0; p < a.signature().size(); ++p)
    for (const auto& t : a.tuples(p)) {
      auto allowed = supports(b, p, t, f);
      for (std::size_t i = 0; i < t.size(); ++i) g.image[t[i]] &= allowed[i];
    }
  return g;
}

HcTrace hc_fixpoint(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.signature() != b.signature()) throw SignatureMismatch("hc_fixpoint: signatures differ");
  HcTrace tr;
  tr.steps.push_back(top_guess(a, b));
  for (;;) {
    const std::size_t n = tr.steps.size() - 1;
    const auto& cur = tr.steps.back();
    if (!tr.first_empty_step && cur.any_empty() && a.size() > 0) tr.first_empty_step = n;
    if (!tr.all_empty_step && cur.all_empty() && a.size() > 0) tr.all_empty_step = n;
    GuessFunction next = hc_step(a, b, cur);
    if (next == cur) {
      tr.fixpoint_step = n;
      return tr;
    }
    tr.steps.push_back(std::move(next));
  }
}

Propagator::Propagator(const FiniteStructure& a, const FiniteStructure& b)
    : a_(a), b_(b), occ_(a.size()) {
  if (a.signature() != b.signature()) throw SignatureMismatch("signatures differ");
  for (std::size_t p = 0; p < a.signature().size(); ++p)
    for (std::size_t i = 0; i < a.tuples(p).size(); ++i) {
      const auto& t = a.tuples(p)[i];
      for (std::size_t j = 0; j < t.size(); ++j) {
        bool dup = false;
        for (std::size_t l = 0; l < j; ++l) dup = dup || t[l] == t[j];
        if (!dup) occ_[t[j]].emplace_back(p, i);
      }
    }
}

bool Propagator::run(GuessFunction& f, const std::vector<Element>& dirty) const {
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  std::vector<std::vector<bool>> queued(a_.signature().size());
  for (std::size_t p = 0; p < queued.size(); ++p) queued[p].assign(a_.tuples(p).size(), false);
  auto push = [&](std::pair<std::size_t, std::size_t> h) {
    if (!queued[h.first][h.second]) {
      queued[h.first][h.second] = true;
      queue.push_back(h);
    }
  };
  if (dirty.empty()) {
    for (std::size_t p = 0; p < queued.size(); ++p)
      for (std::size_t i = 0; i < queued[p].size(); ++i) push({p, i});
  } else {
    for (Element e : dirty)
      for (auto h : occ_[e]) push(h);
  }
  while (!queue.empty()) {
    auto [p, i] = queue.front();
    queue.pop_front();
    queued[p][i] = false;
    const Tuple& t = a_.tuples(p)[i];
    auto allowed = supports(b_, p, t, f);
    for (std::size_t j = 0; j < t.size(); ++j) {
      ElementSet before = f.image[t[j]];
      f.image[t[j]] &= allowed[j];
      if (f.image[t[j]] == before) continue;
      if (f.image[t[j]].none()) return false;
      for (auto h : occ_[t[j]]) push(h);
    }
  }
  return true;
}

}  // namespace autohom
