#pragma once

#include <optional>
#include <vector>

#include "autohom/structures.hpp"

namespace autohom {

// Dynamic bitset over the target domain.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe, bool full = false);

  std::size_t universe() const { return n_; }
  bool test(Element e) const { return (w_[e >> 6] >> (e & 63)) & 1; }
  void set(Element e) { w_[e >> 6] |= std::uint64_t(1) << (e & 63); }
  void reset(Element e) { w_[e >> 6] &= ~(std::uint64_t(1) << (e & 63)); }
  void clear();
  std::size_t count() const;
  bool none() const;
  bool is_singleton() const { return count() == 1; }
  Element first() const;
  std::vector<Element> elements() const;
  bool subset_of(const ElementSet& o) const;
  ElementSet& operator&=(const ElementSet& o);
  ElementSet& operator|=(const ElementSet& o);
  bool operator==(const ElementSet&) const = default;
  bool operator<(const ElementSet& o) const { return w_ < o.w_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// F : A -> P(B), one image set per source element.
struct GuessFunction {
  std::vector<ElementSet> image;

  bool operator==(const GuessFunction&) const = default;
  bool any_empty() const;
  bool all_empty() const;
};

GuessFunction top_guess(const FiniteStructure& a, const FiniteStructure& b);
bool refines(const GuessFunction& f, const GuessFunction& g);  // f below g pointwise

// One synchronous application of the hyperedge consistency operator.
GuessFunction hc_step(const FiniteStructure& a, const FiniteStructure& b, const GuessFunction& f);

struct HcTrace {
  std::vector<GuessFunction> steps;  // steps[n] is the n-th iterate from top
  std::size_t fixpoint_step = 0;     // least n with steps[n] == steps[n+1]
  std::optional<std::size_t> first_empty_step;
  std::optional<std::size_t> all_empty_step;

  const GuessFunction& fixpoint() const { return steps[fixpoint_step]; }
};

HcTrace hc_fixpoint(const FiniteStructure& a, const FiniteStructure& b);

// Worklist propagation to the greatest fixpoint below f, starting from the
// tuples touching `dirty` (all tuples when dirty is empty). Returns false as
// soon as an image set becomes empty.
class Propagator {
 public:
  Propagator(const FiniteStructure& a, const FiniteStructure& b);
  bool run(GuessFunction& f, const std::vector<Element>& dirty = {}) const;

  const FiniteStructure& source() const { return a_; }
  const FiniteStructure& target() const { return b_; }
  // tuples (pred, index) of the source that contain e
  const std::vector<std::pair<std::size_t, std::size_t>>& occurrences(Element e) const {
    return occ_[e];
  }

 private:
  const FiniteStructure& a_;
  const FiniteStructure& b_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> occ_;
};

// allowed[i] = { s_i : s in R(B), s_l in F(t_l) for l != i }
std::vector<ElementSet> supports(const FiniteStructure& b, std::size_t pred, const Tuple& t,
                                 const GuessFunction& f);

}  // namespace autohom
