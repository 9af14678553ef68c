#pragma once

#include <optional>
#include <vector>

#include "autohom/consistency.hpp"
#include "autohom/homset.hpp"
#include "autohom/structures.hpp"

namespace autohom {

// Elements are the nonempty subsets of b, ordered by bitmask value
// (subset {b_i : bit i set}), named like "{0,2}".
FiniteStructure feder_vardi(const FiniteStructure& b);
// Subset of b represented by element e of feder_vardi(b).
ElementSet fv_subset(const FiniteStructure& b, Element e);
Element fv_element(const ElementSet& s);

inline constexpr std::size_t kFederVardiMaxTarget = 16;

struct TreeDuality {
  bool holds = false;
  Assignment retraction;  // feder_vardi(b) -> b when holds
};

TreeDuality tree_duality(const FiniteStructure& b);
bool has_tree_duality(const FiniteStructure& b);

struct HcDecision {
  bool all_nonempty = false;
  bool sound = false;  // target has tree duality, so the answer decides a -> b
  HcTrace trace;
};

HcDecision hc_decides(const FiniteStructure& a, const FiniteStructure& b);

struct LinkedAnalysis {
  std::vector<std::vector<bool>> one_linked;
  std::vector<std::vector<bool>> linked;
  std::vector<std::vector<Element>> classes;  // over reflexive elements
};

LinkedAnalysis linked_analysis(const FiniteStructure& b);

enum class Tristate { Yes, No, Unknown };

struct FiniteDuality {
  Tristate verdict = Tristate::Unknown;
  std::size_t power_size = 0;  // elements of b^(b^2), 0 when not built
  std::string note;
};

FiniteDuality finite_duality(const FiniteStructure& b, std::uint64_t guard = kDefaultHomGuard);
Tristate has_finite_duality(const FiniteStructure& b, std::uint64_t guard = kDefaultHomGuard);

inline constexpr std::uint64_t kObstructionSearchGuard = 2'000'000;

// Connected critical obstructions up to the bounds, one per isomorphism
// class, sorted by (vertices, tuples, canonical key).
std::vector<FiniteStructure> critical_obstructions(const FiniteStructure& b, std::size_t max_vertices,
                                                   std::size_t max_tuples,
                                                   std::uint64_t guard = kObstructionSearchGuard);
bool is_critical_obstruction(const FiniteStructure& d, const FiniteStructure& b);

struct DualCheck {
  bool ok = true;
  std::optional<std::size_t> counterexample;  // index into the corpus
};

DualCheck verify_dual(const FiniteStructure& b, const std::vector<FiniteStructure>& duals,
                      const std::vector<FiniteStructure>& corpus);

std::vector<FiniteStructure> unary_dual(const FiniteStructure& b);

}  // namespace autohom
