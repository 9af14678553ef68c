#pragma once

#include <functional>
#include <vector>

#include "autohom/structures.hpp"

namespace autohom {

// Canonical labelling by colour refinement plus individualisation. Two
// structures over the same signature are isomorphic iff their keys agree.
struct CanonicalForm {
  std::vector<Element> order;  // order[i] = original element placed at position i
  std::vector<std::uint32_t> key;
};

CanonicalForm canonical_form(const FiniteStructure& a);
// Relabelled copy with elements named 0..n-1 in canonical order.
FiniteStructure canonical_structure(const FiniteStructure& a);
bool isomorphic(const FiniteStructure& a, const FiniteStructure& b);

// Calls f on every structure with domain 0..n-1 (labelled, all tuple subsets).
void for_each_structure(const Signature& sig, std::size_t n,
                        const std::function<void(const FiniteStructure&)>& f);

// One representative per isomorphism class, for domain sizes 1..max_n.
// Representatives are canonical structures, sorted by (size, key).
std::vector<FiniteStructure> structure_corpus(const Signature& sig, std::size_t max_n);

}  // namespace autohom
