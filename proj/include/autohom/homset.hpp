#pragma once

#include <cstdint>
#include <vector>

#include "autohom/structures.hpp"

namespace autohom {

// assignment[x] = image of source element x
using Assignment = std::vector<Element>;

struct HomMap {
  FiniteStructure source;
  FiniteStructure target;
  Assignment assignment;
};

bool is_hom(const FiniteStructure& a, const FiniteStructure& b, const Assignment& f);

enum class HomStatus { Found, NoHom, Unknown };

struct HomResult {
  HomStatus status = HomStatus::Unknown;
  Assignment map;           // valid when Found
  std::uint64_t nodes = 0;  // search nodes visited

  bool found() const { return status == HomStatus::Found; }
};

// budget = maximum number of search nodes, 0 for unlimited. Exhausting the
// budget yields Unknown, never NoHom.
HomResult find_hom(const FiniteStructure& a, const FiniteStructure& b, std::uint64_t budget = 0);
bool hom_exists(const FiniteStructure& a, const FiniteStructure& b);

inline constexpr std::uint64_t kDefaultHomGuard = 1'000'000;

// All homomorphisms in lexicographic order of the assignment vector.
std::vector<Assignment> enumerate_homs(const FiniteStructure& a, const FiniteStructure& b,
                                       std::uint64_t guard = kDefaultHomGuard);
std::uint64_t count_homs(const FiniteStructure& a, const FiniteStructure& b);

// Over homomorphisms b -> c the structure c^b is the one used for finite
// duality. Currying needs the classical exponential over all maps: a map
// a x b -> c sends a loopless element of a to an arbitrary map b -> c.
enum class PowerDomain { Homomorphisms, AllMaps };

// Elements in lexicographic order of their image lists, named like "[0,2,1]".
struct PowerStructure {
  FiniteStructure structure;
  std::vector<Assignment> maps;

  // Index of the map h : b -> c; throws when h is not an element.
  std::size_t index_of(const Assignment& h) const;
};

PowerStructure power_structure(const FiniteStructure& c, const FiniteStructure& b,
                               std::uint64_t guard = kDefaultHomGuard,
                               PowerDomain domain = PowerDomain::Homomorphisms);
FiniteStructure power(const FiniteStructure& c, const FiniteStructure& b,
                      std::uint64_t guard = kDefaultHomGuard,
                      PowerDomain domain = PowerDomain::Homomorphisms);

// f : a x b -> c  <->  F : a -> c^b, a bijection when pw ranges over all
// maps; over homomorphisms curry throws when some F(x) is not one.
Assignment curry(const FiniteStructure& a, const FiniteStructure& b, const FiniteStructure& c,
                 const PowerStructure& pw, const Assignment& f);
Assignment uncurry(const FiniteStructure& a, const FiniteStructure& b, const FiniteStructure& c,
                   const PowerStructure& pw, const Assignment& big_f);

// Retraction search bound for the canonical core.
inline constexpr std::uint64_t kCoreSubsetGuard = 100'000;

struct CoreResult {
  FiniteStructure core;
  std::vector<Element> kept;  // elements of the input forming the core
  Assignment retraction;      // a -> core, identity on kept
};

CoreResult core_of(const FiniteStructure& a);
FiniteStructure core(const FiniteStructure& a);
bool is_core(const FiniteStructure& a);
bool is_rigid(const FiniteStructure& a);

}  // namespace autohom
