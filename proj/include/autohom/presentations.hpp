#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "autohom/automata.hpp"
#include "autohom/formula.hpp"
#include "autohom/structures.hpp"

namespace autohom {

// Injective automatic presentation: a word accepted by the domain automaton is
// an element, and distinct words are distinct elements.
struct Presentation {
  Signature signature;
  Alphabet alphabet;
  SyncAutomaton domain;                  // arity 1
  std::vector<SyncAutomaton> relations;  // parallel to signature

  const SyncAutomaton& relation(std::string_view name) const;
  bool operator==(const Presentation&) const = default;
};

struct Violation {
  std::string relation;  // empty for problems with the domain or the alphabet
  std::string message;
};

std::vector<Violation> validate(const Presentation& p);
// Throws ArgumentError listing every violation.
void require_valid(const Presentation& p);

// Domain language dom^k as an arity-k automaton.
SyncAutomaton domain_power(const Presentation& p, std::size_t k);

// Element i becomes the word a^i over {a, b}.
Presentation from_finite(const FiniteStructure& a);
Word finite_word(Element i);

// Finite structure presented by p, elements in length-lexicographic order and
// named by their words. Throws when the domain is infinite or too large.
FiniteStructure materialize(const Presentation& p, std::size_t max_elements = 4096);

// Pair alphabet of two alphabets with m and n symbols: symbol (x, y) with
// x <= m, y <= n, (x, y) != (m, n) has code x (n+1) + y, so the pad of the
// pair alphabet is (pad, pad). Names are <x|y>, with pads left empty.
Alphabet pair_alphabet(const Alphabet& a, const Alphabet& b);
Word pair_word(const Word& u, const Word& v, std::size_t m, std::size_t n);
Presentation product_presentation(const Presentation& p, const Presentation& q);

// Same domain as g; every R of sig holds exactly on the tuples over {u, v}
// for u, v joined by an edge of g in either direction.
Presentation link_gadget(const Presentation& g, const Signature& sig);

// a x (b x b) over the signature of marked(b), with P_<b0> holding at
// (s, b0, y) and (t, y, b0) for every y.
Presentation undec_gadget(const Presentation& a, const FiniteStructure& b, const Word& s, const Word& t);

// Automaton of the tuples of domain elements satisfying f, quantifiers
// ranging over the domain. Relation symbols are those of the signature.
SyncAutomaton define(const Presentation& p, const Formula& f, const std::vector<std::string>& free_order);
bool model_check(const Presentation& p, const Formula& sentence);

// Existential positive sentence true exactly in the structures d maps into.
Formula canonical_query(const FiniteStructure& d);
bool exists_hom_from_finite(const Presentation& p, const FiniteStructure& d);
// True iff no member of the dual maps into p.
bool hom_with_dual(const Presentation& p, const std::vector<FiniteStructure>& dual);

// Builtin graphs over {0,1} or {a,b}:
//   binary-tree        words over {0,1}, u -> u0, u -> u1
//   infinite-matching  a^n -> b a^n
//   infinite-path      a^n -> a^(n+1)
Presentation binary_tree();
Presentation infinite_matching();
Presentation infinite_path();
std::vector<std::string> builtin_names();
Presentation builtin(std::string_view name);

}  // namespace autohom
