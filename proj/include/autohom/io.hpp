#pragma once

#include <string>
#include <string_view>

#include "autohom/autohom.hpp"
#include "autohom/formula.hpp"
#include "autohom/presentations.hpp"
#include "autohom/structures.hpp"

namespace autohom {

// Text formats. Blank lines and lines starting with '#' are ignored.
//
// Structure:
//   signature E/2 P/1
//   domain a b c
//   E a b
//
// Automaton (the alphabet line may be omitted when the alphabet is inherited
// from an enclosing presentation; unary letters may be written bare):
//   arity 2
//   alphabet 0 1
//   state q0 initial
//   state q1 accepting
//   trans q0 (0,#) q1
//
// Classifier: an arity-1 automaton whose states carry `label {x,y}` with
// target element names; unlabeled states classify words outside the domain.
// Coloring: the same with singleton labels; class c is the set of words
// ending in a state labeled {c}.
//
// Presentation:
//   signature E/2
//   alphabet 0 1
//   domain {
//     ...automaton lines...
//   }
//   relation E @edges.aut
// A block is either inline between braces or a path after '@', resolved
// relative to base_dir.

FiniteStructure parse_structure(std::string_view text);
std::string format_structure(const FiniteStructure& a);

SyncAutomaton parse_automaton(std::string_view text, const Alphabet* inherited = nullptr);
std::string format_automaton(const SyncAutomaton& a, bool with_alphabet = true);

Presentation parse_presentation(std::string_view text, const std::string& base_dir = ".");
std::string format_presentation(const Presentation& p);

Classifier parse_classifier(std::string_view text, const FiniteStructure& b);
std::string format_classifier(const Classifier& c, const FiniteStructure& b);

RegularColoring parse_coloring(std::string_view text, const FiniteStructure& b);
std::string format_coloring(const RegularColoring& c, const FiniteStructure& b);

// Reads a file, or standard input for "-".
std::string read_input(const std::string& path);

}  // namespace autohom
