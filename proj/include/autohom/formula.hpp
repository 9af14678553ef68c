#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "autohom/automata.hpp"

namespace autohom {

struct Formula {
  enum class Kind { True, False, Atom, Equal, LastLetter, EqualLength, Prefix, Not, And, Or, Implies, Exists, Forall };

  Kind kind = Kind::True;
  std::string name;               // relation symbol, letter of LastLetter, or bound variable
  std::vector<std::string> args;  // variable arguments of atomic formulas
  std::vector<Formula> children;

  static Formula truth() { return {Kind::True, {}, {}, {}}; }
  static Formula falsity() { return {Kind::False, {}, {}, {}}; }
  static Formula atom(std::string rel, std::vector<std::string> vars) {
    return {Kind::Atom, std::move(rel), std::move(vars), {}};
  }
  static Formula equal(std::string x, std::string y) { return {Kind::Equal, {}, {std::move(x), std::move(y)}, {}}; }
  static Formula last_letter(std::string letter, std::string x) {
    return {Kind::LastLetter, std::move(letter), {std::move(x)}, {}};
  }
  static Formula equal_length(std::string x, std::string y) {
    return {Kind::EqualLength, {}, {std::move(x), std::move(y)}, {}};
  }
  static Formula prefix(std::string x, std::string y) { return {Kind::Prefix, {}, {std::move(x), std::move(y)}, {}}; }
  static Formula negate(Formula f) { return {Kind::Not, {}, {}, {std::move(f)}}; }
  static Formula conj(std::vector<Formula> fs) { return {Kind::And, {}, {}, std::move(fs)}; }
  static Formula disj(std::vector<Formula> fs) { return {Kind::Or, {}, {}, std::move(fs)}; }
  static Formula implies(Formula a, Formula b) { return {Kind::Implies, {}, {}, {std::move(a), std::move(b)}}; }
  static Formula exists(std::string x, Formula f) { return {Kind::Exists, std::move(x), {}, {std::move(f)}}; }
  static Formula forall(std::string x, Formula f) { return {Kind::Forall, std::move(x), {}, {std::move(f)}}; }

  bool operator==(const Formula&) const = default;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

// Prefix s-expressions, e.g. (exists y (and (E x y) (not (= x y)))).
// Comments run from ';' to the end of the line.
Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

// Free variables in order of first occurrence.
std::vector<std::string> free_variables(const Formula& f);

using Environment = std::map<std::string, SyncAutomaton>;

// Automaton over the listed free variables (which must include every free
// variable of f) recognising exactly the satisfying tuples over the alphabet.
SyncAutomaton compile(const Formula& f, const Alphabet& alphabet, const Environment& env,
                      const std::vector<std::string>& free_order);
SyncAutomaton compile(const Formula& f, const Alphabet& alphabet, const Environment& env);
// Truth value of a sentence.
bool evaluate_sentence(const Formula& f, const Alphabet& alphabet, const Environment& env);

}  // namespace autohom
