#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "autohom/structures.hpp"

namespace autohom {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using Letter = std::uint32_t;
using State = std::uint32_t;

inline constexpr State kNoState = ~State(0);

// Finite alphabet; the pad symbol is encoded as size().
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  Symbol pad() const { return Symbol(symbols_.size()); }
  const std::string& symbol(Symbol s) const { return symbols_[s]; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<Symbol> find(std::string_view s) const;

  // Words are written symbol by symbol when every symbol is one character,
  // and dot-separated otherwise. The empty word is written "ε" (or "").
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> symbols_;
};

inline constexpr std::string_view kPadGlyph = "#";
inline constexpr std::string_view kEmptyWordGlyph = "ε";
inline constexpr std::size_t kMaxLetters = std::size_t(1) << 20;
// Transitions a complemented automaton may hold before complement gives up.
inline constexpr std::size_t kMaxComplementEdges = std::size_t(1) << 24;

// A letter of arity k is a column (c_1..c_k) with c_j in [0, m], m = pad,
// encoded as sum c_j (m+1)^(j-1). The all-pad column is excluded and would
// be the largest code, so valid codes are 0 .. (m+1)^k - 2.
std::size_t letter_count(std::size_t symbols, std::size_t arity);
std::vector<Symbol> decode_letter(Letter l, std::size_t symbols, std::size_t arity);
Letter encode_letter(const std::vector<Symbol>& column, std::size_t symbols);

class SyncAutomaton {
 public:
  using Edge = std::pair<Letter, State>;

  SyncAutomaton() = default;
  SyncAutomaton(Alphabet alphabet, std::size_t arity);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t arity() const { return arity_; }
  std::size_t letters() const { return letters_; }
  std::size_t num_states() const { return accepting_.size(); }

  State add_state(bool initial = false, bool accepting = false);
  void set_initial(State s, bool v = true) { initial_[s] = v; }
  void set_accepting(State s, bool v = true) { accepting_[s] = v; }
  bool is_initial(State s) const { return initial_[s]; }
  bool is_accepting(State s) const { return accepting_[s]; }
  std::vector<State> initial_states() const;

  void add_transition(State from, Letter l, State to);
  void add_transition(State from, const std::vector<Symbol>& column, State to);
  // edges sorted by (letter, target), duplicate-free
  const std::vector<Edge>& edges(State s) const { return trans_[s]; }
  void set_edges(State s, std::vector<Edge> edges);
  std::size_t num_transitions() const;

  bool is_deterministic() const;

  bool operator==(const SyncAutomaton&) const = default;

 private:
  Alphabet alphabet_;
  std::size_t arity_ = 0;
  std::size_t letters_ = 0;
  std::vector<bool> initial_;
  std::vector<bool> accepting_;
  std::vector<std::vector<Edge>> trans_;
};

using WordTuple = std::vector<Word>;

std::vector<Letter> convolve(const WordTuple& words, std::size_t symbols);
WordTuple deconvolve(const std::vector<Letter>& conv, std::size_t symbols, std::size_t arity);
bool accepts(const SyncAutomaton& a, const WordTuple& words);

// Language of all pad-consistent convolutions of the given arity.
SyncAutomaton valid_convolutions(const Alphabet& alphabet, std::size_t arity);
// Intersects with the valid convolutions and trims.
SyncAutomaton normalize(const SyncAutomaton& a);
bool pad_consistent(const SyncAutomaton& a);

SyncAutomaton trim(const SyncAutomaton& a);
SyncAutomaton determinize(const SyncAutomaton& a);
// Determinized, minimized, states numbered breadth-first from the initial
// state in letter order, dead state omitted.
SyncAutomaton canonical(const SyncAutomaton& a);

SyncAutomaton intersect(const SyncAutomaton& a, const SyncAutomaton& b);
SyncAutomaton unite(const SyncAutomaton& a, const SyncAutomaton& b);
SyncAutomaton complement(const SyncAutomaton& a);
SyncAutomaton difference(const SyncAutomaton& a, const SyncAutomaton& b);

// keep: strictly increasing coordinates (nonempty); the result lists them in order.
SyncAutomaton project(const SyncAutomaton& a, const std::vector<std::size_t>& keep);
// Existential projection onto an arbitrary (possibly empty) coordinate list.
SyncAutomaton erase_coordinates(const SyncAutomaton& a, const std::vector<std::size_t>& keep);
// Old coordinate j becomes coordinate positions[j] of an arity-n automaton;
// the remaining coordinates are unconstrained.
SyncAutomaton cylindrify(const SyncAutomaton& a, std::size_t n, const std::vector<std::size_t>& positions);

bool is_empty(const SyncAutomaton& a);
bool equivalent(const SyncAutomaton& a, const SyncAutomaton& b);
bool included(const SyncAutomaton& a, const SyncAutomaton& b);
std::optional<WordTuple> shortest_accepted(const SyncAutomaton& a);
bool is_finite_language(const SyncAutomaton& a);
// All accepted tuples of a finite language; throws when the language is infinite.
std::vector<WordTuple> enumerate_language(const SyncAutomaton& a, std::size_t guard = 1'000'000);

// Building blocks over an alphabet.
SyncAutomaton all_words(const Alphabet& alphabet);
SyncAutomaton empty_language(const Alphabet& alphabet, std::size_t arity);
SyncAutomaton equality_relation(const Alphabet& alphabet);
SyncAutomaton equal_length_relation(const Alphabet& alphabet);
SyncAutomaton prefix_relation(const Alphabet& alphabet);
SyncAutomaton successor_relation(const Alphabet& alphabet);
SyncAutomaton last_letter_relation(const Alphabet& alphabet, Symbol a);
SyncAutomaton finite_relation(const Alphabet& alphabet, std::size_t arity,
                              const std::vector<WordTuple>& tuples);

void require_compatible(const SyncAutomaton& a, const SyncAutomaton& b, const char* op);

}  // namespace autohom
