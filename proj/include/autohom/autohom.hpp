#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "autohom/duality.hpp"
#include "autohom/presentations.hpp"

namespace autohom {

// Subset of the target as a bitmask; targets are limited to 63 elements so
// that kOutside never collides with a subset.
using Mask = std::uint64_t;
inline constexpr Mask kOutside = ~Mask(0);
inline constexpr std::size_t kMaxTarget = 63;

Mask to_mask(const ElementSet& s);
ElementSet from_mask(Mask m, std::size_t universe);
std::string mask_to_string(Mask m, const FiniteStructure& b);

// Complete DFA over the presentation alphabet whose states carry a subset of
// the target; words outside the domain are labeled kOutside.
struct Classifier {
  Alphabet alphabet;
  std::size_t targets = 0;
  std::vector<std::vector<State>> next;  // next[state][symbol]
  std::vector<Mask> label;
  State initial = 0;

  std::size_t num_states() const { return label.size(); }
  Mask classify(const Word& w) const;
  // Domain words labeled exactly y.
  SyncAutomaton level_set(Mask y) const;
  // Labels of reachable states other than kOutside, sorted.
  std::vector<Mask> labels() const;

  bool operator==(const Classifier&) const = default;
};

// Minimal Moore machine, states numbered breadth-first in symbol order.
Classifier canonical(const Classifier& c);

Classifier top_classifier(const Presentation& p, const FiniteStructure& b);
Classifier hc_step_auto(const Presentation& p, const FiniteStructure& b, const Classifier& f);

// Memoized facts about a finite target.
struct TargetAnalysis {
  TreeDuality tree;
  Tristate finite = Tristate::Unknown;
};
const TargetAnalysis& analyze_target(const FiniteStructure& b);

enum class HcAutoStatus { NoHom, Fixpoint, BudgetExhausted };

struct HcAutoResult {
  HcAutoStatus status = HcAutoStatus::BudgetExhausted;
  // Number of applications of the operator computed; on NoHom this is the
  // first step with an empty label, on Fixpoint the least n with
  // step n == step n+1.
  std::size_t rounds = 0;
  std::optional<Word> witness;         // a domain word labeled with the empty set
  Classifier classifier;               // last computed step
  std::vector<Classifier> trace;       // steps 0..rounds when requested
  bool all_nonempty = false;           // for Fixpoint
  bool sound = false;                  // Fixpoint with all labels nonempty decides a hom (tree duality)
  Tristate terminates = Tristate::Unknown;  // finite duality of the target
};

HcAutoResult hc_auto(const Presentation& p, const FiniteStructure& b, std::size_t max_rounds = 64,
                     bool keep_trace = false, bool analyze = true);

// Partition of the domain into one class language per target element.
struct RegularColoring {
  std::vector<SyncAutomaton> classes;  // classes[c] for target element c
};

// Moore machine labeling each word with the set of classes containing it.
Classifier coloring_machine(const RegularColoring& c, const Alphabet& alphabet);

enum class SynthStatus { Found, NoHom, Unknown };

struct SynthResult {
  SynthStatus status = SynthStatus::Unknown;
  RegularColoring coloring;
  std::optional<Word> witness;  // for NoHom
  std::size_t rounds = 0;
  std::string note;
};

SynthResult synth_regular_hom(const Presentation& p, const FiniteStructure& b, std::size_t max_rounds = 64);

enum class ColoringViolation { None, WrongShape, OutsideDomain, Overlap, Uncovered, Edge };

struct ColoringCheck {
  ColoringViolation violation = ColoringViolation::None;
  std::string message;
  std::string predicate;        // for Edge
  Tuple pattern;                // target tuple missing from the relation, for Edge
  std::vector<Element> classes; // the overlapping classes, for Overlap
  WordTuple witness;            // shortest witness

  bool ok() const { return violation == ColoringViolation::None; }
};

ColoringCheck check_regular_hom(const Presentation& p, const FiniteStructure& b, const RegularColoring& c);

enum class SemiStatus { Found, Unknown };

struct RefuteResult {
  SemiStatus status = SemiStatus::Unknown;  // Found means refuted
  FiniteStructure obstruction;
  std::size_t tested = 0;
  std::string note;
};

// Tries critical obstructions of b by increasing size; budget bounds the
// number of model-checked candidates, max_size the obstruction size.
RefuteResult refute_hom_semi(const Presentation& p, const FiniteStructure& b, std::size_t budget = 1000,
                             std::size_t max_size = 8);

struct EnumResult {
  SemiStatus status = SemiStatus::Unknown;
  RegularColoring coloring;
  std::size_t candidates = 0;
  std::size_t states = 0;  // size of the Moore machine found
};

// Enumerates Moore machines over the alphabet with outputs in b, by number of
// states and then lexicographically by transition table and outputs.
EnumResult enumerate_reghom_semi(const Presentation& p, const FiniteStructure& b, std::size_t budget = 10000);

}  // namespace autohom
