// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "autohom/autohom.hpp"
#include "autohom/canonical.hpp"
#include "autohom/duality.hpp"
#include "autohom/homset.hpp"
#include "oracles.hpp"

using namespace autohom;

namespace {

// Runtime limits in seconds.
constexpr double kLimitTraces = 1;
constexpr double kLimitDuality = 30;
constexpr double kLimitObstructions = 300;
constexpr double kLimitOracle = 300;
constexpr double kLimitInfinite = 60;  // per procedure
constexpr double kLimitCurrying = 600;
constexpr double kLimitGadget = 600;

// Round bound for T2: the largest round count measured over the corpus
// (P3-free sources stabilize after 2 rounds, P3 itself empties at round 2).
constexpr std::size_t kT2RoundBound = 2;
// Allowed deviation of the P2 zigzag rounds from n.
constexpr std::size_t kZigzagSlack = 2;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failures with a short reason each.
struct Checker {
  Outcome out;
  void expect(bool cond, const std::string& what) {
    if (!cond && out.ok) out.detail = what;
    out.ok = out.ok && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const { return seconds_since(t0); }
};

bool contains_iso(const std::vector<FiniteStructure>& list, const FiniteStructure& s) {
  for (const auto& d : list)
    if (isomorphic(d, s)) return true;
  return false;
}

Mask mask_of(const ElementSet& s) {
  Mask m = 0;
  for (Element b : s.elements()) m |= Mask(1) << b;
  return m;
}

Outcome traces() {
  Checker c;
  Timer t;
  auto t2 = transitive_tournament(2);
  for (int n = 1; n <= 10; ++n) {
    auto tr = hc_fixpoint(zigzag(n), t2);
    c.expect(tr.fixpoint_step == 2, "zigzag " + std::to_string(n) + " vs T2: fixpoint at step " +
                                        std::to_string(tr.fixpoint_step));
    c.expect(!tr.fixpoint().any_empty(), "zigzag " + std::to_string(n) + " vs T2: empty image set");
  }
  auto tr = hc_fixpoint(zigzag(5), path(2));
  c.expect(tr.first_empty_step == std::optional<std::size_t>(7), "zigzag 5 vs P2: first empty step");
  c.expect(tr.all_empty_step == std::optional<std::size_t>(13), "zigzag 5 vs P2: all-empty step");
  double s = t.elapsed();
  c.expect(s < kLimitTraces, "too slow");
  std::ostringstream d;
  d << "zigzag 1..10 vs T2 fixpoint at step 2; zigzag 5 vs P2 first empty " << tr.first_empty_step.value_or(0)
    << ", all empty " << tr.all_empty_step.value_or(0) << "; " << s << " s";
  if (c.out.ok) c.out.detail = d.str();
  return c.out;
}

Outcome duality() {
  Checker c;
  Timer t;
  c.expect(has_tree_duality(path(2)), "tree duality of P2");
  c.expect(feder_vardi(path(2)).tuple_count() == 3, "FV(P2) edge count");
  c.expect(!has_tree_duality(clique(2)), "tree duality of K2");
  for (int k = 1; k <= 3; ++k)
    c.expect(has_finite_duality(transitive_tournament(k)) == Tristate::Yes, "finite duality of T" + std::to_string(k));
  c.expect(has_finite_duality(path(2)) == Tristate::No, "finite duality of P2");
  Signature unary({{"P", 1}, {"Q", 1}});
  FiniteStructure u1(unary, 1), u2(unary, 3);
  u2.add_tuple(0, {0});
  u2.add_tuple(1, {2});
  c.expect(has_finite_duality(u1) == Tristate::Yes && has_finite_duality(u2) == Tristate::Yes,
           "finite duality of unary targets");
  double s = t.elapsed();
  c.expect(s < kLimitDuality, "too slow");
  if (c.out.ok) c.out.detail = "P2 tree yes (FV 3 edges), K2 no; T1-T3 finite yes, P2 no, unary yes; " + std::to_string(s) + " s";
  return c.out;
}

Outcome obstructions() {
  Checker c;
  Timer t;
  auto t2 = transitive_tournament(2);
  auto obs = critical_obstructions(t2, 4, 4);
  c.expect(contains_iso(obs, path(3)), "P3 missing from the T2 obstructions");
  auto corpus = structure_corpus(Signature::graph(), 4);
  c.expect(corpus.size() == 3160, "corpus size");
  c.expect(verify_dual(t2, {path(3)}, corpus).ok, "{P3} is not a dual of T2 on the corpus");
  auto p2obs = critical_obstructions(path(2), 8, 8);
  c.expect(contains_iso(p2obs, zigzag(0)), "zigzag 0 missing from the P2 obstructions");
  c.expect(contains_iso(p2obs, zigzag(1)), "zigzag 1 missing from the P2 obstructions");
  double s = t.elapsed();
  c.expect(s < kLimitObstructions, "too slow");
  if (c.out.ok)
    c.out.detail = std::to_string(obs.size()) + " T2 obstructions incl. P3; dual verified on 3160 graphs; " +
                   std::to_string(p2obs.size()) + " P2 obstructions incl. Z0, Z1; " + std::to_string(s) + " s";
  return c.out;
}

Outcome oracle_equivalence() {
  Checker c;
  Timer t;
  auto corpus = structure_corpus(Signature::graph(), 4);
  std::size_t runs = 0;
  for (const auto& b : {transitive_tournament(2), path(2)})
    for (const auto& a : corpus) {
      auto p = from_finite(a);
      auto r = hc_auto(p, b, 64, true);
      auto tr = hc_fixpoint(a, b);
      std::size_t expect = tr.first_empty_step ? *tr.first_empty_step : tr.fixpoint_step;
      bool ok = r.rounds == expect && r.trace.size() == expect + 1 &&
                (r.status == HcAutoStatus::NoHom) == tr.first_empty_step.has_value();
      for (std::size_t i = 0; ok && i <= expect; ++i)
        for (Element x = 0; x < a.size(); ++x) ok = ok && r.trace[i].classify(finite_word(x)) == mask_of(tr.steps[i].image[x]);
      c.expect(ok, "hc_auto differs from hc_fixpoint on a " + std::to_string(a.size()) + "-vertex source");
      ++runs;
    }
  auto t2 = transitive_tournament(2);
  for (const auto& a : corpus)
    c.expect(find_hom(a, t2).found() == hom_with_dual(from_finite(a), {path(3)}), "find_hom vs hom_with_dual");
  double s = t.elapsed();
  c.expect(s < kLimitOracle, "too slow");
  if (c.out.ok)
    c.out.detail = std::to_string(runs) + " hc_auto runs match the finite traces; dual test agrees on " +
                   std::to_string(corpus.size()) + " graphs; " + std::to_string(s) + " s";
  return c.out;
}

Outcome infinite() {
  Checker c;
  std::ostringstream d;
  auto t2 = transitive_tournament(2);
  {
    Timer t;
    auto r = hc_auto(binary_tree(), t2);
    c.expect(r.status == HcAutoStatus::NoHom, "hc_auto(binary tree, T2) is not NoHom");
    c.expect(t.elapsed() < kLimitInfinite, "hc_auto too slow");
  }
  {
    Timer t;
    auto r = refute_hom_semi(binary_tree(), t2);
    c.expect(r.status == SemiStatus::Found && isomorphic(r.obstruction, path(3)), "refute did not return P3");
    c.expect(t.elapsed() < kLimitInfinite, "refute too slow");
  }
  {
    Timer t;
    auto m = infinite_matching();
    auto t1 = transitive_tournament(1);
    auto r = synth_regular_hom(m, t1);
    c.expect(r.status == SynthStatus::Found && check_regular_hom(m, t1, r.coloring).ok(), "matching -> T1 synthesis");
    c.expect(t.elapsed() < kLimitInfinite, "synthesis too slow");
  }
  {
    Timer t;
    auto bt = binary_tree();
    auto r = enumerate_reghom_semi(bt, clique(2), 10000);
    bool ok = r.status == SemiStatus::Found && check_regular_hom(bt, clique(2), r.coloring).ok();
    // parity style: the classes are the even and the odd length words
    std::vector<Word> even{{}, {0, 1}, {1, 1, 0, 0}}, odd{{0}, {1, 0, 1}};
    for (const auto& w : even) ok = ok && accepts(r.coloring.classes[0], {w}) != accepts(r.coloring.classes[0], {odd[0]});
    for (const auto& w : odd) ok = ok && accepts(r.coloring.classes[0], {w}) == accepts(r.coloring.classes[0], {odd[0]});
    c.expect(ok, "no parity coloring within the budget");
    c.expect(t.elapsed() < kLimitInfinite, "enumeration too slow");
    d << "enumeration found a " << r.states << "-state coloring after " << r.candidates << " candidates";
  }
  if (c.out.ok) c.out.detail = "tree -> T2 NoHom, refuted by P3; matching -> T1 synthesized and checked; " + d.str();
  return c.out;
}

Outcome currying() {
  Checker c;
  Timer t;
  auto corpus = structure_corpus(Signature::graph(), 3);
  std::size_t triples = 0;
  for (const auto& b : corpus)
    for (const auto& cc : corpus) {
      auto pw = power(cc, b, kDefaultHomGuard, PowerDomain::AllMaps);
      for (const auto& a : corpus) {
        ++triples;
        c.expect(count_homs(product(a, b), cc) == count_homs(a, pw), "counts differ");
      }
    }
  // independent spot check of the library counts
  oracle::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto& a = corpus[rng.below(corpus.size())];
    const auto& b = corpus[rng.below(corpus.size())];
    const auto& cc = corpus[rng.below(corpus.size())];
    c.expect(oracle::count_homs(product(a, b), cc) == count_homs(a, power(cc, b, kDefaultHomGuard, PowerDomain::AllMaps)), "oracle count differs");
  }
  double s = t.elapsed();
  c.expect(s < kLimitCurrying, "too slow");
  if (c.out.ok) c.out.detail = std::to_string(triples) + " triples; " + std::to_string(s) + " s";
  return c.out;
}

Outcome gadget() {
  Checker c;
  Timer t;
  auto p2 = path(2);
  auto mp2 = mark_target(p2);
  std::size_t instances = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::uint32_t bits = 0; bits < (1u << (n * n)); ++bits) {
      auto g = oracle::graph_from_bits(n, bits);
      auto linked = link_gadget(from_finite(g), Signature::graph());
      for (Element s = 0; s < n; ++s)
        for (Element tt = 0; tt < n; ++tt) {
          auto inst = materialize(undec_gadget(linked, p2, finite_word(s), finite_word(tt)));
          bool maps = find_hom(inst, mp2).found();
          c.expect(maps == oracle::hom_exists(inst, mp2), "find_hom disagrees with backtracking");
          c.expect(maps == !oracle::connected(g, s, tt), "gadget answer differs from connectivity");
          ++instances;
        }
    }
  double s = t.elapsed();
  c.expect(s < kLimitGadget, "too slow");
  if (c.out.ok) c.out.detail = std::to_string(instances) + " (graph, s, t) instances; " + std::to_string(s) + " s";
  return c.out;
}

Outcome convergence() {
  Checker c;
  auto t2 = transitive_tournament(2);
  std::vector<Presentation> sources;
  for (const auto& a : structure_corpus(Signature::graph(), 4)) sources.push_back(from_finite(a));
  for (const auto& name : builtin_names()) sources.push_back(builtin(name));
  std::size_t worst = 0;
  for (const auto& p : sources) {
    auto r = hc_auto(p, t2);
    c.expect(r.status != HcAutoStatus::BudgetExhausted, "no verdict for T2");
    worst = std::max(worst, r.rounds);
  }
  c.expect(worst <= kT2RoundBound, "T2 rounds exceed the bound: " + std::to_string(worst));

  std::ostringstream d;
  d << "T2: at most " << worst << " rounds on " << sources.size() << " sources; P2 zigzag rounds";
  std::size_t prev = 0;
  for (int n = 0; n <= 12; ++n) {
    auto r = hc_auto(from_finite(zigzag(n)), path(2));
    auto tr = hc_fixpoint(zigzag(n), path(2));
    c.expect(r.status == HcAutoStatus::NoHom, "zigzag " + std::to_string(n) + " vs P2 not refuted");
    c.expect(tr.first_empty_step == std::optional<std::size_t>(r.rounds), "automatic and finite rounds differ");
    std::size_t diff = r.rounds > std::size_t(n) ? r.rounds - n : n - r.rounds;
    c.expect(diff <= kZigzagSlack, "zigzag " + std::to_string(n) + " rounds " + std::to_string(r.rounds) + " not n + O(1)");
    c.expect(n == 0 || r.rounds > prev, "rounds do not grow with n");
    prev = r.rounds;
    d << (n == 0 ? " " : ",") << r.rounds;
  }
  d << " for n = 0..12";
  if (c.out.ok) c.out.detail = d.str();
  return c.out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"paper traces", traces},
      {"duality classification", duality},
      {"obstruction recovery", obstructions},
      {"oracle equivalence", oracle_equivalence},
      {"infinite-structure verdicts", infinite},
      {"currying bijection", currying},
      {"gadget soundness", gadget},
      {"uniform convergence", convergence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed;
}
