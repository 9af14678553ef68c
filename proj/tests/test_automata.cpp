#include "doctest.h"

#include "autohom/automata.hpp"
#include "autohom/formula.hpp"
#include "oracles.hpp"

using namespace autohom;

namespace {

const Alphabet ab({"a", "b"});

std::vector<WordTuple> tuples_up_to(std::size_t arity, std::size_t symbols, std::size_t max_len) {
  auto words = oracle::words_up_to(symbols, max_len);
  std::vector<WordTuple> out{{}};
  for (std::size_t j = 0; j < arity; ++j) {
    std::vector<WordTuple> next;
    for (const auto& t : out)
      for (const auto& w : words) {
        auto u = t;
        u.push_back(w);
        next.push_back(u);
      }
    out = std::move(next);
  }
  return out;
}

// Random pad-consistent relation: a random automaton cut down to valid
// convolutions.
SyncAutomaton random_relation(oracle::Rng& rng, std::size_t arity) {
  return normalize(oracle::random_automaton(rng, ab, arity, 2 + rng.below(3), 0.35));
}

}  // namespace

TEST_CASE("alphabet and letters") {
  CHECK(ab.pad() == 2);
  CHECK(ab.parse_word("abba") == Word{0, 1, 1, 0});
  CHECK(ab.format_word({}) == "ε");
  CHECK(ab.parse_word("ε").empty());
  Alphabet long_names({"x1", "y"});
  CHECK(long_names.format_word({0, 1}) == "x1.y");
  CHECK(long_names.parse_word("x1.y") == Word{0, 1});
  CHECK_THROWS_AS(ab.parse_word("abc"), Error);

  CHECK(letter_count(2, 2) == 8);
  for (Letter l = 0; l < 8; ++l) CHECK(encode_letter(decode_letter(l, 2, 2), 2) == l);
  CHECK(encode_letter({1, 2}, 2) == 1 + 2 * 3);
  for (std::size_t k = 0; k <= 3; ++k) {
    std::size_t all = 1;
    for (std::size_t j = 0; j < k; ++j) all *= 3;
    CHECK(letter_count(2, k) == all - 1);
  }
}

TEST_CASE("convolution") {
  WordTuple t{{0, 1, 1}, {1}};
  auto conv = convolve(t, 2);
  CHECK(conv.size() == 3);
  CHECK(conv[0] == encode_letter({0, 1}, 2));
  CHECK(conv[1] == encode_letter({1, 2}, 2));
  CHECK(deconvolve(conv, 2, 2) == t);
  for (const auto& u : tuples_up_to(2, 2, 3)) CHECK(deconvolve(convolve(u, 2), 2, 2) == u);
}

TEST_CASE("base relations agree with word predicates") {
  // exhaustive over pairs of words up to length 4
  auto eq = equality_relation(ab);
  auto el = equal_length_relation(ab);
  auto pre = prefix_relation(ab);
  auto succ = successor_relation(ab);
  auto last_a = last_letter_relation(ab, 0);
  auto all = all_words(ab);
  for (const auto& t : tuples_up_to(2, 2, 4)) {
    const auto &u = t[0], &v = t[1];
    CHECK(accepts(eq, t) == (u == v));
    CHECK(accepts(el, t) == (u.size() == v.size()));
    CHECK(accepts(pre, t) == oracle::is_prefix(u, v));
    CHECK(accepts(succ, t) == oracle::is_successor(u, v));
  }
  for (const auto& w : oracle::words_up_to(2, 4)) {
    CHECK(accepts(last_a, {w}) == oracle::ends_with(w, 0));
    CHECK(accepts(all, {w}));
  }
  for (const auto* a : {&eq, &el, &pre, &succ, &last_a, &all}) CHECK(oracle::pad_consistent(*a));
  CHECK(is_empty(empty_language(ab, 2)));
}

TEST_CASE("pad consistency oracle detects resumed coordinates") {
  SyncAutomaton bad(ab, 2);
  State q0 = bad.add_state(true, false), q1 = bad.add_state(false, false), q2 = bad.add_state(false, true);
  bad.add_transition(q0, std::vector<Symbol>{0, 2}, q1);
  bad.add_transition(q1, std::vector<Symbol>{0, 0}, q2);
  CHECK_FALSE(oracle::pad_consistent(bad));
  CHECK_FALSE(pad_consistent(bad));
  CHECK(is_empty(normalize(bad)));
  CHECK(oracle::pad_consistent(normalize(bad)));
}

TEST_CASE("boolean operations") {
  oracle::Rng rng(61);
  auto sample = tuples_up_to(2, 2, 3);
  for (int i = 0; i < 60; ++i) {
    auto x = random_relation(rng, 2), y = random_relation(rng, 2);
    auto i_ = intersect(x, y), u = unite(x, y), c = complement(x), d = difference(x, y);
    for (const auto* a : {&i_, &u, &c, &d}) CHECK(oracle::pad_consistent(*a));
    for (const auto& t : sample) {
      bool in_x = accepts(x, t), in_y = accepts(y, t);
      CHECK(accepts(i_, t) == (in_x && in_y));
      CHECK(accepts(u, t) == (in_x || in_y));
      CHECK(accepts(c, t) == !in_x);
      CHECK(accepts(d, t) == (in_x && !in_y));
    }
    CHECK(equivalent(complement(c), x));
    CHECK(equivalent(unite(x, c), valid_convolutions(ab, 2)));
    CHECK(is_empty(intersect(x, c)));
    CHECK(included(i_, x));
    CHECK(included(x, u));
  }
  CHECK_THROWS_AS(intersect(all_words(ab), equality_relation(ab)), Error);
}

TEST_CASE("canonical form") {
  oracle::Rng rng(67);
  for (int i = 0; i < 80; ++i) {
    auto x = random_relation(rng, 2), y = random_relation(rng, 2);
    auto cx = canonical(x);
    CHECK(cx.is_deterministic());
    CHECK(equivalent(cx, x));
    CHECK(canonical(cx) == cx);
    CHECK(cx.num_states() <= determinize(trim(x)).num_states() + 1);
    CHECK(canonical(unite(x, y)) == canonical(unite(y, x)));
    CHECK(equivalent(x, y) == (canonical(x) == canonical(y)));
  }
  CHECK(canonical(intersect(prefix_relation(ab), equal_length_relation(ab))) == canonical(equality_relation(ab)));
}

TEST_CASE("projection and cylindrification") {
  auto succ = successor_relation(ab);
  CHECK(equivalent(project(succ, {0}), all_words(ab)));
  CHECK_FALSE(equivalent(project(succ, {1}), all_words(ab)));
  auto nonempty = project(succ, {1});
  for (const auto& w : oracle::words_up_to(2, 4)) CHECK(accepts(nonempty, {w}) == !w.empty());

  // finite relations: projection is exactly the image
  oracle::Rng rng(71);
  auto words = oracle::words_up_to(2, 3);
  for (int i = 0; i < 40; ++i) {
    std::vector<WordTuple> rel;
    for (int j = 0; j < 6; ++j) rel.push_back({words[rng.below(words.size())], words[rng.below(words.size())], words[rng.below(words.size())]});
    auto a = finite_relation(ab, 3, rel);
    CHECK(is_finite_language(a));
    auto listed = enumerate_language(a);
    std::sort(rel.begin(), rel.end());
    rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    std::sort(listed.begin(), listed.end());
    CHECK(listed == rel);
    auto p = project(a, {0, 2});
    auto q = erase_coordinates(a, {2, 0});
    auto none = erase_coordinates(a, {});
    CHECK(none.arity() == 0);
    CHECK(is_empty(none) == rel.empty());
    for (const auto& u : words)
      for (const auto& v : words) {
        bool image = false, swapped = false;
        for (const auto& t : rel) {
          image = image || (t[0] == u && t[2] == v);
          swapped = swapped || (t[2] == u && t[0] == v);
        }
        CHECK(accepts(p, {u, v}) == image);
        CHECK(accepts(q, {u, v}) == swapped);
      }
  }

  // cylindrify: old coordinate j moves to positions[j]
  auto pre = prefix_relation(ab);
  auto cyl = cylindrify(pre, 3, {2, 0});
  CHECK(oracle::pad_consistent(cyl));
  for (const auto& t : tuples_up_to(3, 2, 2)) CHECK(accepts(cyl, t) == oracle::is_prefix(t[2], t[0]));
  CHECK_FALSE(is_finite_language(pre));
  CHECK_THROWS_AS(enumerate_language(pre), Error);
}

TEST_CASE("shortest accepted") {
  auto succ = successor_relation(ab);
  auto w = shortest_accepted(succ);
  REQUIRE(w);
  CHECK((*w)[0].empty());
  CHECK((*w)[1].size() == 1);
  CHECK_FALSE(shortest_accepted(empty_language(ab, 1)));
}

TEST_CASE("formula parsing") {
  auto f = parse_formula("(exists y (and (E x y) (not (= x y)))) ; trailing comment");
  CHECK(f.kind == Formula::Kind::Exists);
  CHECK(free_variables(f) == std::vector<std::string>{"x"});
  CHECK(parse_formula(to_string(f)) == f);
  CHECK(parse_formula("(last-letter a x)").kind == Formula::Kind::LastLetter);
  CHECK(parse_formula("(equal-length x y)").kind == Formula::Kind::EqualLength);
  CHECK(parse_formula("(prefix x y)").kind == Formula::Kind::Prefix);
  CHECK(parse_formula("true") == Formula::truth());
  try {
    parse_formula("(and (E x y)\n  (exists))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_formula("(E x y"), ParseError);
  CHECK_THROWS_AS(parse_formula("(E x y) extra"), ParseError);
}

TEST_CASE("compile base atoms and boolean structure") {
  Environment env{{"E", successor_relation(ab)}};
  auto sample = tuples_up_to(2, 2, 3);
  auto x_to_y = compile(parse_formula("(E x y)"), ab, env);
  auto y_to_x = compile(parse_formula("(E x y)"), ab, env, {"y", "x"});
  auto lastb = compile(parse_formula("(last-letter b x)"), ab, env, {"x", "y"});
  for (const auto& t : sample) {
    CHECK(accepts(x_to_y, t) == oracle::is_successor(t[0], t[1]));
    CHECK(accepts(y_to_x, t) == oracle::is_successor(t[1], t[0]));
    CHECK(accepts(lastb, t) == oracle::ends_with(t[0], 1));
  }
  CHECK(equivalent(compile(parse_formula("(exists y (E x y))"), ab, env), all_words(ab)));
  CHECK(is_empty(compile(parse_formula("(E x x)"), ab, env)));
  auto loopless = compile(parse_formula("(exists y (and (E x y) (E y x)))"), ab, env);
  CHECK(is_empty(loopless));

  // random boolean combinations over atoms in x, y
  std::vector<Formula> atoms{parse_formula("(E x y)"), parse_formula("(E y x)"), parse_formula("(= x y)"),
                             parse_formula("(prefix x y)"), parse_formula("(equal-length x y)"),
                             parse_formula("(last-letter a y)")};
  std::vector<std::vector<bool>> truth(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k)
    for (const auto& t : sample) {
      const auto &u = t[0], &v = t[1];
      bool val = k == 0 ? oracle::is_successor(u, v)
               : k == 1 ? oracle::is_successor(v, u)
               : k == 2 ? u == v
               : k == 3 ? oracle::is_prefix(u, v)
               : k == 4 ? u.size() == v.size()
                        : oracle::ends_with(v, 0);
      truth[k].push_back(val);
    }
  oracle::Rng rng(73);
  std::function<std::pair<Formula, std::vector<bool>>(int)> gen = [&](int depth) -> std::pair<Formula, std::vector<bool>> {
    if (depth == 0 || rng.coin(0.3)) {
      std::size_t k = rng.below(atoms.size());
      return {atoms[k], truth[k]};
    }
    auto [l, lv] = gen(depth - 1);
    switch (rng.below(4)) {
      case 0: {
        for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = !lv[i];
        return {Formula::negate(l), lv};
      }
      case 1: {
        auto [r, rv] = gen(depth - 1);
        for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = lv[i] && rv[i];
        return {Formula::conj({l, r}), lv};
      }
      case 2: {
        auto [r, rv] = gen(depth - 1);
        for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = lv[i] || rv[i];
        return {Formula::disj({l, r}), lv};
      }
      default: {
        auto [r, rv] = gen(depth - 1);
        for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = !lv[i] || rv[i];
        return {Formula::implies(l, r), lv};
      }
    }
  };
  for (int i = 0; i < 60; ++i) {
    auto [f, expect] = gen(3);
    auto a = compile(f, ab, env, {"x", "y"});
    CHECK(oracle::pad_consistent(a));
    for (std::size_t j = 0; j < sample.size(); ++j) CHECK(accepts(a, sample[j]) == expect[j]);
    CHECK(equivalent(compile(Formula::negate(f), ab, env, {"x", "y"}), complement(a)));
  }
}

TEST_CASE("compile conjunction over disjoint variables") {
  Environment env{{"E", successor_relation(ab)}};
  auto f = parse_formula("(E x y)"), g = parse_formula("(last-letter a z)");
  auto both = compile(Formula::conj({f, g}), ab, env, {"x", "y", "z"});
  auto cf = cylindrify(compile(f, ab, env), 3, {0, 1});
  auto cg = cylindrify(compile(g, ab, env), 3, {2});
  CHECK(equivalent(both, intersect(cf, cg)));
}

TEST_CASE("sentences") {
  Environment env{{"E", successor_relation(ab)}};
  CHECK(evaluate_sentence(parse_formula("(forall x (exists y (E x y)))"), ab, env));
  CHECK_FALSE(evaluate_sentence(parse_formula("(exists x (E x x))"), ab, env));
  CHECK(evaluate_sentence(parse_formula("(exists x (forall y (not (E y x))))"), ab, env));
  CHECK(compile(parse_formula("true"), ab, env).arity() == 0);
  CHECK_THROWS_AS(compile(parse_formula("(F x)"), ab, env), Error);
  CHECK_THROWS_AS(compile(parse_formula("(E x y z)"), ab, env), Error);
}
