#include "doctest.h"

#include "autohom/canonical.hpp"
#include "autohom/duality.hpp"
#include "oracles.hpp"

using namespace autohom;

namespace {

// Image sets as bit patterns, bit b set when b is in the set.
std::vector<unsigned> bits(const GuessFunction& f) {
  std::vector<unsigned> out;
  for (const auto& s : f.image) {
    unsigned m = 0;
    for (Element b : s.elements()) m |= 1u << b;
    out.push_back(m);
  }
  return out;
}

// Reference operator: b stays in F(a) when every tuple through a at every
// position has a target tuple through b drawn pointwise from F.
GuessFunction reference_step(const FiniteStructure& a, const FiniteStructure& b, const GuessFunction& f) {
  GuessFunction g = f;
  for (Element x = 0; x < a.size(); ++x)
    for (Element y : f.image[x].elements()) {
      bool keep = true;
      for (std::size_t p = 0; p < a.signature().size() && keep; ++p)
        for (const auto& t : a.tuples(p)) {
          for (std::size_t i = 0; i < t.size() && keep; ++i) {
            if (t[i] != x) continue;
            bool matched = false;
            for (const auto& s : b.tuples(p)) {
              if (s[i] != y) continue;
              bool ok = true;
              for (std::size_t j = 0; j < t.size(); ++j) ok = ok && f.image[t[j]].test(s[j]);
              if (ok) {
                matched = true;
                break;
              }
            }
            keep = matched;
          }
          if (!keep) break;
        }
      if (!keep) g.image[x].reset(y);
    }
  return g;
}

GuessFunction random_guess(oracle::Rng& rng, std::size_t n, std::size_t m) {
  GuessFunction f;
  for (std::size_t x = 0; x < n; ++x) {
    ElementSet s(m);
    for (Element y = 0; y < m; ++y)
      if (rng.coin(0.7)) s.set(y);
    f.image.push_back(s);
  }
  return f;
}

bool dual_holds(const FiniteStructure& a, const std::vector<FiniteStructure>& dual) {
  for (const auto& d : dual)
    if (oracle::hom_exists(d, a)) return false;
  return true;
}

}  // namespace

TEST_CASE("feder_vardi") {
  auto p2 = path(2);
  auto fv = feder_vardi(p2);
  CHECK(fv.size() == 7);
  auto elem = [&](std::initializer_list<Element> xs) {
    ElementSet s(3);
    for (Element x : xs) s.set(x);
    return fv_element(s);
  };
  std::vector<Tuple> expect{{elem({0}), elem({1})}, {elem({1}), elem({2})}, {elem({0, 1}), elem({1, 2})}};
  std::sort(expect.begin(), expect.end());
  CHECK(fv.tuples(0) == expect);
  CHECK(fv.name(elem({0, 2})) == "{0,2}");
  CHECK(fv_subset(p2, elem({0, 2})).elements() == std::vector<Element>{0, 2});

  for (const auto& b : {path(2), transitive_tournament(2), clique(2), clique(3)}) {
    auto f = feder_vardi(b);
    Assignment singletons;
    for (Element x = 0; x < b.size(); ++x) {
      ElementSet s(b.size());
      s.set(x);
      singletons.push_back(fv_element(s));
    }
    CHECK(oracle::preserves(b, f, singletons));
  }

  auto ffv = feder_vardi(fv);
  CHECK(hom_exists(ffv, fv));
  CHECK(hom_exists(fv, ffv));
}

TEST_CASE("feder_vardi matches its definition") {
  oracle::Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    auto b = oracle::random_graph(rng, 1 + rng.below(3), 0.45);
    auto fv = feder_vardi(b);
    for (Element u = 0; u < fv.size(); ++u)
      for (Element v = 0; v < fv.size(); ++v) {
        auto su = fv_subset(b, u).elements(), sv = fv_subset(b, v).elements();
        bool expect = true;
        for (Element x : su) {
          bool any = false;
          for (Element y : sv) any = any || b.contains(0, {x, y});
          expect = expect && any;
        }
        for (Element y : sv) {
          bool any = false;
          for (Element x : su) any = any || b.contains(0, {x, y});
          expect = expect && any;
        }
        CHECK(fv.contains(0, {u, v}) == expect);
      }
  }
}

TEST_CASE("tree duality") {
  auto td = tree_duality(path(2));
  CHECK(td.holds);
  CHECK(oracle::preserves(feder_vardi(path(2)), path(2), td.retraction));
  CHECK_FALSE(has_tree_duality(clique(2)));
  CHECK(has_tree_duality(transitive_tournament(2)));
  CHECK_FALSE(has_tree_duality(clique(3)));
}

TEST_CASE("hc_step on the zigzag against T2") {
  auto z = zigzag(5);
  auto t2 = transitive_tournament(2);
  auto trace = hc_fixpoint(z, t2);
  REQUIRE(trace.steps.size() >= 3);
  // bit b stands for element b of T2; vertices in the order a'0 a0 b0 ... b5 b'5
  CHECK(bits(trace.steps[0]) == std::vector<unsigned>(14, 7));
  CHECK(bits(trace.steps[1]) == std::vector<unsigned>{3, 2, 6, 3, 6, 3, 6, 3, 6, 3, 6, 3, 2, 6});
  CHECK(bits(trace.steps[2]) == std::vector<unsigned>{1, 2, 4, 3, 6, 3, 6, 3, 6, 3, 6, 1, 2, 4});
  CHECK(trace.fixpoint_step == 2);
  CHECK_FALSE(trace.first_empty_step);

  FiniteStructure dot(Signature::graph(), 1);
  CHECK(bits(hc_step(dot, t2, top_guess(dot, t2))) == std::vector<unsigned>{7});
}

TEST_CASE("hc on the zigzag against P2") {
  auto trace = hc_fixpoint(zigzag(5), path(2));
  CHECK(trace.first_empty_step == std::optional<std::size_t>(7));
  CHECK(trace.all_empty_step == std::optional<std::size_t>(13));
  CHECK_FALSE(hc_decides(zigzag(5), path(2)).all_nonempty);
  auto d = hc_decides(zigzag(1), transitive_tournament(2));
  CHECK(d.all_nonempty);
  CHECK(d.sound);
}

TEST_CASE("hc against K2 keeps everything on a 2-cycle") {
  auto k2 = clique(2);
  auto t = hc_fixpoint(k2, k2);
  CHECK(t.fixpoint_step == 0);
  CHECK(bits(t.fixpoint()) == std::vector<unsigned>{3, 3});
  // unsound flag for targets without tree duality
  CHECK_FALSE(hc_decides(clique(3), k2).sound);
}

TEST_CASE("hc_step agrees with the reference operator") {
  oracle::Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    auto a = oracle::random_graph(rng, 1 + rng.below(5), 0.3);
    auto b = oracle::random_graph(rng, 1 + rng.below(4), 0.4);
    auto f = random_guess(rng, a.size(), b.size());
    auto g = hc_step(a, b, f);
    CHECK(bits(g) == bits(reference_step(a, b, f)));
    CHECK(refines(g, f));
    // monotone: shrinking f shrinks the step
    auto f2 = f;
    for (auto& s : f2.image)
      for (Element y : s.elements())
        if (rng.coin(0.3)) s.reset(y);
    CHECK(refines(hc_step(a, b, f2), g));
  }
  Signature sig({{"R", 3}});
  for (int i = 0; i < 100; ++i) {
    auto a = oracle::random_structure(rng, sig, 1 + rng.below(4), 0.1);
    auto b = oracle::random_structure(rng, sig, 1 + rng.below(3), 0.3);
    auto f = random_guess(rng, a.size(), b.size());
    CHECK(bits(hc_step(a, b, f)) == bits(reference_step(a, b, f)));
  }
}

TEST_CASE("hc fixpoint properties") {
  oracle::Rng rng(43);
  for (int i = 0; i < 300; ++i) {
    auto a = oracle::random_graph(rng, 1 + rng.below(5), 0.3);
    auto b = oracle::random_graph(rng, 1 + rng.below(3), 0.5);
    auto t = hc_fixpoint(a, b);
    const auto& fix = t.fixpoint();
    CHECK(hc_step(a, b, fix) == fix);
    // every homomorphism lies inside the fixpoint
    for (const auto& h : oracle::all_homs(a, b))
      for (Element x = 0; x < a.size(); ++x) CHECK(fix.image[x].test(h[x]));
    if (fix.any_empty()) CHECK(find_hom(a, b).status == HomStatus::NoHom);
    // worklist propagation reaches the same fixpoint
    auto w = top_guess(a, b);
    bool nonempty = Propagator(a, b).run(w);
    CHECK(nonempty == !fix.any_empty());
    if (nonempty) CHECK(w == fix);
    // an all-nonempty fixpoint is a homomorphism into FV(b)
    if (!fix.any_empty()) {
      Assignment to_fv;
      for (const auto& s : fix.image) to_fv.push_back(fv_element(s));
      CHECK(oracle::preserves(a, feder_vardi(b), to_fv));
    }
  }
}

TEST_CASE("hc decides targets with tree duality") {
  // exhaustive over graphs with at most 4 vertices
  for (const auto& b : {path(2), transitive_tournament(2)})
    for (const auto& a : structure_corpus(Signature::graph(), 4)) {
      auto d = hc_decides(a, b);
      CHECK(d.sound);
      CHECK(d.all_nonempty == oracle::hom_exists(a, b));
    }
}

TEST_CASE("linked analysis") {
  auto la = linked_analysis(link(3));
  for (Element i = 0; i < 3; ++i) CHECK(la.one_linked[i][i + 1]);
  auto t2 = linked_analysis(transitive_tournament(2));
  for (Element x = 0; x < 3; ++x)
    for (Element y = 0; y < 3; ++y) CHECK_FALSE(t2.one_linked[x][y]);
  oracle::Rng rng(47);
  for (int i = 0; i < 100; ++i) {
    auto b = oracle::random_graph(rng, 1 + rng.below(4), 0.6);
    auto l = linked_analysis(b);
    for (Element x = 0; x < b.size(); ++x)
      for (Element y = 0; y < b.size(); ++y) {
        CHECK(l.linked[x][y] == l.linked[y][x]);
        bool one = b.contains(0, {x, x}) && b.contains(0, {x, y}) && b.contains(0, {y, x}) && b.contains(0, {y, y});
        CHECK(l.one_linked[x][y] == one);
      }
  }
}

TEST_CASE("finite duality") {
  for (int k = 1; k <= 3; ++k) CHECK(has_finite_duality(transitive_tournament(k)) == Tristate::Yes);
  CHECK(has_finite_duality(path(2)) == Tristate::No);
  CHECK(has_finite_duality(clique(2)) == Tristate::No);
  Signature unary({{"P", 1}, {"Q", 1}});
  FiniteStructure u(unary, 2);
  u.add_tuple(0, {1});
  CHECK(has_finite_duality(u) == Tristate::Yes);
  // finite duality implies tree duality
  oracle::Rng rng(53);
  for (int i = 0; i < 30; ++i) {
    auto b = oracle::random_graph(rng, 1 + rng.below(2), 0.5);
    if (has_finite_duality(b) == Tristate::Yes) CHECK(has_tree_duality(b));
  }
  auto r = finite_duality(transitive_tournament(3), 10);
  CHECK(r.verdict == Tristate::Unknown);
}

TEST_CASE("critical obstructions") {
  auto t2 = transitive_tournament(2);
  auto obs = critical_obstructions(t2, 4, 4);
  bool has_p3 = false;
  for (const auto& d : obs) {
    has_p3 = has_p3 || isomorphic(d, path(3));
    CHECK(is_core(d));
    CHECK(is_critical_obstruction(d, t2));
    CHECK_FALSE(oracle::hom_exists(d, t2));
  }
  CHECK(has_p3);
  CHECK_FALSE(is_critical_obstruction(path(4), t2));
  CHECK_FALSE(is_critical_obstruction(path(2), t2));
}

TEST_CASE("verify_dual") {
  auto corpus = structure_corpus(Signature::graph(), 3);
  CHECK(verify_dual(transitive_tournament(2), {path(3)}, corpus).ok);
  CHECK(verify_dual(path(2), {zigzag(0), zigzag(1), zigzag(2), zigzag(3)}, structure_corpus(Signature::graph(), 4)).ok);
  auto bad = verify_dual(path(2), {}, corpus);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.counterexample);
  CHECK_FALSE(oracle::hom_exists(corpus[*bad.counterexample], path(2)));
  // against the oracle
  for (const auto& a : corpus) CHECK(dual_holds(a, {path(3)}) == oracle::hom_exists(a, transitive_tournament(2)));
}

TEST_CASE("unary duals") {
  Signature one({{"P", 1}});
  FiniteStructure empty_p(one, 1);
  auto d = unary_dual(empty_p);
  REQUIRE(d.size() == 1);
  CHECK(d[0].size() == 1);
  CHECK(d[0].tuples(0).size() == 1);
  FiniteStructure full_p(one, 2);
  full_p.add_tuple(0, {0});
  full_p.add_tuple(0, {1});
  CHECK(unary_dual(full_p).empty());
  CHECK_THROWS_AS(unary_dual(path(1)), ArgumentError);

  Signature two({{"P", 1}, {"Q", 1}});
  auto corpus = structure_corpus(two, 3);
  oracle::Rng rng(59);
  for (int i = 0; i < 20; ++i) {
    auto b = oracle::random_structure(rng, two, 1 + rng.below(3), 0.5);
    auto dual = unary_dual(b);
    CHECK(verify_dual(b, dual, corpus).ok);
    for (const auto& a : corpus) CHECK(dual_holds(a, dual) == oracle::hom_exists(a, b));
  }
}
