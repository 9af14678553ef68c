#include "doctest.h"

#include "autohom/canonical.hpp"
#include "autohom/structures.hpp"
#include "oracles.hpp"

using namespace autohom;

namespace {

std::size_t edge_count(const FiniteStructure& g) { return g.tuples(0).size(); }

// The marked source of the T2 reduction picture: x0 -> x1 <- x2 -> x3 -> x4,
// with x0 marked 0 and x2 marked 1.
MarkedStructure reduction_source() {
  auto t2 = transitive_tournament(2);
  FiniteStructure a(marked_signature(t2), std::vector<std::string>{"x0", "x1", "x2", "x3", "x4"});
  a.add_tuple("E", {"x0", "x1"});
  a.add_tuple("E", {"x2", "x1"});
  a.add_tuple("E", {"x2", "x3"});
  a.add_tuple("E", {"x3", "x4"});
  a.add_tuple("P_0", {"x0"});
  a.add_tuple("P_1", {"x2"});
  return a;
}

}  // namespace

TEST_CASE("generators") {
  auto k3 = clique(3);
  CHECK(k3.size() == 3);
  CHECK(edge_count(k3) == 6);

  CHECK(path(2).size() == 3);
  CHECK(edge_count(path(2)) == 2);
  CHECK(edge_count(transitive_tournament(3)) == 6);

  // zigzag 0 is P3 up to renaming
  CHECK(isomorphic(zigzag(0), path(3)));
  for (int n = 0; n < 6; ++n) {
    CHECK(zigzag(n).size() == std::size_t(2 * n + 4));
    CHECK(edge_count(zigzag(n)) == std::size_t(2 * n + 3));
  }
  CHECK(zigzag(1).names() == std::vector<std::string>{"a'0", "a0", "b0", "a1", "b1", "b'1"});

  Signature sig({{"E", 2}, {"R", 3}});
  auto l0 = link(0, sig);
  CHECK(l0.size() == 1);
  CHECK(l0.tuples(0) == std::vector<Tuple>{{0, 0}});
  CHECK(l0.tuples(1) == std::vector<Tuple>{{0, 0, 0}});
  // each window {i, i+1} contributes 2^k tuples, sharing the constant ones
  auto l2 = link(2, sig);
  CHECK(l2.tuples(0).size() == 2 * 4 - 1);
  CHECK(l2.tuples(1).size() == 2 * 8 - 1);

  Signature unary({{"P", 1}, {"Q", 1}});
  auto u = unary_singleton(unary, {"Q"});
  CHECK(u.size() == 1);
  CHECK(u.tuples(0).empty());
  CHECK(u.tuples(1).size() == 1);
  CHECK_THROWS_AS(unary_singleton(sig, {}), ArgumentError);

  CHECK(generate(GeneratorKind::Zigzag, 2) == zigzag(2));
  CHECK_THROWS_AS(clique(-1), ArgumentError);
}

TEST_CASE("product and disjoint union") {
  auto p1 = path(1);
  auto pp = product(p1, p1);
  CHECK(pp.size() == 4);
  CHECK(pp.tuples(0) == std::vector<Tuple>{{0, 3}});  // (0,0) -> (1,1)

  auto kk = product(clique(2), clique(2));
  CHECK(kk.size() == 4);
  std::size_t brute = 0;
  auto k2 = clique(2);
  for (const auto& e : k2.tuples(0))
    for (const auto& f : k2.tuples(0)) brute += (e.size() == 2 && f.size() == 2);
  CHECK(edge_count(kk) == brute);
  CHECK(edge_count(kk) == 4);

  auto du = disjoint_union(p1, p1);
  CHECK(du.size() == 4);
  CHECK(edge_count(du) == 2);

  FiniteStructure other(Signature({{"R", 1}}), 2);
  CHECK_THROWS_AS(product(p1, other), SignatureMismatch);
  CHECK_THROWS_AS(disjoint_union(p1, other), SignatureMismatch);
}

TEST_CASE("product counts tuples multiplicatively") {
  oracle::Rng rng(7);
  for (int i = 0; i < 60; ++i) {
    auto a = oracle::random_graph(rng, 1 + rng.below(4), 0.4);
    auto b = oracle::random_graph(rng, 1 + rng.below(4), 0.4);
    auto p = product(a, b);
    CHECK(p.size() == a.size() * b.size());
    CHECK(edge_count(p) == edge_count(a) * edge_count(b));
    // both projections are homomorphisms
    std::vector<Element> pa, pb;
    for (Element x = 0; x < p.size(); ++x) pa.push_back(x / Element(b.size())), pb.push_back(x % Element(b.size()));
    CHECK(oracle::preserves(p, a, pa));
    CHECK(oracle::preserves(p, b, pb));
  }
}

TEST_CASE("mark_target") {
  auto t2 = transitive_tournament(2);
  auto m = mark_target(t2);
  CHECK(m.signature().size() == t2.signature().size() + t2.size());
  for (Element b = 0; b < 3; ++b) CHECK(m.tuples(1 + b) == std::vector<Tuple>{{b}});
  CHECK(m.signature()[1].name == "P_0");
  CHECK_THROWS_AS(mark_target(FiniteStructure(Signature::graph(), 0)), ArgumentError);
}

TEST_CASE("collapse_marks on the T2 picture") {
  auto t2 = transitive_tournament(2);
  auto a = reduction_source();
  auto phi = collapse_marks(a, t2);
  CHECK(phi.size() == 8);
  auto has = [&](const std::string& u, const std::string& v) {
    return phi.contains(0, {phi.element(u), phi.element(v)});
  };
  // the cross edges drawn in the picture
  CHECK(has("A:x0", "B:1"));
  CHECK(has("B:0", "A:x2"));
  CHECK(has("A:x2", "B:2"));
  // also produced by the definition from the edge 0 -> 2 of T2
  CHECK(has("A:x0", "B:2"));
  CHECK(edge_count(phi) == 4 + 3 + 4);
  CHECK_FALSE(oracle::hom_exists(a, mark_target(t2)));
  CHECK_FALSE(oracle::hom_exists(phi, t2));

  // no marks: plain disjoint union
  FiniteStructure bare(marked_signature(t2), 3);
  bare.add_tuple(0, {0, 1});
  auto phi0 = collapse_marks(bare, t2);
  CHECK(edge_count(phi0) == 1 + 3);

  CHECK_THROWS_AS(collapse_marks(path(2), t2), SignatureMismatch);
}

TEST_CASE("collapse_marks is a reduction") {
  // exhaustive over labelled graphs with at most 2 vertices and every marking,
  // then random markings of all graph classes with at most 4 vertices
  for (const auto& b : {transitive_tournament(2), path(2)}) {
    auto mb = mark_target(b);
    auto check = [&](const FiniteStructure& g, const std::vector<std::uint32_t>& marks) {
      FiniteStructure a(marked_signature(b), g.size());
      a.set_tuples(0, g.tuples(0));
      for (Element x = 0; x < g.size(); ++x)
        for (Element y = 0; y < b.size(); ++y)
          if (marks[x] >> y & 1) a.add_tuple(1 + y, {x});
      CHECK(oracle::hom_exists(a, mb) == oracle::hom_exists(collapse_marks(a, b), b));
    };
    for (std::size_t n = 1; n <= 2; ++n)
      for (std::uint32_t bits = 0; bits < (1u << (n * n)); ++bits) {
        auto g = oracle::graph_from_bits(n, bits);
        std::vector<std::uint32_t> marks(n, 0);
        for (std::uint32_t code = 0; code < (1u << (3 * n)); ++code) {
          for (std::size_t x = 0; x < n; ++x) marks[x] = code >> (3 * x) & 7;
          check(g, marks);
        }
      }
    oracle::Rng rng(11);
    for (const auto& g : structure_corpus(Signature::graph(), 4)) {
      std::vector<std::uint32_t> marks(g.size());
      for (auto& m : marks) m = rng.coin(0.6) ? 0 : std::uint32_t(1) << rng.below(3);
      check(g, marks);
    }
  }
}

TEST_CASE("adjacency") {
  auto p2 = path(2);
  CHECK(adjacency(p2, 1, 0, 0) == std::vector<Tuple>{{2}});
  CHECK(adjacency(p2, 1, 0, 1) == std::vector<Tuple>{{0}});
  for (Element v = 0; v < 3; ++v) CHECK(adjacency(clique(3), v, 0, 0).size() == 2);
  CHECK_THROWS_AS(adjacency(p2, 0, 0, 2), ArgumentError);
  CHECK_THROWS_AS(adjacency(p2, 0, 1, 0), ArgumentError);
}

TEST_CASE("metrics") {
  for (int n = 0; n < 5; ++n) CHECK(is_sigma_tree(zigzag(n)));
  CHECK_FALSE(is_sigma_tree(clique(2)));
  CHECK_FALSE(is_sigma_tree(disjoint_union(path(1), path(1))));
  FiniteStructure loop(Signature::graph(), 1);
  loop.add_tuple(0, {0, 0});
  CHECK_FALSE(is_sigma_tree(loop));

  auto p4 = path(4);
  CHECK(isomorphic(ball(p4, 2, 1), path(2)));
  CHECK(distance(p4, 0, 4) == 4);
  CHECK(diameter(p4) == 4);
  auto two = disjoint_union(path(1), path(2));
  CHECK(distance(two, 0, 2) == kInfinite);
  CHECK(diameter(two) == kInfinite);
  CHECK(connected_components(two).size() == 2);
  CHECK_FALSE(is_connected(two));

  auto inc = incidence_graph(p4);
  CHECK(inc.elements == 5);
  CHECK(inc.hyperedges.size() == 4);
}

TEST_CASE("components agree with union-find") {
  oracle::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto g = oracle::random_graph(rng, 1 + rng.below(6), 0.15);
    for (Element s = 0; s < g.size(); ++s)
      for (Element t = 0; t < g.size(); ++t)
        CHECK((distance(g, s, t) != kInfinite) == oracle::connected(g, s, t));
  }
}

TEST_CASE("canonical form and corpus") {
  // labelled graph counts up to isomorphism: 2, 10, 104, 3044
  CHECK(structure_corpus(Signature::graph(), 1).size() == 2);
  CHECK(structure_corpus(Signature::graph(), 2).size() == 12);
  CHECK(structure_corpus(Signature::graph(), 3).size() == 116);

  oracle::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto g = oracle::random_graph(rng, 1 + rng.below(5), 0.35);
    std::vector<Element> perm(g.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.gen);
    CHECK(isomorphic(g, induced(g, perm)));
    CHECK(canonical_form(g).key == canonical_form(induced(g, perm)).key);
  }
  CHECK_FALSE(isomorphic(path(2), transitive_tournament(2)));
}
