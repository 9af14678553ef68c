#include "doctest.h"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "autohom/cli.hpp"
#include "autohom/io.hpp"
#include "oracles.hpp"

using namespace autohom;

namespace {

const std::string data = AUTOHOM_DATA_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("cli verdicts and exit codes") {
  auto fd = run_cli({"finite-duality", data + "/T2.struct"});
  CHECK(fd.code == kExitPositive);
  CHECK(contains(fd.out, "verdict: positive"));

  auto hc = run_cli({"hc", data + "/zigzag5.struct", data + "/P2.struct", "--trace"});
  CHECK(hc.code == kExitNegative);
  CHECK(contains(hc.out, "first-empty-step: 7"));
  CHECK(contains(hc.out, "all-empty-step: 13"));

  auto mc = run_cli({"mc", data + "/bintree.apres", data + "/forall-succ.fo"});
  CHECK(mc.code == kExitPositive);
  CHECK(run_cli({"mc", data + "/bintree.apres", data + "/two-cycle.fo"}).code == kExitNegative);
  CHECK(run_cli({"mc", "builtin:binary-tree", "(exists x (E x x))"}).code == kExitNegative);

  CHECK(run_cli({"hom", "gen:zigzag:1", data + "/T2.struct"}).code == kExitPositive);
  CHECK(run_cli({"hom", "gen:zigzag:0", data + "/T2.struct"}).code == kExitNegative);
  CHECK(run_cli({"tree-duality", "gen:clique:2"}).code == kExitNegative);
  CHECK(run_cli({"hc-auto", data + "/bintree.apres", data + "/T2.struct"}).code == kExitNegative);
  CHECK(run_cli({"hc-auto", data + "/matching.apres", data + "/T1.struct"}).code == kExitPositive);
  CHECK(run_cli({"hc-auto", "gen:zigzag:5", data + "/P2.struct", "--max-rounds", "3"}).code == kExitUnknown);
  CHECK(run_cli({"synth-reghom", data + "/matching.apres", data + "/T1.struct"}).code == kExitPositive);
  CHECK(run_cli({"refute", data + "/bintree.apres", data + "/T2.struct"}).code == kExitNegative);
  CHECK(run_cli({"refute", "gen:tournament:2", data + "/T2.struct"}).code == kExitUnknown);
  CHECK(run_cli({"enum-reghom", data + "/bintree.apres", data + "/K2.struct"}).code == kExitPositive);
  CHECK(run_cli({"enum-reghom", data + "/bintree.apres", data + "/T2.struct", "--budget", "100"}).code == kExitUnknown);
  CHECK(run_cli({"hom-dual", data + "/bintree.apres", "--dual", data + "/P3.struct"}).code == kExitNegative);
  CHECK(run_cli({"verify-dual", data + "/T2.struct", "--dual", data + "/P3.struct"}).code == kExitPositive);
  CHECK(run_cli({"verify-dual", data + "/P2.struct", "--dual", data + "/P3.struct"}).code == kExitNegative);
  CHECK(run_cli({"critical-obstructions", data + "/T2.struct", "--max-size", "4"}).code == kExitPositive);
}

TEST_CASE("cli input errors") {
  auto none = run_cli({});
  CHECK(none.code == kExitInputError);
  CHECK(contains(none.err, "Usage"));
  CHECK(run_cli({"bogus"}).code == kExitInputError);
  CHECK(run_cli({"hom", "--frobnicate"}).code == kExitInputError);
  CHECK(run_cli({"hom", "/nonexistent/file", data + "/T2.struct"}).code == kExitInputError);
  CHECK(run_cli({"mc", "builtin:binary-tree", "(exists x (E x x)"}).code == kExitInputError);
  CHECK(run_cli({"hom", "gen:nothing:2", data + "/T2.struct"}).code == kExitInputError);
  CHECK(run_cli({"mc", "builtin:nope", "true"}).code == kExitInputError);
}

TEST_CASE("cli json output") {
  auto r = run_cli({"hc", data + "/zigzag5.struct", data + "/P2.struct", "--json"});
  CHECK(r.code == kExitNegative);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "hc");
  CHECK(j["verdict"] == "negative");
  CHECK(j["first-empty-step"] == 7);
  CHECK(j["all-empty-step"] == 13);

  auto e = run_cli({"--json", "hom", "/nonexistent/file", data + "/T2.struct"});
  CHECK(e.code == kExitInputError);
  auto je = nlohmann::json::parse(e.out);
  CHECK(je["verdict"] == "error");
  CHECK(je.contains("error"));
}

TEST_CASE("cli artifacts feed back into the cli") {
  auto gen = run_cli({"generate", "zigzag", "2"});
  CHECK(gen.code == kExitPositive);
  CHECK(parse_structure(gen.out) == zigzag(2));

  auto fv = run_cli({"feder-vardi", data + "/P2.struct"});
  CHECK(parse_structure(fv.out).tuple_count() == 3);

  auto gl = run_cli({"gadget", "link", "gen:path:2"});
  CHECK(gl.code == kExitPositive);
  auto lp = parse_presentation(gl.out);
  CHECK(materialize(lp).tuple_count() == 7);

  auto gu = run_cli({"gadget", "undec", "gen:path:1", data + "/P2.struct", "--s", "ε", "--t", "a"});
  CHECK(gu.code == kExitPositive);
  CHECK(parse_presentation(gu.out).signature.size() == 4);

  auto sy = run_cli({"--json", "synth-reghom", data + "/matching.apres", data + "/T1.struct"});
  auto coloring = nlohmann::json::parse(sy.out)["coloring"].get<std::string>();
  std::string path = "/tmp/autohom_test_coloring.aut";
  {
    std::ofstream f(path);
    f << coloring;
  }
  CHECK(run_cli({"check-reghom", data + "/matching.apres", data + "/T1.struct", path}).code == kExitPositive);
  CHECK(run_cli({"check-reghom", data + "/bintree.apres", data + "/T1.struct", path}).code != kExitPositive);
}

TEST_CASE("structure format round trip") {
  oracle::Rng rng(107);
  Signature sig({{"E", 2}, {"R", 3}, {"U", 1}});
  for (int i = 0; i < 50; ++i) {
    auto s = oracle::random_structure(rng, sig, 1 + rng.below(4), 0.2);
    CHECK(parse_structure(format_structure(s)) == s);
  }
  auto named = parse_structure("# comment\nsignature E/2\ndomain x y\nE x y\n");
  CHECK(named.names() == std::vector<std::string>{"x", "y"});
  CHECK(parse_structure(format_structure(named)) == named);
  CHECK_THROWS_AS(parse_structure("signature E/2\ndomain x\nE x z\n"), Error);
  CHECK_THROWS_AS(parse_structure("domain x\n"), Error);
}

TEST_CASE("automaton format round trip") {
  oracle::Rng rng(109);
  Alphabet ab({"a", "b"});
  for (std::size_t k = 1; k <= 3; ++k)
    for (int i = 0; i < 20; ++i) {
      auto a = normalize(oracle::random_automaton(rng, ab, k, 1 + rng.below(4), 0.3));
      CHECK(parse_automaton(format_automaton(a)) == a);
    }
  auto one = parse_automaton("arity 2\nalphabet 0 1\nstate q0 initial\nstate q1 accepting\ntrans q0 (0,#) q1\n");
  CHECK(accepts(one, {{0}, {}}));
  try {
    parse_automaton("arity 2\nalphabet 0 1\nstate q0 initial\ntrans q0 (#,#) q0\n");
    FAIL("all-pad column accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("presentation format round trip") {
  for (const auto& name : builtin_names()) {
    auto p = builtin(name);
    CHECK(parse_presentation(format_presentation(p)) == p);
  }
  oracle::Rng rng(113);
  for (int i = 0; i < 20; ++i) {
    auto p = from_finite(oracle::random_graph(rng, 1 + rng.below(4), 0.3));
    CHECK(parse_presentation(format_presentation(p)) == p);
  }
  auto file = parse_presentation(read_input(data + "/bintree.apres"), data);
  CHECK(file == binary_tree());
}

TEST_CASE("classifier and coloring round trip") {
  auto t2 = transitive_tournament(2);
  for (const auto& name : builtin_names()) {
    auto p = builtin(name);
    auto r = hc_auto(p, t2, 8, true);
    for (const auto& c : r.trace) CHECK(parse_classifier(format_classifier(c, t2), t2) == c);
  }
  auto m = infinite_matching();
  auto t1 = transitive_tournament(1);
  auto s = synth_regular_hom(m, t1);
  REQUIRE(s.status == SynthStatus::Found);
  auto back = parse_coloring(format_coloring(s.coloring, t1), t1);
  REQUIRE(back.classes.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(equivalent(back.classes[i], s.coloring.classes[i]));
}
