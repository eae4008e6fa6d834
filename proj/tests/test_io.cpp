#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace dendro;
using namespace dendro::test;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("dendro_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

// Corrupts one lambda of a generated problem until the certificates reject it.
std::optional<LiftProblem> broken_problem() {
  std::mt19937 rng(47);
  for (LiftProblem p : generate_lift_problems(rng, 2)) {
    SAlgebra source = nerve_algebra(p.source);
    const SSet& value = source.value[p.alpha.color[p.tree.root]];
    for (Simplex& lambda : p.lambdas) {
      int n = lambda.dim();
      if (value.count(n) < 2 || !lambda.nondegenerate()) continue;
      Simplex keep = lambda;
      lambda = nondeg((lambda.cell + 1) % value.count(n), n);
      if (!solve_lift_problem(p).result.ok()) return p;
      lambda = keep;
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("shipped operads round trip byte for byte") {
    for (const auto& [name, p] : shipped_operads()) {
      INFO(name);
      json j = operad_to_json(p);
      CHECK(dump(operad_to_json(operad_from_json(j))) == dump(j));
    }
  }

  TEST_CASE("free operads by tree") {
    Operad p = operad_from_json(json{{"free_on", "r(a(x),y)"}});
    CHECK(p.colors.size() == 4);
    CHECK(is_sigma_free(p));
  }

  TEST_CASE("invalid operads are rejected") {
    json j = operad_to_json(z2_operad());
    json bad = j;
    bad.erase("units");
    CHECK_THROWS(operad_from_json(bad));
    CHECK_THROWS(operad_from_json(json{{"colors", json::array({"x"})}}));
  }

  TEST_CASE("trees keep their edge order") {
    std::mt19937 rng(1);
    for (int i = 0; i < 30; ++i) {
      Tree t = random_tree(rng, 5, 3);
      Tree u = tree_from_json(tree_to_json(t));
      CHECK(u.names == t.names);
      CHECK(u.out == t.out);
      CHECK(u.in == t.in);
      CHECK(tree_from_json(json(to_string(t))).num_edges() == t.num_edges());
    }
  }

  TEST_CASE("morphisms round trip") {
    Tree s = T("r(x,y)"), t = T("r(a(x,y),b(z))");
    for (const TreeMorphism& f : hom_set(s, t)) CHECK(morphism_from_json(morphism_to_json(f)) == f);
  }

  TEST_CASE("categories, monoidal categories and algebras round trip") {
    for (const SMCat& m : sample_smcats()) {
      json j = smcat_to_json(m);
      SMCat back = smcat_from_json(j);
      CHECK_FALSE(check_smcat(back));
      CHECK(dump(smcat_to_json(back)) == dump(j));
    }
    std::mt19937 rng(6);
    auto p = shared(pointed_pair_operad());
    PosetAlgebra a = random_join_algebra(rng, p).algebra;
    json j = poset_algebra_to_json(a);
    PosetAlgebra b = poset_algebra_from_json(p, j);
    CHECK_FALSE(check_poset_algebra(b));
    CHECK(dump(poset_algebra_to_json(b)) == dump(j));
  }

  TEST_CASE("lift problems round trip") {
    std::mt19937 rng(12);
    for (const LiftProblem& p : generate_lift_problems(rng, 2)) {
      json j = lift_problem_to_json(p);
      LiftProblem q = lift_problem_from_json(j);
      CHECK(dump(lift_problem_to_json(q)) == dump(j));
      CHECK(solve_lift_problem(q).result.ok());
    }
  }

  TEST_CASE("tree maps round trip") {
    Operad p = pointed_pair_operad();
    Tree t = T("r(a(),b)");
    for (const TreeMap& a : dendroidal_nerve_at(p, t))
      CHECK(tree_map_from_json(p, t, tree_map_to_json(p, t, a)) == a);
    CHECK_THROWS(tree_map_from_json(p, t, json{{"colors", json::object()}}));
  }
}

TEST_SUITE("cli") {
  TEST_CASE("chains of the two-vertex-over-root tree") {
    Run r = run({"chains", "--tree", "r(a(x,y),b(z))"});
    REQUIRE(r.code == 0);
    json j = r.report();
    CHECK(j["ok"] == true);
    CHECK(j["result"]["count"] == 2);
    CHECK(j["result"]["linear_extensions"] == 2);
  }

  TEST_CASE("output is byte stable") {
    std::vector<std::string> args = {"check", "--suite", "identities", "--count", "50", "--seed", "3"};
    CHECK(run(args).out == run(args).out);
    CHECK(run({"operad", "--name", "pointed-pair"}).out == run({"operad", "--name", "pointed-pair"}).out);
  }

  TEST_CASE("tree output") {
    Run dot = run({"tree", "--parse", "r(x,y)", "--dot"});
    CHECK(dot.code == 0);
    CHECK(dot.out.rfind("digraph", 0) == 0);
    Run js = run({"tree", "--parse", "r(y,a(c,b))"});
    CHECK(js.code == 0);
    CHECK(js.report()["result"]["text"] == "r(a(b,c),y)");
  }

  TEST_CASE("input errors exit with 2") {
    CHECK(run({"tree", "--parse", "r(x,"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"chains"}).code == 2);
    CHECK(run({"check", "--suite", "nope"}).code == 2);
    CHECK(run({"graft", "--tree", "r(x)", "--leaf", "r", "--with", "q(w)"}).code == 2);
    CHECK(run({"rectify", "--tree", "r(x)", "--operad", "{\"colors\":"}).code == 2);
    CHECK(run({"horn", "--tree", "r(a(x),y)", "--edge", "y"}).code == 2);
    Run r = run({"day", "--smcat", "max", "--a", "7"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown object") != std::string::npos);
  }

  TEST_CASE("help exits with 0") { CHECK(run({"--help"}).code == 0); }

  TEST_CASE("truncation from the environment") {
    ::setenv("DENDRO_TRUNCATION", "1", 1);
    Run a = run({"fiber", "--operad", "arrow"});
    Run b = run({"fiber", "--operad", "arrow", "--d", "3"});
    ::setenv("DENDRO_TRUNCATION", "many", 1);
    Run c = run({"fiber", "--operad", "arrow"});
    ::unsetenv("DENDRO_TRUNCATION");
    Run d = run({"fiber", "--operad", "arrow"});
    REQUIRE(a.code == 0);
    CHECK(a.report()["result"]["d"] == 1);
    CHECK(a.report()["result"]["fiber_counts"].size() == 2);
    CHECK(b.report()["result"]["d"] == 3);
    CHECK(c.code == 2);
    CHECK(d.report()["result"]["d"] == 2);
  }

  TEST_CASE("check suites") {
    for (const char* s : {"lemma-initiality", "chain-count", "hom-oracle", "sigma-free", "identities",
                          "day-representable", "fiber-lemma", "laxity", "envelope-comparison"}) {
      INFO(s);
      Run r = run({"check", "--suite", s, "--max-vertices", "3", "--seed", "7", "--count", "40"});
      CHECK(r.code == 0);
      CHECK(r.report()["ok"] == true);
    }
    Run l = run({"check", "--suite", "lift-certificates", "--max-vertices", "2", "--seed", "7"});
    CHECK(l.code == 0);
  }

  TEST_CASE("commands over trees") {
    CHECK(run({"subtrees", "--tree", "r(a(x),y)"}).report()["result"]["count"] == 7);
    CHECK(run({"subtrees", "--tree", "r(a(x),y)", "--root", "a"}).report()["result"]["count"] == 2);
    CHECK(run({"graft", "--tree", "r(x,y)", "--leaf", "x", "--with", "x(u,v)"}).code == 0);
    json h = run({"hom", "--source", "r", "--target", "r(x,y)", "--oracle"}).report();
    CHECK(h["result"]["count"] == 3);
    CHECK(h["result"]["operad_morphisms"] == 3);
    CHECK(run({"faces", "--tree", "r(a(x,y),b(z))"}).report()["result"]["count"] == 4);
    CHECK(run({"horn", "--tree", "r(a(x,y),b(z))", "--edge", "a"}).report()["result"]["count"] == 3);
    CHECK(run({"horn", "--tree", "r(a(x,y),b(z))", "--vertex", "b"}).report()["result"]["count"] == 3);
    CHECK(run({"horn", "--tree", "r(x,y)", "--corolla"}).report()["result"]["count"] == 2);
    json tr = run({"triple", "--tree", "r(a(x,y),b(z))", "--chain", "0", "--map", "0,1,3"}).report();
    CHECK(tr["ok"] == true);
    CHECK(run({"triple", "--tree", "r(x)", "--map", "0,0"}).code == 2);
    CHECK(run({"nerve", "--tree", "r(a(x,y),b(z))"}).report()["result"]["counts"] ==
          json::array({5, 9, 7, 2}));
  }

  TEST_CASE("algebraic commands") {
    CHECK(run({"rectify", "--tree", "r(a(x),y)"}).code == 0);
    CHECK(run({"rectify", "--tree", "r(x)", "--operad", "arrow", "--alpha",
               "{\"colors\":{\"r\":\"1\",\"x\":\"0\"},\"operations\":{\"r\":\"f\"}}"})
              .code == 0);
    CHECK(run({"rectify", "--tree", "r(x)", "--operad", "arrow"}).code == 2);
    json rn = run({"relnerve", "--tree", "r(a(x),y)"}).report();
    CHECK(rn["result"]["count"] == 1);
    CHECK(run({"envelope", "--operad", "arrow", "--length", "2"}).report()["result"]["objects"] == 7);
    json ec = run({"envelope", "--operad", "pointed-pair", "--tree", "r(e1,e2)", "--alpha",
                   "{\"colors\":{\"e1\":\"x\",\"e2\":\"y\",\"r\":\"z\"},\"operations\":{\"r\":\"mu\"}}",
                   "--color", "z"})
                  .report();
    CHECK(ec["result"]["isomorphic"] == false);
    CHECK(ec["result"]["reflection_isomorphic"] == true);
    CHECK(run({"day", "--smcat", "truncated-sum", "--a", "1", "--b", "1", "--c", "2"}).code == 0);
    CHECK(run({"laxity-check", "--smcat", "max", "--trials", "3"}).code == 0);
    std::string sm = temp_file("smcat.json", run({"smcat", "--name", "max"}).report()["result"].dump());
    CHECK(run({"laxity-check", "--smcat", sm, "--trials", "2"}).code == 0);
  }

  TEST_CASE("verification failures carry a replayable witness") {
    auto p = broken_problem();
    REQUIRE(p);
    std::string file = temp_file("problem.json", lift_problem_to_json(*p).dump());
    Run r = run({"lift", "--problem", file});
    REQUIRE(r.code == 1);
    json j = r.report();
    CHECK(j["ok"] == false);
    REQUIRE(j["witness"].contains("replay"));
    std::string witness = temp_file("witness.json", r.out);
    Run again = run({"--replay", witness});
    CHECK(again.code == 1);
    CHECK(again.out == r.out);
  }

  TEST_CASE("generated lifts") {
    Run r = run({"lift", "--generate", "--max-vertices", "2", "--seed", "5", "--emit"});
    REQUIRE(r.code == 0);
    json j = r.report();
    CHECK(j["result"]["count"] > 0);
    std::string file = temp_file("one.json", j["result"]["problems"][0]["problem"].dump());
    CHECK(run({"lift", "--problem", file}).code == 0);
  }
}
