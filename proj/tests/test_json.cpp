#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atemp/generators.hpp"
#include "atemp/json_io.hpp"

using namespace atemp;

TEST_CASE("round trips through json") {
  Rng rng(601);
  for (int it = 0; it < 20; ++it) {
    FinSet s = rand_finset(rng, 5, "x");
    CHECK(finset_from_json(to_json(s)) == s);

    FinFun f = rand_finfun(rng, s, rand_finset(rng, 4, "y"));
    CHECK(finfun_from_json(to_json(f)) == f);

    FinRel r = graph_rel(f);
    CHECK(finrel_from_json(to_json(r)) == r);

    Obj src = rand_obj(rng, 3, "a"), dst = rand_obj(rng, 3, "b");
    Learner m = rand_learner(rng, src, dst, 3);
    CHECK(learner_from_json(to_json(m)) == m);

    IntLearner im = rand_intlearner(rng, src, dst, 3);
    CHECK(intlearner_from_json(to_json(im)) == im);
  }
}

TEST_CASE("relation pairs print sorted") {
  FinSet d({"b", "a"});
  FinSet c({"y", "x"});
  FinRel r(d, c, {{0, 0}, {1, 1}, {0, 1}});
  auto pairs = to_json(r)["pairs"];
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0][0] == "a");
  CHECK(pairs[0][1] == "x");
  CHECK(pairs[1][0] == "b");
  CHECK(pairs[2][1] == "y");
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(finset_from_json(json::parse("{}")), Error);
  CHECK_THROWS_AS(finset_from_json(json::parse(R"({"elements":["x","x"]})")), Error);
  CHECK_THROWS_AS(finfun_from_json(json::parse(
                      R"({"dom":{"elements":["x"]},"cod":{"elements":["y"]},"map":{}})")),
                  Error);
  CHECK_THROWS(learner_from_json(json::parse(R"({"A":{"elements":["x"]}})")));
}

TEST_CASE("witness formatting") {
  FinSet p = FinSet::canonical("p", 2);
  Witness w{WitnessKind::bijection, FinFun::identity(p), std::nullopt, std::nullopt};
  json j = to_json(w);
  CHECK(j["kind"] == "bijection");
  std::string text = format_witness(w);
  CHECK(text.find("p0 -> p0") != std::string::npos);
}
