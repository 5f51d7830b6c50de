#include <doctest.h>

#include "wb/error.hpp"
#include "wb/suites.hpp"

using namespace wb;

TEST_CASE("config parsing") {
  Config c = Config::from_json({{"seed", 7}, {"truncation", 8}});
  CHECK(c.seed == 7u);
  CHECK(c.truncation == 8u);
  CHECK(c.node_budget == Config{}.node_budget);
  CHECK(Config::from_json(c.to_json()).to_json() == c.to_json());
  CHECK_THROWS_AS(Config::from_json({{"sead", 7}}), Error);
  CHECK_THROWS_AS(Config::from_json({{"truncation", 0}}), Error);
  CHECK_THROWS_AS(Config::from_json({{"node_budget", -4}}), Error);
}

TEST_CASE("every suite passes on the default config") {
  for (const auto& name : suite_names()) {
    SuiteResult r = run_suite(name);
    CHECK_MESSAGE(r.ok(), r.line());
    CHECK(r.name == name);
  }
  CHECK_THROWS_AS(run_suite("nope"), Error);
}

TEST_CASE("fixed seed reproduces results bit for bit") {
  Config c;
  c.seed = 99;
  for (const char* name : {"lemmaA", "gamma", "prop15"}) {
    auto a = run_suite(name, c).to_json();
    auto b = run_suite(name, c).to_json();
    a.erase("seconds");
    b.erase("seconds");
    CHECK(a == b);
  }
}

TEST_CASE("sample override changes the work done") {
  Config small;
  small.samples = 50;
  Config big;
  big.samples = 500;
  CHECK(run_suite("ordinal", small).checks < run_suite("ordinal", big).checks);
}

TEST_CASE("result bookkeeping keeps the first messages") {
  SuiteResult r;
  r.name = "x";
  CHECK_FALSE(r.ok());
  for (int i = 0; i < 30; ++i) r.check(i % 2 == 0, "odd " + std::to_string(i));
  CHECK(r.checks == 30);
  CHECK(r.failures == 15);
  CHECK(r.messages.size() == 10);
  CHECK(r.messages.front() == "odd 1");
  CHECK(r.line().find("x: FAIL") == 0);
}

TEST_CASE("corpus and random structures") {
  auto corpus = tree_corpus();
  REQUIRE(corpus.size() == 4);
  for (const auto& t : corpus) CHECK(tree_span(t.tree).rank() == t.expected_rank);
  CHECK(structure_to_json(random_structure(4, 3, 5)) == structure_to_json(random_structure(4, 3, 5)));
  FinStructure s = random_structure(5, 3, 11);
  CHECK(s.size == 5);
  CHECK(s.relations.size() <= 3);
}
