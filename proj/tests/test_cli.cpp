#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "wb/games.hpp"
#include "wb/linear_orders.hpp"
#include "wb/shelah.hpp"
#include "wb/suites.hpp"
#include "wb/tree_models.hpp"

using namespace wb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return std::string(WB_DATA_DIR) + "/" + rel; }
std::string golden(const std::string& name) { return std::string(WB_DATA_DIR) + "/../tests/golden/" + name; }

fs::path temp_file(const std::string& name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / ("wb_test_" + name);
  std::ofstream(p) << body;
  return p;
}

FinStructure load(const std::string& rel) {
  std::ifstream f(data(rel));
  return structure_from_json(nlohmann::json::parse(f));
}

}  // namespace

TEST_CASE("ordinal commands match the library") {
  Run r = run({"ord", "add", "w*2+3", "w+1"});
  CHECK(r.code == 0);
  CHECK(r.out == add(parse_ordinal("w*2+3"), parse_ordinal("w+1")).str() + "\n");
  CHECK(r.out == "w*3+1\n");
  CHECK(run({"ord", "gamma", "3"}).out == "w*8\n");
  CHECK(run({"ord", "cmp", "5", "w"}).out == "LT\n");
  CHECK(run({"ord", "level", "w*5+7"}).out == "2\n");
  Run bad = run({"ord", "sub", "w", "3"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("subtrahend exceeds minuend") != std::string::npos);
}

TEST_CASE("word commands") {
  CHECK(run({"word", "validate", "s(1,1)"}).code == 0);
  Run t3 = run({"word", "validate", "S(1,1)"});
  CHECK(t3.code == 1);
  CHECK(t3.out.find("T3") != std::string::npos);
  Run l = run({"word", "lmul", "s(1,0)", "s(1,1)", "--inverse"});
  CHECK(l.out == lmul(sym(1, 0), parse_word("s(1,1)"), true).str() + "\n");
}

TEST_CASE("listing commands match the library") {
  ShelahModel m(6);
  CHECK(run({"shelah", "xi", "1", "s(1,1)", "1"}).out == "w*2\n");
  CHECK(run({"shelah", "decode", "1", "w*2"}).out == "s(1,1) ; 1\n");
  CHECK(run({"shelah", "f", "1", "w*7+9"}).out == m.f_apply(1, parse_ordinal("w*7+9")).str() + "\n");
  CHECK(run({"shelah", "preimage", "2", "w*6"}).out == m.f_preimage(2, parse_ordinal("w*6")).str() + "\n");
  Run w = run({"shelah", "gamma-witness", "f(3) F(1)", "3"});
  CHECK(w.code == 0);
  CHECK(nlohmann::json::parse(w.out) == m.gamma_claim_witness(parse_composite("f(3) F(1)"), 3).to_json());
  Run tr = run({"shelah", "trajectory", "f(3) F(1)", "w*5+2", "--json"});
  CHECK(nlohmann::json::parse(tr.out) == m.apply_composite(parse_composite("f(3) F(1)"), parse_ordinal("w*5+2")).to_json());
  Run rw = run({"--truncation", "8", "shelah", "rewrite", "f(2) F(1)", "--to", "G2", "--sample", "2,4,w"});
  CHECK(rw.code == 0);
  CHECK(rw.out == ShelahModel(8).rewrite_between_groups(parse_composite("f(2) F(1)"), Group::G2, {2, 4, parse_ordinal("w")}).str() + "\n");
  CHECK(run({"shelah", "xi", "0", "s(0,0)", "1"}).code == 2);
}

TEST_CASE("game commands match the solvers") {
  Run leq = run({"game", "solve", "--kind", "leq", "--rounds", "2", "-A", data("prop6_A.json"), "-B", data("prop6_B.json")});
  CHECK(leq.code == 0);
  CHECK(leq.out == "Forall\n");
  Run pre = run({"game", "solve", "--kind", "preceq", "--rounds", "1", "-A", data("prop6_A.json"), "-B", data("prop6_B.json")});
  CHECK(pre.out == "Exists\n");
  Run ef = run({"game", "solve", "--kind", "ef", "--rounds", "3", "-A", data("pure2.json"), "-B", data("pure3.json")});
  CHECK(ef.out == to_string(ef_winner(load("pure2.json"), load("pure3.json"), 3)) + "\n");
  Run sp = run({"game", "solve", "--kind", "splitting", "--rounds", "1", "-A", data("order3.json")});
  CHECK(sp.out == "Forall\n");
  CHECK(run({"game", "solve", "--kind", "chess", "--rounds", "1", "-A", data("pure2.json")}).code == 2);
}

TEST_CASE("interactive play") {
  Run r = run({"game", "play", "--kind", "ef", "--rounds", "5", "-A", data("pure2.json"), "-B", data("pure3.json")},
              "B 0\nB 1\nB 2\n");
  CHECK(r.code == 0);
  CHECK(r.out.find("winner Forall") != std::string::npos);
}

TEST_CASE("order commands match the library") {
  CHECK(run({"eta", "iso", "L9i", "w", "[w+3, 5]"}).out == "[3, 5]\n");
  CHECK(run({"eta", "iso", "L9iii", "w", "0:[4, 1]"}).out == iso_times_rev(parse_ordinal("w")).forward(parse_order_point("0:[4, 1]")).str() + "\n");
  CHECK(run({"eta", "iso", "L9iii", "w", "[5, 1]", "--inverse"}).out == "0:[4, 1]\n");
  CHECK(run({"eta", "compare", "timesrev(eta, w)", "3:[]", "1:[]"}).out == "LT\n");
  CHECK(run({"eta", "chain-iso", "P11", "0", "1", "0:[w]", "--fix", "0:[w]"}).out == "0:[w]\n");
  CHECK(run({"eta", "witness", "P11descending", "3"}).out == "1:1:[]\n1:3:[]\n1:5:[]\n");
}

TEST_CASE("tree commands") {
  Run span = run({"tree", "span", data("trees/full_binary_d2.json")});
  CHECK(nlohmann::json::parse(span.out)["rank"] == 4);
  Run rep = run({"tree", "report", data("trees/root_two_children.json")});
  CHECK(rep.code == 0);
  auto j = nlohmann::json::parse(rep.out);
  CHECK(j["aut_m"] == 4);
  CHECK(j["aut_m_prime"] == 4);
  Run p15 = run({"tree", "prop15", data("pure2.json"), "--order", "1,0"});
  CHECK(p15.code == 0);
  CHECK(nlohmann::json::parse(p15.out)["full_branches"] == 2);
  Run build = run({"tree", "build", data("trees/path_h4.json"), "--model", "mprime"});
  CHECK(nlohmann::json::parse(build.out)["structure"]["size"] == 2);
}

TEST_CASE("verify is reproducible and honours the config chain") {
  Run a = run({"verify", "--suite", "lemmaA", "--samples", "10000"});
  CHECK(a.code == 0);
  Run j1 = run({"--seed", "9", "verify", "--suite", "ordinal", "--suite", "prop15", "--json"});
  Run j2 = run({"--seed", "9", "verify", "--suite", "ordinal", "--suite", "prop15", "--json"});
  CHECK(j1.code == 0);
  CHECK(j1.out == j2.out);

  fs::path cfg = temp_file("config.json", R"({"seed": 5, "samples": 20})");
  setenv("WB_CONFIG", cfg.c_str(), 1);
  Run env = run({"verify", "--suite", "ordinal", "--json"});
  Config c;
  c.seed = 5;
  c.samples = 20;
  auto expect = run_suite("ordinal", c).to_json();
  expect.erase("seconds");
  CHECK(nlohmann::json::parse(env.out) == nlohmann::json::array({expect}));
  // a flag beats the file
  Run flag = run({"--seed", "6", "verify", "--suite", "ordinal", "--json"});
  CHECK_FALSE(flag.out == env.out);
  fs::path bad_cfg = temp_file("bad_config.json", R"({"seeds": 5})");
  setenv("WB_CONFIG", bad_cfg.c_str(), 1);
  CHECK(run({"verify", "--suite", "ordinal"}).code == 2);
  unsetenv("WB_CONFIG");

  CHECK(run({"verify", "--suite", "nope"}).code == 2);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  fs::path broken = temp_file("broken.json", "{\n  \"size\": 2,\n  oops\n}\n");
  Run r = run({"game", "solve", "--kind", "ef", "--rounds", "1", "-A", broken.string(), "-B", broken.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(run({"tree", "span", "/nonexistent/tree.json"}).code == 2);
}

TEST_CASE("serve mode over streams") {
  Run r = run({"serve"}, "{\"id\":1,\"op\":\"ping\"}\n\nnot json\n");
  std::istringstream lines(r.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(nlohmann::json::parse(first) == nlohmann::json{{"id", 1}, {"ok", true}, {"value", "pong"}});
  auto err = nlohmann::json::parse(second);
  CHECK(err["id"].is_null());
  CHECK(err["ok"] == false);
}

TEST_CASE("golden serve transcripts replay bit-identically") {
  for (const char* name : {"ef_orders.ndjson", "splitting_pure3.ndjson", "leq_prop6.ndjson", "ef_pure2_pure3.ndjson"}) {
    CAPTURE(name);
    std::ifstream f(golden(name));
    REQUIRE(f.good());
    ServeEndpoint endpoint;
    std::string request, response;
    int pairs = 0;
    nlohmann::json last_state, replayed;
    while (std::getline(f, request) && std::getline(f, response)) {
      std::string got = endpoint.handle_line(request);
      CHECK(got == response);
      ++pairs;
      auto req = nlohmann::json::parse(request);
      auto resp = nlohmann::json::parse(got);
      if (req["op"] == "replay")
        replayed = resp["value"];
      else if ((req["op"] == "move" || req["op"] == "choose") && resp["ok"] == true)
        last_state = resp["value"];
    }
    CHECK(pairs >= 5);
    if (!replayed.is_null()) CHECK(replayed["map"] == last_state["map"]);
  }
}

TEST_CASE("scripted five-round session on two versus three points") {
  ServeEndpoint endpoint;
  nlohmann::json setup{{"kind", "ef"}, {"A", structure_to_json(pure_set(2))}, {"B", structure_to_json(pure_set(3))}, {"rounds", 5}};
  auto start = endpoint.handle({{"id", "a"}, {"op", "start"}, {"args", setup}});
  REQUIRE(start["ok"] == true);
  std::string tok = start["value"]["session"];
  nlohmann::json state;
  for (int b = 0; b < 3; ++b) {
    auto r = endpoint.handle({{"id", b}, {"op", "move"}, {"args", {{"session", tok}, {"side", "B"}, {"point", b}}}});
    REQUIRE(r["ok"] == true);
    state = r["value"];
    if (state["over"] == true) break;
  }
  CHECK(state["winner"] == "Forall");
  auto after = endpoint.handle({{"id", 9}, {"op", "move"}, {"args", {{"session", tok}, {"side", "A"}, {"point", 0}}}});
  CHECK(after["ok"] == false);
  auto solve = endpoint.handle({{"id", 10}, {"op", "solve"}, {"args", setup}});
  CHECK(solve["value"]["winner"] == "Forall");
  CHECK(endpoint.handle({{"id", 11}, {"op", "end"}, {"args", {{"session", tok}}}})["ok"] == true);
  CHECK(endpoint.handle({{"id", 12}, {"op", "state"}, {"args", {{"session", tok}}}})["ok"] == false);
}
