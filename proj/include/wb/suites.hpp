#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wb/structure.hpp"
#include "wb/tree_models.hpp"

namespace wb {

struct Config {
  unsigned truncation = 6;
  std::size_t node_budget = 5'000'000;
  int brute_budget = 16;
  std::size_t samples = 0;  // 0: each suite uses its own default count
  std::uint64_t seed = 20240611;

  // Unknown keys are rejected so typos surface.
  static Config from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failures
  nlohmann::json details = nlohmann::json::object();
  double seconds = 0;

  bool ok() const { return failures == 0 && checks > 0; }
  void check(bool cond, const std::string& what);
  void fail(const std::string& what);
  std::string line() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();
// Throws Error for an unknown name.
SuiteResult run_suite(const std::string& name, const Config& cfg = {});

struct NamedTree {
  std::string name;
  LevelTree tree;
  std::size_t expected_rank;
};
// Path of height 4, root with two children, full binary of depth 2, 3-tooth comb.
std::vector<NamedTree> tree_corpus();

// Random relational structure with `size` points and up to `max_relations` relations of arity 1..3.
FinStructure random_structure(int size, int max_relations, std::uint64_t seed);

}  // namespace wb
