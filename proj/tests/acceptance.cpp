// One PASS/FAIL line per primary acceptance criterion. Exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "wb/suites.hpp"

using namespace wb;
using nlohmann::json;

namespace {

struct Criterion {
  std::string label;
  std::string suite;
  double time_limit_s;
  // Extra pinned requirements on the suite details; returns an empty string when met.
  std::function<std::string(const json&)> pinned;
};

std::string at_least(const json& d, const char* key, std::size_t min) {
  if (!d.contains(key) || d[key].get<std::size_t>() < min)
    return std::string(key) + " below " + std::to_string(min);
  return {};
}

std::vector<Criterion> criteria() {
  return {
      {"word products: exhaustive levels <= 3, length <= 5, 10^4 random at levels <= 5, no collisions", "lemmaA", 10,
       [](const json& d) {
         auto e = at_least(d, "random_pairs", 10000);
         return e.empty() ? at_least(d, "exhaustive_products", 1) : e;
       }},
      {"f maps at truncation 5, levels 1..3, 500 samples each: injective, onto evens, identity on the low block, intervals kept",
       "f_alpha", 10,
       [](const json& d) {
         if (d.value("truncation", 0) != 5) return std::string("truncation is not 5");
         return at_least(d, "samples_per_alpha", 500);
       }},
      {"escape witness on 100 random reduced composites (levels 1..5): bound, disjunction, shape, escape", "gamma", 10,
       [](const json& d) { return at_least(d, "words", 100); }},
      {"group rewriting on 100 random words: pointwise equality both ways", "rewrite", 10,
       [](const json& d) { return at_least(d, "words", 100); }},
      {"games: pure-set closed form, class-shape separation, composed split, split yield on 8 points", "games", 10,
       [](const json& d) -> std::string {
         if (auto e = at_least(d, "closed_form_instances", 150); !e.empty()) return e;
         if (auto e = at_least(d, "compose_leaves", 2); !e.empty()) return e;
         const auto& leaves = d.at("pure8_leaves");
         if (leaves.size() < 4) return "split yield missing rounds";
         for (std::size_t k = 0; k < leaves.size(); ++k)
           if (leaves[k].get<std::size_t>() < (std::size_t{1} << k)) return "split yield below 2^" + std::to_string(k);
         return {};
       }},
      {"lexicographic orders: isomorphism grids with 10^4 pair and round-trip checks, identity on C, witnesses k <= 10",
       "orders", 10, [](const json& d) { return at_least(d, "samples_per_map", 10000); }},
      {"tree corpus: automorphism counts equal 2^rank for both models, translations matched, parity law, encoding",
       "trees", 60,
       [](const json& d) -> std::string {
         const auto& trees = d.at("trees");
         if (trees.size() != 4) return "corpus is not four trees";
         for (const auto& [name, t] : trees.items()) {
           std::size_t want = std::size_t{1} << t.at("rank").get<std::size_t>();
           for (const char* key : {"span_size", "aut_m_prime", "aut_m", "encoded_automorphisms"})
             if (t.at(key).get<std::size_t>() != want) return name + ": " + key + " differs from 2^rank";
           if (!t.at("ok").get<bool>()) return name + ": report not ok";
         }
         return {};
       }},
      {"partial automorphism trees on 50 random structures (<= 5 points): branches = automorphisms", "prop15", 10,
       [](const json& d) { return at_least(d, "structures", 50); }},
      {"ordinal kernel: associativity, subtraction round trip, recurrence on 10^4 instances", "ordinal", 10,
       [](const json& d) { return at_least(d, "samples", 10000); }},
  };
}

}  // namespace

int main() {
  Config cfg;  // fixed default seed
  int failed = 0;
  for (const auto& c : criteria()) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r;
    std::string why;
    try {
      r = run_suite(c.suite, cfg);
    } catch (const std::exception& e) {
      why = std::string("suite threw: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (why.empty() && r.failures > 0) why = std::to_string(r.failures) + " failures, first: " + r.messages.front();
    if (why.empty() && r.checks == 0) why = "no checks ran";
    if (why.empty()) {
      try {
        why = c.pinned(r.details);
      } catch (const std::exception& e) {
        why = std::string("details malformed: ") + e.what();
      }
    }
    if (why.empty() && secs > c.time_limit_s) why = "took longer than the limit";
    bool ok = why.empty();
    failed += ok ? 0 : 1;
    std::printf("%s  [%s] %s  checks=%zu failures=%zu time=%.2fs/%.0fs%s%s\n", ok ? "PASS" : "FAIL", c.suite.c_str(),
                c.label.c_str(), r.checks, r.failures, secs, c.time_limit_s, ok ? "" : "  -- ", why.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria().size()) - failed, criteria().size());
  return failed == 0 ? 0 : 1;
}
