#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace wb {

using Tuple = std::vector<int>;

struct Relation {
  std::string name;
  int arity = 2;
  std::vector<Tuple> tuples;  // sorted, deduplicated
};

// Finite relational structure on the universe 0..size-1.
struct FinStructure {
  int size = 0;
  std::vector<Relation> relations;

  // Sorts and deduplicates tuples; throws on arity or range violations.
  void normalize();
  const Relation* find(const std::string& name) const;
  bool holds(const std::string& name, const Tuple& t) const;
  // Substructure on the points `keep`, renumbered in the given order.
  FinStructure induced(const std::vector<int>& keep) const;

  bool operator==(const FinStructure&) const = default;
};

FinStructure structure_from_json(const nlohmann::json& j);
nlohmann::json structure_to_json(const FinStructure& s);

FinStructure pure_set(int n);
// One equivalence relation "E" with the given class sizes, classes laid out consecutively.
FinStructure equivalence_classes(const std::vector<int>& sizes);
// Strict linear order "<" on n points.
FinStructure strict_order(int n);

// Injective partial map stored as a dense pair of arrays.
class PartialMap {
 public:
  PartialMap() = default;
  PartialMap(int dom_size, int ran_size) : fwd_(dom_size, -1), bwd_(ran_size, -1) {}

  int dom_size() const { return static_cast<int>(fwd_.size()); }
  int ran_size() const { return static_cast<int>(bwd_.size()); }
  int operator()(int a) const { return fwd_[a]; }
  int preimage(int b) const { return bwd_[b]; }
  bool in_dom(int a) const { return fwd_[a] >= 0; }
  bool in_ran(int b) const { return bwd_[b] >= 0; }
  std::size_t count() const { return count_; }

  // False (and no change) if the pair would break functionality or injectivity.
  bool add(int a, int b);
  PartialMap with(int a, int b) const;
  PartialMap inverse() const;
  // Sorted (a, b) pairs.
  std::vector<std::pair<int, int>> pairs() const;
  // True when the union of the two maps is still an injective partial function.
  bool compatible(const PartialMap& o) const;
  bool extends(const PartialMap& smaller) const;

  bool operator==(const PartialMap& o) const { return fwd_ == o.fwd_ && bwd_ == o.bwd_; }
  bool operator<(const PartialMap& o) const { return fwd_ < o.fwd_; }

  std::string str() const;

 private:
  std::vector<int> fwd_, bwd_;
  std::size_t count_ = 0;
};

nlohmann::json map_to_json(const PartialMap& m);

// Every tuple with all entries in dom(pi) is in R^A iff its image is in R^B.
// Relations missing from one side count as empty there.
bool is_partial_iso(const FinStructure& A, const FinStructure& B, const PartialMap& pi);

struct AutomorphismOptions {
  int size_budget = 16;
  bool degree_pruning = true;
  std::size_t max_results = SIZE_MAX;
};

// Automorphisms of M extending `fixed` (a partial map M -> M), as image vectors.
std::vector<std::vector<int>> automorphisms_extending(const FinStructure& M, const PartialMap& fixed,
                                                      const AutomorphismOptions& opt = {});
std::vector<std::vector<int>> brute_automorphisms(const FinStructure& M,
                                                  const AutomorphismOptions& opt = {});
bool extends_to_automorphism(const FinStructure& M, const PartialMap& pi, int size_budget = 64);

}  // namespace wb
