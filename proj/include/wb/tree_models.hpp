#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wb/structure.hpp"

namespace wb {

// Fixed-width bit vector, the carrier of GF(2) branch vectors.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
  void set(std::size_t i, bool v = true);
  bool none() const;
  std::size_t count() const;
  std::optional<std::size_t> lowest() const;
  Bits& operator^=(const Bits& o);
  friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
  bool operator==(const Bits& o) const = default;
  bool operator<(const Bits& o) const { return w_ < o.w_; }
  std::string str() const;  // '0'/'1' per bit, index order

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Tree given level by level. Nodes are numbered level-major in the listed order.
class LevelTree {
 public:
  LevelTree(std::vector<std::vector<std::string>> levels, std::map<std::string, std::string> parent);

  int height() const { return static_cast<int>(levels_.size()); }
  const std::vector<std::vector<std::string>>& levels() const { return levels_; }
  const std::map<std::string, std::string>& parents() const { return parent_names_; }
  std::size_t node_count() const { return level_of_.size(); }
  int level(std::size_t node) const { return level_of_[node]; }
  int parent(std::size_t node) const { return parent_[node]; }
  std::size_t node_id(int level, std::size_t pos) const { return offset_[level] + pos; }
  const std::string& name(std::size_t node) const { return names_[node]; }
  // Nodes at level `beta` lying above `node`.
  std::vector<std::size_t> descendants_at(std::size_t node, int beta) const;

 private:
  std::vector<std::vector<std::string>> levels_;
  std::map<std::string, std::string> parent_names_;
  std::vector<std::size_t> offset_;
  std::vector<int> level_of_, parent_;
  std::vector<std::string> names_;
};

LevelTree tree_from_json(const nlohmann::json& j);
nlohmann::json tree_to_json(const LevelTree& t);

// One vector per top-level node: the nodes on its path to the root.
std::vector<Bits> branch_vectors(const LevelTree& t);
// Zeroes every level >= alpha.
Bits restrict_to(const LevelTree& t, const Bits& s, int alpha);

class GF2Span {
 public:
  explicit GF2Span(const std::vector<Bits>& vectors, std::size_t width);
  std::size_t rank() const { return basis_.size(); }
  const std::vector<Bits>& basis() const { return basis_; }
  bool contains(Bits v) const;
  // All 2^rank members; element i is the sum of basis vectors selected by the bits of i.
  std::vector<Bits> elements(std::size_t limit = 1u << 20) const;

 private:
  std::size_t width_;
  std::vector<Bits> basis_;
  std::vector<std::size_t> pivots_;
};

GF2Span span(const std::vector<Bits>& vectors);
GF2Span tree_span(const LevelTree& t);

// Parity law between levels alpha < beta.
bool star_check(const LevelTree& t, const Bits& s, int alpha, int beta);

struct TranslationModel {
  FinStructure structure;
  std::vector<Bits> points;  // point i is points[i]
  std::vector<int> lengths;  // segment length of each point (M only)
};

// Universe = span members; relation per member s: (x, x + s).
TranslationModel build_m_prime(const LevelTree& t, std::size_t budget = 64);
// Universe = distinct restrictions of span members to levels < a, a = 0..height; relation "F" for
// proper initial segments and one translation relation per point on equal-length pairs.
TranslationModel build_m(const LevelTree& t, std::size_t budget = 256);

struct CorrespondenceReport {
  std::size_t rank = 0;
  std::size_t span_size = 0;
  std::size_t aut_m_prime = 0;
  std::size_t aut_m = 0;
  std::size_t star_checks = 0;
  bool ok = false;
  std::vector<std::string> failures;
  nlohmann::json to_json() const;
};

CorrespondenceReport correspondence_report(const LevelTree& t, int brute_budget = 64);

struct Prop15Report {
  std::vector<std::size_t> level_sizes;
  std::size_t full_branches = 0;
  std::size_t aut_count = 0;
  std::size_t stranded = 0;      // nodes whose restriction is not a node one level down
  std::size_t linked_full = 0;   // full branches linked to the root through parents
  bool matched = false;          // top-level nodes equal AUT(M) as sets
  bool ok = false;
  nlohmann::json to_json() const;
};

// Level a holds the automorphisms of the substructure on the first a points of `order`.
Prop15Report prop15_tree(const FinStructure& M, const std::vector<int>& order, int brute_budget = 16);

}  // namespace wb
