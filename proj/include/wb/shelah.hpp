#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wb/freegroup.hpp"
#include "wb/ordinal.hpp"
#include "wb/structure.hpp"

namespace wb {

// (word, j) listed inside the level interval [gamma(level), gamma(level+1)).
struct PairCode {
  unsigned level = 1;
  Word word;
  Ordinal j;
  bool operator==(const PairCode&) const = default;
  std::string str() const;
};

// Rank of a nonempty word among words of its level with the same head class.
std::uint64_t word_rank(const Word& w);
Word word_unrank(unsigned level, bool inverted_head, std::uint64_t rank);
std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

// G1 factors are f^beta (f^alpha)^-1 acting on even ordinals; G2 factors are
// (f^beta)^-1 f^alpha acting on all ordinals.
enum class Group { G1, G2 };

struct Factor {
  unsigned beta = 1;
  unsigned alpha = 1;
  bool operator==(const Factor&) const = default;
};

// factors[0] is applied first (it is the rightmost pair in written form).
struct CompositeWord {
  Group group = Group::G1;
  std::vector<Factor> factors;

  bool empty() const { return factors.empty(); }
  unsigned max_level() const;
  CompositeWord inverse() const;
  std::string str() const;
  bool operator==(const CompositeWord&) const = default;
};

// Rejects levels 0 and unreduced adjacent pairs.
CompositeWord make_composite(Group group, std::vector<Factor> factors);
// `f(3) F(1)` is a G1 word, `F(3) f(1)` a G2 word; `id` or empty is the identity of G1.
CompositeWord parse_composite(std::string_view text);

struct TrajectoryReport {
  std::vector<Ordinal> xi_seq;   // xi_0 .. xi_k
  std::vector<Ordinal> eta_seq;  // eta_1 .. eta_k
  std::vector<unsigned> b_leq;   // b_0 .. b_k
  unsigned mu = 0;
  std::vector<std::optional<PairCode>> forms;  // decoded xi_i when at level >= 1

  nlohmann::json to_json() const;
  std::string to_text() const;
};

struct StepCheck {
  std::size_t step = 0;
  std::optional<unsigned> level;
  bool bound_ok = true;        // level(xi_i) < max(b_i + 1, delta)
  bool disjunction_ok = true;  // beta_i <= b_{i-1} or alpha_i <= b_{i-1}
  bool shape_ok = true;        // decoded word sits at level b_i with head s(b_i, beta_i)
};

struct EscapeReport {
  CompositeWord word;  // after the optional flip to the inverse
  bool flipped = false;
  unsigned delta = 0;
  TrajectoryReport trajectory;
  std::vector<StepCheck> steps;
  std::optional<unsigned> final_level;
  bool escapes = false;
  bool ok = false;

  nlohmann::json to_json() const;
};

struct Membership {
  bool member = false;
  CompositeWord witness;
  std::vector<Ordinal> tuple;  // i_eps for the sampled even eps
};

class ShelahModel {
 public:
  explicit ShelahModel(unsigned truncation = 6);
  unsigned truncation() const { return n_; }
  Ordinal bound() const { return gamma(n_); }

  Ordinal xi(unsigned alpha, const Word& tau, const Ordinal& j) const;
  std::optional<PairCode> decode(unsigned alpha, const Ordinal& x) const;

  Ordinal f_apply(unsigned alpha, const Ordinal& e) const;
  Ordinal f_preimage(unsigned alpha, const Ordinal& d) const;

  Ordinal apply(const CompositeWord& g, const Ordinal& x) const;
  TrajectoryReport apply_composite(const CompositeWord& g, const Ordinal& x0, unsigned mu = 0) const;

  // Empty string when admissible, otherwise the reason.
  std::string escape_admissibility(const CompositeWord& g, unsigned delta) const;
  EscapeReport gamma_claim_witness(const CompositeWord& g, unsigned delta) const;

  CompositeWord rewrite_between_groups(const CompositeWord& g, Group target,
                                       const std::vector<Ordinal>& sample) const;
  Membership r_delta_member(int k, unsigned prefix_len, const CompositeWord& h) const;

 private:
  void check_below_bound(const Ordinal& x, const char* what) const;
  unsigned n_;
};

// One binary relation "R" carrying every relation of M; automorphism groups agree.
FinStructure encode_binary(const FinStructure& M);

}  // namespace wb
