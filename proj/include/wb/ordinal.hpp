#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wb {

// One Cantor normal form summand: w^exp * coeff.
struct Term {
  std::uint32_t exp = 0;
  std::uint64_t coeff = 1;
  bool operator==(const Term&) const = default;
};

// Ordinal below w^w. Terms have strictly decreasing exponents and
// coefficients >= 1; the empty list is 0.
class Ordinal {
 public:
  Ordinal() = default;
  Ordinal(std::uint64_t n);  // NOLINT: finite ordinals convert implicitly

  static Ordinal omega_pow(std::uint32_t exp, std::uint64_t coeff = 1);
  // Builds from terms, rejecting anything not in normal form.
  static Ordinal from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const { return terms_.empty() || terms_.front().exp == 0; }
  bool is_limit() const { return !terms_.empty() && terms_.back().exp > 0; }
  bool is_successor() const { return !terms_.empty() && terms_.back().exp == 0; }
  std::uint64_t finite_part() const;
  // Coefficient of w^e, zero when absent.
  std::uint64_t coeff(std::uint32_t e) const;
  // Exponent of the leading term; 0 for the ordinal 0.
  std::uint32_t degree() const { return terms_.empty() ? 0 : terms_.front().exp; }

  bool operator==(const Ordinal&) const = default;
  std::strong_ordering operator<=>(const Ordinal& o) const;

  std::string str() const;

 private:
  std::vector<Term> terms_;
};

enum class Order { LT, EQ, GT };
enum class Parity { Even, Odd };

Order cmp(const Ordinal& a, const Ordinal& b);
Ordinal add(const Ordinal& a, const Ordinal& b);
// The unique x with add(a, x) == b.
Ordinal left_sub(const Ordinal& a, const Ordinal& b);
Parity parity(const Ordinal& a);
inline bool is_even(const Ordinal& a) { return parity(a) == Parity::Even; }
// w * 2^n.
Ordinal gamma(unsigned n);
// The n with gamma(n) <= e < gamma(n+1); nullopt below w.
std::optional<unsigned> level_of(const Ordinal& e);

Ordinal parse_ordinal(std::string_view text);
std::string to_string(Order o);
std::string to_string(Parity p);

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }

}  // namespace wb
