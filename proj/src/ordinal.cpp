#include "wb/ordinal.hpp"

#include <bit>
#include <cctype>

#include "wb/error.hpp"

namespace wb {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("ordinal coefficient overflow");
  return r;
}

}  // namespace

Ordinal::Ordinal(std::uint64_t n) {
  if (n) terms_.push_back({0, n});
}

Ordinal Ordinal::omega_pow(std::uint32_t exp, std::uint64_t coeff) {
  Ordinal o;
  if (coeff) o.terms_.push_back({exp, coeff});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0) throw Error("zero coefficient in normal form");
    if (i && terms[i].exp >= terms[i - 1].exp) throw Error("exponents must strictly decrease");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

std::uint64_t Ordinal::finite_part() const {
  return is_successor() ? terms_.back().coeff : 0;
}

std::uint64_t Ordinal::coeff(std::uint32_t e) const {
  for (const auto& t : terms_)
    if (t.exp == e) return t.coeff;
  return 0;
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& o) const {
  std::size_t n = std::min(terms_.size(), o.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Term& a = terms_[i];
    const Term& b = o.terms_[i];
    if (a.exp != b.exp) return a.exp <=> b.exp;
    if (a.coeff != b.coeff) return a.coeff <=> b.coeff;
  }
  return terms_.size() <=> o.terms_.size();
}

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += '+';
    if (t.exp == 0) {
      out += std::to_string(t.coeff);
      continue;
    }
    out += 'w';
    if (t.exp > 1) out += '^' + std::to_string(t.exp);
    if (t.coeff > 1) out += '*' + std::to_string(t.coeff);
  }
  return out;
}

Order cmp(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  if (c < 0) return Order::LT;
  if (c > 0) return Order::GT;
  return Order::EQ;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const auto& bt = b.terms();
  std::uint32_t lead = bt.front().exp;
  std::vector<Term> out;
  std::uint64_t carry = 0;
  for (const auto& t : a.terms()) {
    if (t.exp > lead)
      out.push_back(t);
    else if (t.exp == lead)
      carry = t.coeff;
    else
      break;  // absorbed
  }
  out.push_back({lead, checked_add(carry, bt.front().coeff)});
  out.insert(out.end(), bt.begin() + 1, bt.end());
  return Ordinal::from_terms(std::move(out));
}

Ordinal left_sub(const Ordinal& a, const Ordinal& b) {
  if (a > b) throw Error("subtrahend exceeds minuend");
  const auto& at = a.terms();
  const auto& bt = b.terms();
  std::size_t i = 0;
  while (i < at.size() && at[i] == bt[i]) ++i;
  if (i == at.size()) return Ordinal::from_terms({bt.begin() + i, bt.end()});
  std::vector<Term> out;
  if (at[i].exp == bt[i].exp) {
    out.push_back({bt[i].exp, bt[i].coeff - at[i].coeff});
    out.insert(out.end(), bt.begin() + i + 1, bt.end());
  } else {
    out.assign(bt.begin() + i, bt.end());
  }
  return Ordinal::from_terms(std::move(out));
}

Parity parity(const Ordinal& a) {
  return (a.finite_part() & 1) ? Parity::Odd : Parity::Even;
}

Ordinal gamma(unsigned n) {
  if (n > 62) throw Error("gamma(" + std::to_string(n) + ") overflows the coefficient width");
  return Ordinal::omega_pow(1, std::uint64_t{1} << n);
}

std::optional<unsigned> level_of(const Ordinal& e) {
  if (e.degree() >= 2) throw Error("outside truncation: " + e.str() + " >= w^2");
  std::uint64_t c = e.coeff(1);
  if (c == 0) return std::nullopt;
  return static_cast<unsigned>(std::bit_width(c) - 1);
}

namespace {

struct OrdinalParser {
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("ordinal literal '" + std::string(s) + "' at column " + std::to_string(pos + 1) +
                ": " + msg);
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::uint64_t nat() {
    skip();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected a number");
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      std::uint64_t d = static_cast<std::uint64_t>(s[pos] - '0');
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, d, &v)) fail("number too large");
      ++pos;
    }
    return v;
  }
  Ordinal term() {
    if (eat('w')) {
      std::uint64_t e = 1, c = 1;
      if (eat('^')) e = nat();
      if (eat('*')) c = nat();
      if (e > UINT32_MAX) fail("exponent too large");
      return Ordinal::omega_pow(static_cast<std::uint32_t>(e), c);
    }
    return Ordinal(nat());
  }
  Ordinal parse() {
    Ordinal acc = term();
    while (eat('+')) acc = add(acc, term());
    skip();
    if (pos != s.size()) fail("unexpected character");
    return acc;
  }
};

}  // namespace

Ordinal parse_ordinal(std::string_view text) { return OrdinalParser{text}.parse(); }

std::string to_string(Order o) {
  switch (o) {
    case Order::LT: return "LT";
    case Order::EQ: return "EQ";
    default: return "GT";
  }
}

std::string to_string(Parity p) { return p == Parity::Even ? "Even" : "Odd"; }

}  // namespace wb
