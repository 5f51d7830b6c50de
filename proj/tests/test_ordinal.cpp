#include <doctest.h>

#include <random>
#include <string>

#include "wb/error.hpp"
#include "wb/ordinal.hpp"

using namespace wb;

namespace {

// Well-order oracle below w^2: 'W' is one copy of w, '1' a single point, concatenation is order sum.
// A point directly followed by a copy of w is swallowed by it; the order type of the string
// is then w*(number of W) + (number of trailing points).
std::string as_tokens(std::uint64_t omegas, std::uint64_t ones) {
  return std::string(omegas, 'W') + std::string(ones, '1');
}

Ordinal order_type(const std::string& tokens) {
  std::uint64_t w = 0, tail = 0;
  for (char c : tokens) {
    if (c == 'W') {
      ++w;
      tail = 0;
    } else {
      ++tail;
    }
  }
  return add(Ordinal::omega_pow(1, w), Ordinal(tail));
}

Ordinal small(std::uint64_t omegas, std::uint64_t ones) { return add(Ordinal::omega_pow(1, omegas), Ordinal(ones)); }

}  // namespace

TEST_CASE("comparison") {
  CHECK(cmp(0, 0) == Order::EQ);
  CHECK(cmp(5, Ordinal::omega_pow(1)) == Order::LT);
  CHECK(cmp(parse_ordinal("w*2+3"), parse_ordinal("w*2+1")) == Order::GT);
  CHECK(parse_ordinal("w^2") > parse_ordinal("w*100+100"));
}

TEST_CASE("addition") {
  CHECK(add(1, Ordinal::omega_pow(1)) == Ordinal::omega_pow(1));
  CHECK(add(Ordinal::omega_pow(1), Ordinal::omega_pow(1)) == Ordinal::omega_pow(1, 2));
  // frozen from the token oracle below
  CHECK(add(parse_ordinal("w*2+3"), parse_ordinal("w+1")) == parse_ordinal("w*3+1"));
  CHECK(order_type(as_tokens(2, 3) + as_tokens(1, 1)) == parse_ordinal("w*3+1"));
  CHECK(add(parse_ordinal("w^2+w"), parse_ordinal("w^2")) == parse_ordinal("w^2*2"));
}

TEST_CASE("addition agrees with the token oracle below w^2") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> d(0, 6);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    CHECK(add(small(a, b), small(c, e)) == order_type(as_tokens(a, b) + as_tokens(c, e)));
  }
}

TEST_CASE("left subtraction") {
  const Ordinal w = Ordinal::omega_pow(1);
  CHECK(left_sub(w, Ordinal::omega_pow(1, 2)) == w);
  CHECK(left_sub(3, w) == w);
  CHECK(left_sub(parse_ordinal("w+1"), parse_ordinal("w+5")) == 4);
  CHECK_THROWS_WITH_AS(left_sub(w, 3), "subtrahend exceeds minuend", Error);
  CHECK(left_sub(parse_ordinal("w^2+w*3"), parse_ordinal("w^2*2+1")) == parse_ordinal("w^2+1"));
}

TEST_CASE("parity") {
  CHECK(parity(0) == Parity::Even);
  CHECK(parity(parse_ordinal("w+3")) == Parity::Odd);
  CHECK(parity(parse_ordinal("w*5")) == Parity::Even);
  CHECK(is_even(parse_ordinal("w^3")));
}

TEST_CASE("gamma sequence") {
  CHECK(wb::gamma(0) == Ordinal::omega_pow(1));
  // oracle: iterate the doubling recurrence on token strings
  std::string g = as_tokens(1, 0);
  for (unsigned n = 1; n <= 5; ++n) {
    g += g;
    CHECK(wb::gamma(n) == order_type(g));
  }
  CHECK(wb::gamma(1) == parse_ordinal("w*2"));
  CHECK(wb::gamma(3) == parse_ordinal("w*8"));
  CHECK(wb::gamma(62) == Ordinal::omega_pow(1, std::uint64_t{1} << 62));
  CHECK_THROWS_AS(wb::gamma(63), Error);
}

TEST_CASE("level_of") {
  CHECK_FALSE(level_of(17).has_value());
  CHECK(level_of(Ordinal::omega_pow(1)) == 0u);
  CHECK(level_of(parse_ordinal("w+40")) == 0u);
  CHECK(level_of(parse_ordinal("w*2")) == 1u);
  CHECK(level_of(parse_ordinal("w*7+1")) == 2u);
  CHECK(level_of(parse_ordinal("w*8")) == 3u);
  CHECK_THROWS_AS(level_of(parse_ordinal("w^2")), Error);
}

TEST_CASE("parsing and printing") {
  CHECK(parse_ordinal("0").is_zero());
  CHECK(parse_ordinal(" w * 2 + 3 ").str() == "w*2+3");
  CHECK(parse_ordinal("w^2*3+w+7").str() == "w^2*3+w+7");
  CHECK(parse_ordinal("3+w") == Ordinal::omega_pow(1));
  CHECK_THROWS_AS(parse_ordinal("w*"), Error);
  CHECK_THROWS_AS(parse_ordinal("x"), Error);
  CHECK_THROWS_AS(Ordinal::from_terms({{0, 1}, {1, 1}}), Error);
  CHECK_THROWS_AS(Ordinal::from_terms({{1, 0}}), Error);
}

TEST_CASE("algebraic properties on random instances") {
  std::mt19937_64 rng(11);
  auto rnd = [&] {
    std::vector<Term> t;
    for (int e = 3; e >= 0; --e)
      if (rng() % 3) t.push_back({static_cast<std::uint32_t>(e), 1 + rng() % 5});
    return Ordinal::from_terms(t);
  };
  for (int i = 0; i < 3000; ++i) {
    Ordinal a = rnd(), b = rnd(), c = rnd();
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(left_sub(a, add(a, b)) == b);
    CHECK(add(a, b) >= b);
    CHECK(add(a, b) >= a);
    if (a <= b) CHECK(add(a, left_sub(a, b)) == b);
    CHECK((cmp(a, b) == Order::LT) == (a < b));
  }
}
