#pragma once

#include <compare>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "wb/ordinal.hpp"

namespace wb {

// Finitely supported sequence of ordinals; trailing zeros are dropped.
class EtaPoint {
 public:
  EtaPoint() = default;
  explicit EtaPoint(std::vector<Ordinal> values);

  const std::vector<Ordinal>& values() const { return v_; }
  Ordinal at(std::size_t i) const { return i < v_.size() ? v_[i] : Ordinal(); }
  Ordinal head() const { return at(0); }
  bool is_zero() const { return v_.empty(); }
  std::size_t support_end() const { return v_.size(); }

  EtaPoint with_head(const Ordinal& h) const;
  EtaPoint shifted() const;    // (0, v0, v1, ...)
  EtaPoint unshifted() const;  // drops index 0, which must be zero

  bool operator==(const EtaPoint&) const = default;
  std::string str() const;

 private:
  std::vector<Ordinal> v_;
};

// Order of first difference.
std::strong_ordering compare_eta(const EtaPoint& a, const EtaPoint& b);
// `[w+1, 0, 3]`; `[]` is the zero sequence.
EtaPoint parse_eta_point(std::string_view text);

struct OrderTerm;
using TermPtr = std::shared_ptr<const OrderTerm>;

// eta, eta restricted by head (< a or >= a), t x n with ascending copies, t x a* with descending
// copies (copy 0 on top), and t1 + t2 with t2 above t1.
struct OrderTerm {
  enum Kind { Eta, EtaLt, EtaGe, TimesN, TimesRev, Sum } kind = Eta;
  Ordinal param;
  TermPtr left, right;  // TimesN/TimesRev use left only

  std::string str() const;
};

TermPtr eta();
TermPtr eta_lt(const Ordinal& a);
TermPtr eta_ge(const Ordinal& a);
TermPtr times_n(TermPtr t, const Ordinal& n);
TermPtr times_rev(TermPtr t, const Ordinal& a);
TermPtr sum(TermPtr a, TermPtr b);
// `eta`, `eta_lt(w)`, `eta_ge(3)`, `times(eta, 4)`, `timesrev(eta, w*2)`, `sum(eta, timesrev(eta, w))`.
TermPtr parse_order_term(std::string_view text);

// Address of a point: one step per product (copy ordinal) or sum (0 left, 1 right), then the leaf.
struct OrderPoint {
  std::vector<Ordinal> path;
  EtaPoint leaf;

  bool operator==(const OrderPoint&) const = default;
  std::string str() const;
};

// `3:1:[w, 2]` is copy 3, right summand, leaf [w, 2]; `[5]` is a bare leaf.
OrderPoint parse_order_point(std::string_view text);

void validate_point(const OrderTerm& t, const OrderPoint& p);
Order compare_points(const OrderTerm& t, const OrderPoint& p, const OrderPoint& q);

// Uniform-ish random point of t: sequences of length < 5 with entries below w^3.
OrderPoint random_point(const OrderTerm& t, std::mt19937_64& rng);
// Random ordinal strictly below `bound` (bound > 0), entries kept small.
Ordinal random_ordinal_below(const Ordinal& bound, std::mt19937_64& rng);

// Order map between two terms. `backward` throws "not in image" off the range.
struct OrderMap {
  std::string name;
  TermPtr source, target;
  std::function<OrderPoint(const OrderPoint&)> forward, backward;
};

// Isomorphisms onto eta: head subtraction on eta_ge(a), eta x n, and eta x a*.
OrderMap iso_eta_ge(const Ordinal& a);
OrderMap iso_times_n(std::uint64_t n);
OrderMap iso_times_rev(const Ordinal& a);

// Canonical fundamental sequence of a limit ordinal: a = b + w^(e+1), a[n] = b + w^e * n.
Ordinal fundamental(const Ordinal& a, std::uint64_t n);

// Chains of orders: A_n = eta x n and A'_a = eta + eta x a*.
TermPtr chain_ascending(std::uint64_t n);
TermPtr chain_descending(const Ordinal& a);

// Isomorphism A_n -> A_m (n < m) that is the identity on C.
OrderMap chain_iso_ascending(std::uint64_t n, std::uint64_t m, const std::vector<OrderPoint>& C);
// Map A'_a -> A'_b (a < b) that is the identity on C; total when b - a is finite.
OrderMap chain_iso_descending(const Ordinal& a, const Ordinal& b, const std::vector<OrderPoint>& C);

// Zero points of copies 0..k-1 of eta x w.
std::vector<OrderPoint> unbounded_witness(std::size_t k);
// Zero points of copies 1, 3, 5, ... of the reversed part of eta + eta x w*.
std::vector<OrderPoint> descending_witness(std::size_t k);

}  // namespace wb
