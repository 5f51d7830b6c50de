#include "wb/linear_orders.hpp"

#include <cctype>

#include "wb/error.hpp"

namespace wb {

EtaPoint::EtaPoint(std::vector<Ordinal> values) : v_(std::move(values)) {
  while (!v_.empty() && v_.back().is_zero()) v_.pop_back();
}

EtaPoint EtaPoint::with_head(const Ordinal& h) const {
  std::vector<Ordinal> v = v_;
  if (v.empty()) v.emplace_back();
  v[0] = h;
  return EtaPoint(std::move(v));
}

EtaPoint EtaPoint::shifted() const {
  if (v_.empty()) return EtaPoint();
  std::vector<Ordinal> v{Ordinal()};
  v.insert(v.end(), v_.begin(), v_.end());
  return EtaPoint(std::move(v));
}

EtaPoint EtaPoint::unshifted() const {
  if (!head().is_zero()) throw Error("unshift of a point with nonzero head");
  if (v_.empty()) return EtaPoint();
  return EtaPoint(std::vector<Ordinal>(v_.begin() + 1, v_.end()));
}

std::string EtaPoint::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < v_.size(); ++i) out += (i ? ", " : "") + v_[i].str();
  return out + "]";
}

std::strong_ordering compare_eta(const EtaPoint& a, const EtaPoint& b) {
  std::size_t n = std::max(a.support_end(), b.support_end());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = a.at(i) <=> b.at(i);
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

EtaPoint parse_eta_point(std::string_view text) {
  std::size_t a = text.find_first_not_of(" \t\r\n");
  std::size_t b = text.find_last_not_of(" \t\r\n");
  if (a == std::string_view::npos || text[a] != '[' || text[b] != ']')
    throw Error("point literal: expected '[v0, v1, ...]'");
  std::string_view body = text.substr(a + 1, b - a - 1);
  std::vector<Ordinal> vals;
  if (body.find_first_not_of(" \t") == std::string_view::npos) return EtaPoint();
  std::size_t start = 0;
  while (true) {
    std::size_t comma = body.find(',', start);
    std::string_view piece = body.substr(start, comma == std::string_view::npos ? body.npos : comma - start);
    try {
      vals.push_back(parse_ordinal(piece));
    } catch (const Error& e) {
      throw Error("point literal entry " + std::to_string(vals.size()) + " (column " +
                  std::to_string(a + 2 + start) + "): " + e.what());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return EtaPoint(std::move(vals));
}

namespace {

TermPtr make(OrderTerm::Kind k, Ordinal p = {}, TermPtr l = nullptr, TermPtr r = nullptr) {
  auto t = std::make_shared<OrderTerm>();
  t->kind = k;
  t->param = std::move(p);
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

}  // namespace

TermPtr eta() { return make(OrderTerm::Eta); }
TermPtr eta_lt(const Ordinal& a) { return make(OrderTerm::EtaLt, a); }
TermPtr eta_ge(const Ordinal& a) { return make(OrderTerm::EtaGe, a); }
TermPtr times_n(TermPtr t, const Ordinal& n) { return make(OrderTerm::TimesN, n, std::move(t)); }
TermPtr times_rev(TermPtr t, const Ordinal& a) { return make(OrderTerm::TimesRev, a, std::move(t)); }
TermPtr sum(TermPtr a, TermPtr b) { return make(OrderTerm::Sum, {}, std::move(a), std::move(b)); }

std::string OrderTerm::str() const {
  switch (kind) {
    case Eta: return "eta";
    case EtaLt: return "eta_lt(" + param.str() + ")";
    case EtaGe: return "eta_ge(" + param.str() + ")";
    case TimesN: return "times(" + left->str() + ", " + param.str() + ")";
    case TimesRev: return "timesrev(" + left->str() + ", " + param.str() + ")";
    case Sum: return "sum(" + left->str() + ", " + right->str() + ")";
  }
  return "?";
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  TermPtr parse() {
    TermPtr t = term();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("order term at column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string ident() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (b == pos_) fail("expected a term name");
    return std::string(s_.substr(b, pos_ - b));
  }
  Ordinal ordinal() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ')') ++pos_;
    try {
      return parse_ordinal(s_.substr(b, pos_ - b));
    } catch (const Error& e) {
      pos_ = b;
      fail(e.what());
    }
  }
  TermPtr term() {
    std::size_t at = pos_;
    std::string name = ident();
    if (name == "eta") return eta();
    if (name == "eta_lt" || name == "eta_ge") {
      expect('(');
      Ordinal a = ordinal();
      expect(')');
      return name == "eta_lt" ? eta_lt(a) : eta_ge(a);
    }
    if (name == "times" || name == "timesrev") {
      expect('(');
      TermPtr t = term();
      expect(',');
      Ordinal a = ordinal();
      expect(')');
      return name == "times" ? times_n(t, a) : times_rev(t, a);
    }
    if (name == "sum") {
      expect('(');
      TermPtr a = term();
      expect(',');
      TermPtr b = term();
      expect(')');
      return sum(a, b);
    }
    pos_ = at;
    fail("unknown term '" + name + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

TermPtr parse_order_term(std::string_view text) { return TermParser(text).parse(); }

std::string OrderPoint::str() const {
  std::string out;
  for (const auto& s : path) out += s.str() + ":";
  return out + leaf.str();
}

OrderPoint parse_order_point(std::string_view text) {
  OrderPoint p;
  std::size_t lb = text.find('[');
  if (lb == std::string_view::npos) throw Error("point literal: missing '[' leaf");
  std::string_view steps = text.substr(0, lb);
  std::size_t start = 0;
  while (true) {
    std::size_t colon = steps.find(':', start);
    if (colon == std::string_view::npos) {
      if (steps.substr(start).find_first_not_of(" \t") != std::string_view::npos)
        throw Error("point literal: steps must end with ':' before the leaf");
      break;
    }
    p.path.push_back(parse_ordinal(steps.substr(start, colon - start)));
    start = colon + 1;
  }
  p.leaf = parse_eta_point(text.substr(lb));
  return p;
}

namespace {

[[noreturn]] void mismatch(const OrderTerm& t, const OrderPoint& p, const std::string& why) {
  throw Error("point " + p.str() + " does not address " + t.str() + ": " + why);
}

void validate_at(const OrderTerm& t, const OrderPoint& p, std::size_t i, const OrderTerm& root) {
  switch (t.kind) {
    case OrderTerm::Eta:
    case OrderTerm::EtaLt:
    case OrderTerm::EtaGe:
      if (i != p.path.size()) mismatch(root, p, "too many steps");
      if (t.kind == OrderTerm::EtaLt && !(p.leaf.head() < t.param)) mismatch(root, p, "head not below bound");
      if (t.kind == OrderTerm::EtaGe && p.leaf.head() < t.param) mismatch(root, p, "head below bound");
      return;
    case OrderTerm::TimesN:
    case OrderTerm::TimesRev:
      if (i >= p.path.size()) mismatch(root, p, "missing copy index");
      if (!(p.path[i] < t.param)) mismatch(root, p, "copy index out of range");
      return validate_at(*t.left, p, i + 1, root);
    case OrderTerm::Sum:
      if (i >= p.path.size()) mismatch(root, p, "missing summand tag");
      if (p.path[i] == Ordinal(0)) return validate_at(*t.left, p, i + 1, root);
      if (p.path[i] == Ordinal(1)) return validate_at(*t.right, p, i + 1, root);
      mismatch(root, p, "summand tag must be 0 or 1");
  }
}

Order to_order(std::strong_ordering c) { return c < 0 ? Order::LT : c > 0 ? Order::GT : Order::EQ; }

}  // namespace

void validate_point(const OrderTerm& t, const OrderPoint& p) { validate_at(t, p, 0, t); }

Order compare_points(const OrderTerm& t, const OrderPoint& p, const OrderPoint& q) {
  validate_point(t, p);
  validate_point(t, q);
  const OrderTerm* cur = &t;
  for (std::size_t i = 0; i < p.path.size(); ++i) {
    auto c = p.path[i] <=> q.path[i];
    if (c != 0) return to_order(cur->kind == OrderTerm::TimesRev ? 0 <=> c : c);
    cur = (cur->kind == OrderTerm::Sum && p.path[i] == Ordinal(1)) ? cur->right.get() : cur->left.get();
  }
  return to_order(compare_eta(p.leaf, q.leaf));
}

Ordinal random_ordinal_below(const Ordinal& bound, std::mt19937_64& rng) {
  if (bound.is_zero()) throw Error("no ordinal lies below 0");
  std::uint32_t d = bound.degree();
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Term> terms;
    std::uint32_t top = std::uniform_int_distribution<std::uint32_t>(0, d)(rng);
    for (std::uint32_t e = top + 1; e-- > 0;) {
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
      std::uint64_t hint = bound.coeff(e) + 2;
      terms.push_back({e, std::uniform_int_distribution<std::uint64_t>(1, std::min<std::uint64_t>(hint, 6))(rng)});
    }
    Ordinal o = Ordinal::from_terms(terms);
    if (o < bound) return o;
  }
  return Ordinal();
}

namespace {

EtaPoint random_eta(std::mt19937_64& rng) {
  std::size_t len = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
  std::vector<Ordinal> v;
  for (std::size_t i = 0; i < len; ++i)
    v.push_back(std::uniform_int_distribution<int>(0, 2)(rng) == 0 ? Ordinal()
                                                                   : random_ordinal_below(Ordinal::omega_pow(3), rng));
  return EtaPoint(std::move(v));
}

bool empty_term(const OrderTerm& t) {
  switch (t.kind) {
    case OrderTerm::EtaLt: return t.param.is_zero();
    case OrderTerm::TimesN:
    case OrderTerm::TimesRev: return t.param.is_zero() || empty_term(*t.left);
    case OrderTerm::Sum: return empty_term(*t.left) && empty_term(*t.right);
    default: return false;
  }
}

void random_into(const OrderTerm& t, std::mt19937_64& rng, OrderPoint& p) {
  switch (t.kind) {
    case OrderTerm::Eta:
      p.leaf = random_eta(rng);
      return;
    case OrderTerm::EtaLt:
      p.leaf = random_eta(rng).with_head(random_ordinal_below(t.param, rng));
      return;
    case OrderTerm::EtaGe: {
      Ordinal extra = std::uniform_int_distribution<int>(0, 1)(rng) ? Ordinal() : random_ordinal_below(Ordinal::omega_pow(2), rng);
      p.leaf = random_eta(rng).with_head(add(t.param, extra));
      return;
    }
    case OrderTerm::TimesN:
    case OrderTerm::TimesRev:
      p.path.push_back(random_ordinal_below(t.param, rng));
      return random_into(*t.left, rng, p);
    case OrderTerm::Sum: {
      bool right = std::uniform_int_distribution<int>(0, 1)(rng);
      if (empty_term(*t.right)) right = false;
      if (empty_term(*t.left)) right = true;
      p.path.emplace_back(right ? 1 : 0);
      return random_into(right ? *t.right : *t.left, rng, p);
    }
  }
}

EtaPoint head_inc(const EtaPoint& g) { return g.with_head(add(Ordinal(1), g.head())); }
EtaPoint head_dec(const EtaPoint& g) { return g.with_head(left_sub(Ordinal(1), g.head())); }

Ordinal predecessor(const Ordinal& a) {
  std::vector<Term> t = a.terms();
  if (--t.back().coeff == 0) t.pop_back();
  return Ordinal::from_terms(t);
}

// eta x n -> eta: copies below the top are shifted under head 0, the top copy moves to head >= 1.
EtaPoint times_n_fwd(std::uint64_t n, std::uint64_t c, const EtaPoint& f) {
  if (n == 1) return f;
  if (c + 1 < n) return times_n_fwd(n - 1, c, f).shifted();
  return head_inc(f);
}

std::pair<std::uint64_t, EtaPoint> times_n_bwd(std::uint64_t n, const EtaPoint& g) {
  if (n == 1) return {0, g};
  if (g.head().is_zero()) return times_n_bwd(n - 1, g.unshifted());
  return {n - 1, head_dec(g)};
}

// Split of a limit a = base + w^(e+1): blocks [B_k, B_{k+1}) with B_0 = 0 and B_{k} = a[k-1] when
// base > 0, otherwise B_k = a[k].
struct LimitBlocks {
  Ordinal base;
  std::uint32_t e;
  bool offset;

  explicit LimitBlocks(const Ordinal& a) {
    const Term& last = a.terms().back();
    e = last.exp - 1;
    std::vector<Term> t = a.terms();
    if (--t.back().coeff == 0) t.pop_back();
    base = Ordinal::from_terms(t);
    offset = !base.is_zero();
  }
  Ordinal bound(std::uint64_t k) const {
    if (offset) return k == 0 ? Ordinal() : add(base, Ordinal::omega_pow(e, k - 1));
    return Ordinal::omega_pow(e, k);
  }
  std::uint64_t block_of(const Ordinal& c) const {
    if (offset && c < base) return 0;
    Ordinal d = left_sub(base, c);
    return d.coeff(e) + (offset ? 1 : 0);
  }
};

EtaPoint times_rev_fwd(const Ordinal& a, const Ordinal& c, const EtaPoint& f) {
  if (a == Ordinal(1)) return f;
  if (a.is_successor()) {
    Ordinal b = predecessor(a);
    if (c == b) return f.shifted();
    return head_inc(times_rev_fwd(b, c, f));
  }
  LimitBlocks bl(a);
  std::uint64_t k = bl.block_of(c);
  Ordinal lo = bl.bound(k);
  EtaPoint g = head_inc(times_rev_fwd(left_sub(lo, bl.bound(k + 1)), left_sub(lo, c), f));
  for (std::uint64_t i = 0; i < k; ++i) g = g.shifted();
  return g;
}

std::pair<Ordinal, EtaPoint> times_rev_bwd(const Ordinal& a, const EtaPoint& g) {
  if (a == Ordinal(1)) return {Ordinal(), g};
  if (a.is_successor()) {
    Ordinal b = predecessor(a);
    if (g.head().is_zero()) return {b, g.unshifted()};
    return times_rev_bwd(b, head_dec(g));
  }
  if (g.is_zero()) throw Error("not in image: the zero sequence has no preimage under the limit-case map");
  LimitBlocks bl(a);
  std::uint64_t k = 0;
  EtaPoint h = g;
  while (h.head().is_zero()) {
    h = h.unshifted();
    ++k;
  }
  Ordinal lo = bl.bound(k);
  auto [d, f] = times_rev_bwd(left_sub(lo, bl.bound(k + 1)), head_dec(h));
  return {add(lo, d), f};
}

OrderPoint leaf_point(EtaPoint e) { return OrderPoint{{}, std::move(e)}; }

std::uint64_t finite_index(const Ordinal& o) {
  if (!o.is_finite()) throw Error("copy index " + o.str() + " must be finite here");
  return o.finite_part();
}

}  // namespace

OrderPoint random_point(const OrderTerm& t, std::mt19937_64& rng) {
  if (empty_term(t)) throw Error("the order " + t.str() + " is empty");
  OrderPoint p;
  random_into(t, rng, p);
  return p;
}

Ordinal fundamental(const Ordinal& a, std::uint64_t n) {
  if (!a.is_limit()) throw Error("fundamental sequence requested for non-limit " + a.str());
  LimitBlocks bl(a);
  return add(bl.base, Ordinal::omega_pow(bl.e, n));
}

OrderMap iso_eta_ge(const Ordinal& a) {
  OrderMap m;
  m.name = "eta_ge(" + a.str() + ") -> eta";
  m.source = eta_ge(a);
  m.target = eta();
  m.forward = [a, src = m.source](const OrderPoint& p) {
    validate_point(*src, p);
    return leaf_point(p.leaf.with_head(left_sub(a, p.leaf.head())));
  };
  m.backward = [a, dst = m.target](const OrderPoint& q) {
    validate_point(*dst, q);
    return leaf_point(q.leaf.with_head(add(a, q.leaf.head())));
  };
  return m;
}

OrderMap iso_times_n(std::uint64_t n) {
  if (n == 0) throw Error("eta x 0 is empty");
  OrderMap m;
  m.name = "eta x " + std::to_string(n) + " -> eta";
  m.source = times_n(eta(), Ordinal(n));
  m.target = eta();
  m.forward = [n, src = m.source](const OrderPoint& p) {
    validate_point(*src, p);
    return leaf_point(times_n_fwd(n, finite_index(p.path[0]), p.leaf));
  };
  m.backward = [n, dst = m.target](const OrderPoint& q) {
    validate_point(*dst, q);
    auto [c, f] = times_n_bwd(n, q.leaf);
    return OrderPoint{{Ordinal(c)}, f};
  };
  return m;
}

OrderMap iso_times_rev(const Ordinal& a) {
  if (a.is_zero()) throw Error("eta x 0* is empty");
  if (a.degree() > 8) throw Error("copy count " + a.str() + " beyond the supported range");
  OrderMap m;
  m.name = "eta x " + a.str() + "* -> eta";
  m.source = times_rev(eta(), a);
  m.target = eta();
  m.forward = [a, src = m.source](const OrderPoint& p) {
    validate_point(*src, p);
    return leaf_point(times_rev_fwd(a, p.path[0], p.leaf));
  };
  m.backward = [a, dst = m.target](const OrderPoint& q) {
    validate_point(*dst, q);
    auto [c, f] = times_rev_bwd(a, q.leaf);
    return OrderPoint{{c}, f};
  };
  return m;
}

TermPtr chain_ascending(std::uint64_t n) { return times_n(eta(), Ordinal(n)); }
TermPtr chain_descending(const Ordinal& a) { return sum(eta(), times_rev(eta(), a)); }

OrderMap chain_iso_ascending(std::uint64_t n, std::uint64_t m, const std::vector<OrderPoint>& C) {
  if (n < 1 || n >= m) throw Error("chain isomorphism needs 1 <= n < m");
  TermPtr src = chain_ascending(n), dst = chain_ascending(m);
  Ordinal top;
  for (const auto& c : C) {
    validate_point(*src, c);
    if (c.path[0] == Ordinal(n - 1)) top = std::max(top, c.leaf.head());
  }
  Ordinal theta = add(top, Ordinal(1));
  std::uint64_t k = m - n + 1;
  OrderMap map;
  map.name = "A_" + std::to_string(n) + " -> A_" + std::to_string(m);
  map.source = src;
  map.target = dst;
  map.forward = [=](const OrderPoint& p) {
    validate_point(*src, p);
    std::uint64_t c = finite_index(p.path[0]);
    if (c + 1 < n || p.leaf.head() < theta) return p;
    auto [i, h] = times_n_bwd(k, p.leaf.with_head(left_sub(theta, p.leaf.head())));
    if (i == 0) return OrderPoint{{Ordinal(n - 1)}, h.with_head(add(theta, h.head()))};
    return OrderPoint{{Ordinal(n - 1 + i)}, h};
  };
  map.backward = [=](const OrderPoint& q) {
    validate_point(*dst, q);
    std::uint64_t c = finite_index(q.path[0]);
    if (c + 1 < n || (c + 1 == n && q.leaf.head() < theta)) return q;
    EtaPoint g = c + 1 == n ? times_n_fwd(k, 0, q.leaf.with_head(left_sub(theta, q.leaf.head())))
                            : times_n_fwd(k, c - (n - 1), q.leaf);
    return OrderPoint{{Ordinal(n - 1)}, g.with_head(add(theta, g.head()))};
  };
  return map;
}

OrderMap chain_iso_descending(const Ordinal& a, const Ordinal& b, const std::vector<OrderPoint>& C) {
  if (!(a < b)) throw Error("chain map needs a < b");
  TermPtr src = chain_descending(a), dst = chain_descending(b);
  Ordinal top;
  for (const auto& c : C) {
    validate_point(*src, c);
    if (c.path[0] == Ordinal(0)) top = std::max(top, c.leaf.head());
  }
  Ordinal delta = add(top, Ordinal(1));
  Ordinal gap = left_sub(a, b);
  OrderMap map;
  map.name = "A'_" + a.str() + " -> A'_" + b.str();
  map.source = src;
  map.target = dst;
  map.forward = [=](const OrderPoint& p) {
    validate_point(*src, p);
    if (p.path[0] == Ordinal(1) || p.leaf.head() < delta) return p;
    EtaPoint g = p.leaf.with_head(left_sub(delta, p.leaf.head()));
    if (g.head().is_zero()) {
      EtaPoint h = g.unshifted();
      return OrderPoint{{Ordinal(0)}, h.with_head(add(delta, h.head()))};
    }
    auto [d, f] = times_rev_bwd(gap, head_dec(g));
    return OrderPoint{{Ordinal(1), add(a, d)}, f};
  };
  map.backward = [=](const OrderPoint& q) {
    validate_point(*dst, q);
    EtaPoint g;
    if (q.path[0] == Ordinal(0)) {
      if (q.leaf.head() < delta) return q;
      g = q.leaf.with_head(left_sub(delta, q.leaf.head())).shifted();
    } else {
      if (q.path[1] < a) return q;
      g = head_inc(times_rev_fwd(gap, left_sub(a, q.path[1]), q.leaf));
    }
    return OrderPoint{{Ordinal(0)}, g.with_head(add(delta, g.head()))};
  };
  return map;
}

std::vector<OrderPoint> unbounded_witness(std::size_t k) {
  std::vector<OrderPoint> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back({{Ordinal(i)}, EtaPoint()});
  return out;
}

std::vector<OrderPoint> descending_witness(std::size_t k) {
  std::vector<OrderPoint> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back({{Ordinal(1), Ordinal(2 * i + 1)}, EtaPoint()});
  return out;
}

}  // namespace wb
