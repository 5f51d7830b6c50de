#include "wb/shelah.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "wb/error.hpp"

namespace wb {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 sat_add(u64 a, u64 b) {
  u64 r;
  return __builtin_add_overflow(a, b, &r) ? UINT64_MAX : r;
}

u64 chk_add(u64 a, u64 b) {
  u64 r;
  if (__builtin_add_overflow(a, b, &r)) throw BudgetExceeded("listing index overflow");
  return r;
}

u64 chk_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw BudgetExceeded("listing index overflow");
  return r;
}

constexpr std::size_t kMaxLen = 64;

// Letters at a level are numbered 2*index + inverted, which is the canonical key order.
struct CountTable {
  unsigned level;
  unsigned letters;
  // count[len][x]: reduced words of length len whose first letter is x (saturating).
  std::vector<std::vector<u64>> count;
  std::array<std::vector<u64>, 2> per_class;  // per_class[inv][len]

  static bool inv(unsigned x) { return x & 1; }
  static unsigned idx(unsigned x) { return x >> 1; }
  static bool compat(unsigned a, unsigned b) {
    if (inv(a) && inv(b)) return false;
    return !(idx(a) == idx(b) && inv(a) != inv(b));
  }

  explicit CountTable(unsigned lv) : level(lv), letters(2 * (lv + 1)) {
    count.assign(kMaxLen + 1, std::vector<u64>(letters, 0));
    count[1][2 * level] = 1;
    for (std::size_t len = 2; len <= kMaxLen; ++len)
      for (unsigned a = 0; a < letters; ++a)
        for (unsigned b = 0; b < letters; ++b)
          if (compat(a, b)) count[len][a] = sat_add(count[len][a], count[len - 1][b]);
    for (int c = 0; c < 2; ++c) {
      per_class[c].assign(kMaxLen + 1, 0);
      for (std::size_t len = 1; len <= kMaxLen; ++len)
        for (unsigned a = 0; a < letters; ++a)
          if (static_cast<int>(inv(a)) == c) per_class[c][len] = sat_add(per_class[c][len], count[len][a]);
    }
  }
};

const CountTable& table_for(unsigned level) {
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<CountTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[level];
  if (!slot) slot = std::make_unique<CountTable>(level);
  return *slot;
}

unsigned letter_of(const Symbol& s) { return 2 * s.index + (s.inverted ? 1 : 0); }

}  // namespace

std::string PairCode::str() const {
  return "(" + word.str() + "; " + j.str() + ")@" + std::to_string(level);
}

u64 word_rank(const Word& w) {
  if (w.empty()) throw Error("the empty word has no listing rank");
  if (w.size() > kMaxLen) throw Error("word too long to rank");
  const CountTable& t = table_for(*w.level());
  const auto& s = w.symbols();
  int cls = s.front().inverted ? 1 : 0;
  u64 r = 0;
  for (std::size_t len = 1; len < s.size(); ++len) r = chk_add(r, t.per_class[cls][len]);
  const std::size_t L = s.size();
  for (std::size_t p = 0; p < L; ++p) {
    unsigned cur = letter_of(s[p]);
    for (unsigned x = 0; x < cur; ++x) {
      bool allowed = p == 0 ? static_cast<int>(CountTable::inv(x)) == cls : CountTable::compat(letter_of(s[p - 1]), x);
      if (allowed) r = chk_add(r, t.count[L - p][x]);
    }
  }
  if (r == UINT64_MAX) throw BudgetExceeded("listing index overflow");
  return r;
}

Word word_unrank(unsigned level, bool inverted_head, u64 rank) {
  const CountTable& t = table_for(level);
  int cls = inverted_head ? 1 : 0;
  std::size_t L = 1;
  while (rank >= t.per_class[cls][L]) {
    rank -= t.per_class[cls][L];
    if (++L > kMaxLen) throw Error("rank beyond the word table");
  }
  std::vector<Symbol> out;
  for (std::size_t p = 0; p < L; ++p) {
    bool placed = false;
    for (unsigned x = 0; x < t.letters; ++x) {
      bool allowed = p == 0 ? static_cast<int>(CountTable::inv(x)) == cls
                            : CountTable::compat(2 * out.back().index + out.back().inverted, x);
      if (!allowed) continue;
      u64 c = t.count[L - p][x];
      if (rank < c) {
        out.push_back({level, CountTable::idx(x), CountTable::inv(x)});
        placed = true;
        break;
      }
      rank -= c;
    }
    if (!placed) throw Error("word unranking fell off the table");
  }
  return make_word(out);
}

u64 cantor_pair(u64 a, u64 b) {
  u128 s = static_cast<u128>(a) + b;
  u128 z = s * (s + 1) / 2 + b;
  if (z > UINT64_MAX) throw BudgetExceeded("listing index overflow");
  return static_cast<u64>(z);
}

std::pair<u64, u64> cantor_unpair(u64 z) {
  // Largest s with s(s+1)/2 <= z.
  u64 lo = 0, hi = u64{1} << 33;
  while (lo < hi) {
    u64 mid = lo + (hi - lo + 1) / 2;
    u128 tri = static_cast<u128>(mid) * (mid + 1) / 2;
    if (tri <= z)
      lo = mid;
    else
      hi = mid - 1;
  }
  u64 s = lo;
  u64 b = z - static_cast<u64>(static_cast<u128>(s) * (s + 1) / 2);
  return {s - b, b};
}

unsigned CompositeWord::max_level() const {
  unsigned m = 0;
  for (const auto& f : factors) m = std::max({m, f.alpha, f.beta});
  return m;
}

CompositeWord CompositeWord::inverse() const {
  CompositeWord out;
  out.group = group;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) out.factors.push_back({it->alpha, it->beta});
  return out;
}

std::string CompositeWord::str() const {
  if (factors.empty()) return group == Group::G1 ? "id" : "id2";
  std::string out;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    if (!out.empty()) out += ' ';
    if (group == Group::G1)
      out += "f(" + std::to_string(it->beta) + ") F(" + std::to_string(it->alpha) + ")";
    else
      out += "F(" + std::to_string(it->beta) + ") f(" + std::to_string(it->alpha) + ")";
  }
  return out;
}

CompositeWord make_composite(Group group, std::vector<Factor> factors) {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Factor& f = factors[i];
    if (f.alpha == 0 || f.beta == 0) throw Error("composite factor " + std::to_string(i + 1) + " uses level 0");
    if (f.alpha == f.beta)
      throw Error("composite factor " + std::to_string(i + 1) + " is not reduced: alpha equals beta");
    if (i + 1 < factors.size() && factors[i + 1].alpha == f.beta)
      throw Error("composite factors " + std::to_string(i + 1) + " and " + std::to_string(i + 2) +
                  " are not reduced: they cancel");
  }
  return CompositeWord{group, std::move(factors)};
}

CompositeWord parse_composite(std::string_view text) {
  struct Tok {
    bool inverse;
    unsigned level;
  };
  std::vector<Tok> toks;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw Error("composite literal at column " + std::to_string(pos + 1) + ": " + msg);
  };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  std::string_view rest = text.substr(pos);
  if (rest.empty() || rest == "id") return CompositeWord{};
  if (rest == "id2") return CompositeWord{Group::G2, {}};
  while (pos < text.size()) {
    char c = text[pos];
    if (c != 'f' && c != 'F') fail("expected f(level) or F(level)");
    ++pos;
    skip();
    if (pos >= text.size() || text[pos] != '(') fail("expected '('");
    ++pos;
    skip();
    unsigned v = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<unsigned>(text[pos++] - '0');
      any = true;
      if (v > 62) fail("level too large");
    }
    if (!any) fail("expected a level");
    skip();
    if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
    ++pos;
    toks.push_back({c == 'F', v});
    skip();
  }
  if (toks.size() % 2) fail("factors come in pairs");
  Group g = toks.front().inverse ? Group::G2 : Group::G1;
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < toks.size(); i += 2) {
    bool want_first_inverse = g == Group::G2;
    if (toks[i].inverse != want_first_inverse || toks[i + 1].inverse == want_first_inverse)
      fail("factors must alternate consistently");
    factors.push_back({toks[i].level, toks[i + 1].level});
  }
  std::reverse(factors.begin(), factors.end());
  return make_composite(g, std::move(factors));
}

nlohmann::json TrajectoryReport::to_json() const {
  auto ords = [](const std::vector<Ordinal>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& o : v) a.push_back(o.str());
    return a;
  };
  nlohmann::json forms_j = nlohmann::json::array();
  for (const auto& f : forms) {
    if (!f)
      forms_j.push_back(nullptr);
    else
      forms_j.push_back({{"level", f->level}, {"word", f->word.str()}, {"j", f->j.str()}});
  }
  return {{"xi_seq", ords(xi_seq)}, {"eta_seq", ords(eta_seq)}, {"b_leq", b_leq}, {"mu", mu}, {"forms", forms_j}};
}

std::string TrajectoryReport::to_text() const {
  std::ostringstream os;
  os << "mu " << mu << "\n";
  for (std::size_t i = 0; i < xi_seq.size(); ++i) {
    if (i > 0) os << "eta_" << i << " " << eta_seq[i - 1].str() << "\n";
    os << "xi_" << i << " " << xi_seq[i].str() << " b " << b_leq[i];
    if (forms[i]) os << " form " << forms[i]->str();
    os << "\n";
  }
  return os.str();
}

nlohmann::json EscapeReport::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : steps)
    st.push_back({{"step", s.step},
                  {"level", s.level ? nlohmann::json(*s.level) : nlohmann::json(nullptr)},
                  {"bound_ok", s.bound_ok},
                  {"disjunction_ok", s.disjunction_ok},
                  {"shape_ok", s.shape_ok}});
  return {{"word", word.str()},
          {"flipped", flipped},
          {"delta", delta},
          {"trajectory", trajectory.to_json()},
          {"steps", st},
          {"final_level", final_level ? nlohmann::json(*final_level) : nlohmann::json(nullptr)},
          {"escapes", escapes},
          {"ok", ok}};
}

ShelahModel::ShelahModel(unsigned truncation) : n_(truncation) {
  if (truncation < 2 || truncation > 60) throw Error("truncation must lie in 2..60");
}

void ShelahModel::check_below_bound(const Ordinal& x, const char* what) const {
  if (x >= bound())
    throw Error(std::string(what) + " " + x.str() + " is beyond the truncation bound " + bound().str());
}

Ordinal ShelahModel::xi(unsigned alpha, const Word& tau, const Ordinal& j) const {
  if (alpha == 0) throw Error("invalid pair code: level 0 has no parity-respecting listing");
  if (alpha > 61) throw Error("invalid pair code: level too large");
  if (tau.empty()) throw Error("invalid pair code: empty word");
  if (*tau.level() != alpha) throw Error("invalid pair code: word level differs from listing level");
  if (!(j < gamma(alpha)) || parity(j) != Parity::Odd)
    throw Error("invalid pair code: j must be odd and below gamma(" + std::to_string(alpha) + ")");
  const u64 P = u64{1} << alpha;
  u64 w = word_rank(tau);
  u64 q = j.coeff(1);
  u64 m = (j.finite_part() - 1) / 2;
  u64 r = chk_add(q, chk_mul(P, m));
  u64 k = cantor_pair(w, r);
  u64 c = P + k % P;
  u64 fin = chk_add(chk_mul(2, k / P), tau.head().inverted ? 1 : 0);
  std::vector<Term> terms{{1, c}};
  if (fin) terms.push_back({0, fin});
  return Ordinal::from_terms(terms);
}

std::optional<PairCode> ShelahModel::decode(unsigned alpha, const Ordinal& x) const {
  if (alpha == 0 || alpha > 61) throw Error("decode: level out of range");
  if (x < gamma(alpha) || !(x < gamma(alpha + 1)))
    throw Error("decode: " + x.str() + " lies outside [gamma(" + std::to_string(alpha) + "), gamma(" +
                std::to_string(alpha + 1) + "))");
  const u64 P = u64{1} << alpha;
  u64 c = x.coeff(1);
  u64 fin = x.finite_part();
  u64 k = chk_add(c - P, chk_mul(P, fin / 2));
  auto [w, r] = cantor_unpair(k);
  Word word = word_unrank(alpha, fin % 2 == 1, w);
  u64 q = r % P;
  u64 m = r / P;
  Ordinal j = add(Ordinal::omega_pow(1, q), Ordinal(chk_add(chk_mul(2, m), 1)));
  return PairCode{alpha, std::move(word), std::move(j)};
}

Ordinal ShelahModel::f_apply(unsigned alpha, const Ordinal& e) const {
  if (alpha == 0) throw Error("f is only built for levels >= 1");
  check_below_bound(e, "argument");
  Ordinal out;
  if (e < gamma(alpha)) {
    if (is_even(e)) return e;
    if (alpha >= n_) throw Error("image of " + e.str() + " lies beyond the truncation bound");
    out = xi(alpha, make_word({sym(alpha, alpha)}), e);
  } else {
    unsigned beta = *level_of(e);
    PairCode pc = *decode(beta, e);
    out = xi(beta, lmul(sym(beta, alpha), pc.word), pc.j);
  }
  check_below_bound(out, "image");
  return out;
}

Ordinal ShelahModel::f_preimage(unsigned alpha, const Ordinal& d) const {
  if (alpha == 0) throw Error("f is only built for levels >= 1");
  check_below_bound(d, "target");
  if (!is_even(d)) throw Error("preimage target " + d.str() + " is odd; f only hits even ordinals");
  if (d < gamma(alpha)) return d;
  unsigned beta = *level_of(d);
  PairCode pc = *decode(beta, d);
  const Word& tau = pc.word;
  Symbol s = sym(beta, alpha);
  if (beta == alpha && tau.size() == 1) return pc.j;
  if (tau.head() == s) return xi(beta, tau.tail(), pc.j);
  return xi(beta, lmul(s, tau, true), pc.j);
}

Ordinal ShelahModel::apply(const CompositeWord& g, const Ordinal& x) const {
  return apply_composite(g, x).xi_seq.back();
}

TrajectoryReport ShelahModel::apply_composite(const CompositeWord& g, const Ordinal& x0, unsigned mu) const {
  check_below_bound(x0, "start point");
  if (g.group == Group::G1 && !g.empty() && !is_even(x0))
    throw Error("start point " + x0.str() + " is odd; G1 acts on even ordinals");
  TrajectoryReport rep;
  rep.mu = mu;
  rep.xi_seq.push_back(x0);
  rep.b_leq.push_back(mu);
  std::size_t step = 0;
  try {
    for (const auto& f : g.factors) {
      ++step;
      const Ordinal& prev = rep.xi_seq.back();
      Ordinal eta, next;
      if (g.group == Group::G1) {
        eta = f_preimage(f.alpha, prev);
        next = f_apply(f.beta, eta);
      } else {
        eta = f_apply(f.alpha, prev);
        next = f_preimage(f.beta, eta);
      }
      rep.eta_seq.push_back(eta);
      rep.xi_seq.push_back(next);
      rep.b_leq.push_back(std::max(rep.b_leq.back(), f.beta));
    }
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded("step " + std::to_string(step) + ": " + e.what());
  } catch (const Error& e) {
    throw Error("step " + std::to_string(step) + ": " + e.what());
  }
  for (const auto& x : rep.xi_seq) {
    auto lv = level_of(x);
    if (lv && *lv >= 1)
      rep.forms.push_back(decode(*lv, x));
    else
      rep.forms.push_back(std::nullopt);
  }
  return rep;
}

namespace {

unsigned mu_for(const CompositeWord& g, unsigned delta) {
  unsigned m = 0;
  for (const auto& f : g.factors) {
    if (f.alpha < delta) m = std::max(m, f.alpha);
    if (f.beta < delta) m = std::max(m, f.beta);
  }
  return m + 1;
}

}  // namespace

std::string ShelahModel::escape_admissibility(const CompositeWord& g, unsigned delta) const {
  if (g.group != Group::G1) return "the claim concerns G1 words";
  if (g.empty()) return "the identity maps every set onto itself";
  if (delta == 0) return "delta must be at least 1";
  CompositeWord w = g;
  bool high_beta = false, high_alpha = false;
  for (const auto& f : g.factors) {
    high_beta |= f.beta >= delta;
    high_alpha |= f.alpha >= delta;
  }
  if (!high_beta && !high_alpha) return "every level lies below delta, so the word fixes the low block";
  if (!high_beta) w = g.inverse();
  unsigned mu = mu_for(w, delta);
  if (mu >= n_) return "seed level reaches the truncation bound";
  if (mu >= delta) return "the seed at level " + std::to_string(mu) + " lies outside the low block";
  unsigned b = mu;
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    const Factor& f = w.factors[i];
    if (f.beta > b && f.alpha > b)
      return "factor " + std::to_string(i + 1) + " acts as the identity on the low block (word not minimal)";
    b = std::max(b, f.beta);
  }
  if (w.max_level() >= n_) return "levels reach the truncation bound";
  return {};
}

EscapeReport ShelahModel::gamma_claim_witness(const CompositeWord& g, unsigned delta) const {
  std::string why = escape_admissibility(g, delta);
  if (!why.empty()) throw Error("not a gamma-claim instance: " + why);
  EscapeReport rep;
  rep.delta = delta;
  rep.word = g;
  bool high_beta = std::any_of(g.factors.begin(), g.factors.end(), [&](const Factor& f) { return f.beta >= delta; });
  if (!high_beta) {
    rep.word = g.inverse();
    rep.flipped = true;
  }
  const CompositeWord& w = rep.word;
  unsigned mu = mu_for(w, delta);
  Ordinal seed = xi(mu, make_word({sym(mu, mu)}), Ordinal(1));
  rep.trajectory = apply_composite(w, seed, mu);
  const auto& tr = rep.trajectory;
  bool all = true;
  for (std::size_t i = 0; i < tr.xi_seq.size(); ++i) {
    StepCheck sc;
    sc.step = i;
    sc.level = level_of(tr.xi_seq[i]);
    unsigned cap = std::max(tr.b_leq[i] + 1, delta);
    sc.bound_ok = !sc.level || *sc.level < cap;
    if (i > 0) {
      const Factor& f = w.factors[i - 1];
      unsigned prev_b = tr.b_leq[i - 1];
      sc.disjunction_ok = f.beta <= prev_b || f.alpha <= prev_b;
      const auto& form = tr.forms[i];
      sc.shape_ok = sc.level && *sc.level == tr.b_leq[i] && form && form->level == tr.b_leq[i] &&
                    form->word.head() == sym(tr.b_leq[i], f.beta);
    }
    all = all && sc.bound_ok && sc.disjunction_ok && sc.shape_ok;
    rep.steps.push_back(sc);
  }
  rep.final_level = level_of(tr.xi_seq.back());
  rep.escapes = rep.final_level && *rep.final_level == tr.b_leq.back() && tr.b_leq.back() >= delta;
  rep.ok = all && rep.escapes;
  return rep;
}

CompositeWord ShelahModel::rewrite_between_groups(const CompositeWord& g, Group target,
                                                  const std::vector<Ordinal>& sample) const {
  if (g.group == target) throw Error("rewrite: word already belongs to the target group");
  for (const auto& x : sample)
    if (!is_even(x)) throw Error("rewrite: sample point " + x.str() + " is odd");
  if (g.empty()) return CompositeWord{target, {}};
  unsigned top = g.max_level();
  auto note = [&](const Ordinal& x) {
    if (auto lv = level_of(x)) top = std::max(top, *lv);
  };
  for (const auto& x : sample) {
    TrajectoryReport tr = apply_composite(g, x);
    for (const auto& y : tr.xi_seq) note(y);
    for (const auto& y : tr.eta_seq) note(y);
  }
  unsigned gam = top + 1;
  if (gam >= n_)
    throw Error("rewrite: truncation " + std::to_string(n_) + " too small to pick a level above " +
                std::to_string(top));
  const auto& fs = g.factors;
  std::vector<Factor> out;
  out.push_back({fs.front().alpha, gam});
  for (std::size_t i = 1; i < fs.size(); ++i) out.push_back({fs[i].alpha, fs[i - 1].beta});
  out.push_back({gam, fs.back().beta});
  CompositeWord h = make_composite(target, std::move(out));
  for (const auto& x : sample) {
    bool same;
    if (target == Group::G2)
      same = apply(h, x) == apply(g, x);
    else
      same = apply(h, f_apply(gam, x)) == f_apply(gam, apply(g, x));
    if (!same) throw Error("rewrite: rewritten word disagrees at sample point " + x.str());
  }
  return h;
}

Membership ShelahModel::r_delta_member(int k, unsigned prefix_len, const CompositeWord& h) const {
  if (k != 1 && k != 2) throw Error("model index must be 1 or 2");
  Group want = k == 1 ? Group::G1 : Group::G2;
  Membership m;
  CompositeWord hinv = h.inverse();
  std::vector<Ordinal> eps;
  for (unsigned e = 0; e < prefix_len; e += 2) eps.emplace_back(e);
  for (const auto& e : eps) m.tuple.push_back(apply(hinv, e));
  if (k == 1)
    for (const auto& i : m.tuple)
      if (!is_even(i)) {
        m.witness = h;
        return m;  // tuple leaves the universe of the smaller model
      }
  if (h.group == want || h.empty()) {
    m.witness = h.empty() ? CompositeWord{want, {}} : h;
  } else {
    m.witness = rewrite_between_groups(h, want, m.tuple);
  }
  m.member = true;
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (apply(m.witness, m.tuple[i]) != eps[i]) m.member = false;
  return m;
}

FinStructure encode_binary(const FinStructure& M) {
  FinStructure out;
  const int n = M.size;
  const int markers = static_cast<int>(M.relations.size());
  int next = n + markers;
  Relation R{"R", 2, {}};
  for (int i = 0; i < markers; ++i) {
    R.tuples.push_back({n + i, n + i});  // loops single out the spine
    for (int j = i + 1; j < markers; ++j) R.tuples.push_back({n + i, n + j});
  }
  for (int i = 0; i < markers; ++i) {
    const Relation& rel = M.relations[i];
    if (rel.arity == 0) throw Error("encode_binary: nullary relation '" + rel.name + "' is not encodable");
    for (const auto& t : rel.tuples) {
      int c0 = next;
      next += rel.arity;
      for (int p = 0; p < rel.arity; ++p) {
        for (int q = p + 1; q < rel.arity; ++q) R.tuples.push_back({c0 + p, c0 + q});
        R.tuples.push_back({t[p], c0 + p});
      }
      R.tuples.push_back({c0, n + i});
    }
  }
  out.size = next;
  out.relations.push_back(std::move(R));
  out.normalize();
  return out;
}

}  // namespace wb
