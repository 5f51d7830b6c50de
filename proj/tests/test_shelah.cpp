#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "wb/error.hpp"
#include "wb/shelah.hpp"

using namespace wb;

namespace {

const Ordinal W = Ordinal::omega_pow(1);

Ordinal w_times(std::uint64_t c, std::uint64_t fin = 0) { return add(Ordinal::omega_pow(1, c), Ordinal(fin)); }

// Listing oracle: position of the word among enumerated words of its head class, the odd j's
// enumerated block by block, pairs walked along Cantor diagonals, then slot k of the parity class.
struct ListingOracle {
  unsigned level;
  std::map<std::string, std::uint64_t> word_pos;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> diag;

  explicit ListingOracle(unsigned lv, std::size_t max_len) : level(lv) {
    std::uint64_t next[2] = {0, 0};
    for (const auto& w : enumerate_words(lv, max_len)) word_pos[w.str()] = next[w.head().inverted]++;
    std::uint64_t k = 0;
    for (std::uint64_t s = 0; s < 60; ++s)
      for (std::uint64_t b = 0; b <= s; ++b) diag[{s - b, b}] = k++;
  }

  Ordinal operator()(const Word& tau, std::uint64_t q, std::uint64_t m) const {
    const std::uint64_t P = std::uint64_t{1} << level;
    std::uint64_t r = q + P * m;  // j = w*q + 2m+1
    std::uint64_t k = diag.at({word_pos.at(tau.str()), r});
    return w_times(P + k % P, 2 * (k / P) + (tau.head().inverted ? 1 : 0));
  }
};

Ordinal odd_j(std::uint64_t q, std::uint64_t m) { return w_times(q, 2 * m + 1); }

Ordinal random_below(std::mt19937_64& rng, unsigned truncation, bool even_only) {
  std::uint64_t c = rng() % (std::uint64_t{1} << truncation);
  std::uint64_t fin = rng() % 40;
  if (even_only) fin &= ~std::uint64_t{1};
  return w_times(c, fin);
}

CompositeWord random_g1(std::mt19937_64& rng, unsigned max_level, std::size_t max_factors) {
  std::vector<Factor> fs;
  std::size_t n = 1 + rng() % max_factors;
  while (fs.size() < n) {
    unsigned a = 1 + rng() % max_level, b = 1 + rng() % max_level;
    if (a == b) continue;
    if (!fs.empty() && fs.back().beta == a) continue;
    fs.push_back({b, a});
  }
  return make_composite(Group::G1, fs);
}

}  // namespace

TEST_CASE("cantor pairing walks the diagonals") {
  std::uint64_t k = 0;
  for (std::uint64_t s = 0; s < 80; ++s)
    for (std::uint64_t b = 0; b <= s; ++b, ++k) {
      CHECK(cantor_pair(s - b, b) == k);
      CHECK(cantor_unpair(k) == std::make_pair(s - b, b));
    }
  CHECK_THROWS_AS(cantor_pair(std::uint64_t{1} << 40, std::uint64_t{1} << 40), BudgetExceeded);
}

TEST_CASE("word rank counts earlier words of the same head class") {
  for (unsigned level : {1u, 2u, 3u}) {
    std::uint64_t next[2] = {0, 0};
    for (const auto& w : enumerate_words(level, 5)) {
      bool cls = w.head().inverted;
      CHECK(word_rank(w) == next[cls]);
      CHECK(word_unrank(level, cls, next[cls]) == w);
      ++next[cls];
    }
  }
  CHECK_THROWS_AS(word_rank(Word{}), Error);
}

TEST_CASE("listing examples") {
  ShelahModel m(6);
  CHECK(m.xi(1, parse_word("s(1,1)"), 1) == w_times(2));
  CHECK(m.xi(1, parse_word("S(1,0) s(1,1)"), 1) == w_times(2, 1));
  auto pc = m.decode(1, w_times(2));
  REQUIRE(pc);
  CHECK(pc->word == parse_word("s(1,1)"));
  CHECK(pc->j == 1);
  CHECK_THROWS_AS(m.decode(1, W), Error);
  CHECK_THROWS_AS(m.xi(0, parse_word("s(0,0)"), 1), Error);
  CHECK_THROWS_AS(m.xi(1, parse_word("s(1,1)"), 2), Error);
  CHECK_THROWS_AS(m.xi(1, parse_word("s(1,1)"), w_times(2, 1)), Error);
  CHECK_THROWS_AS(m.xi(2, parse_word("s(1,1)"), 1), Error);
}

TEST_CASE("listing agrees with the enumeration oracle") {
  ShelahModel m(8);
  for (unsigned level : {1u, 2u, 3u}) {
    ListingOracle oracle(level, 4);
    const std::uint64_t P = std::uint64_t{1} << level;
    std::set<std::string> seen;
    std::size_t count = 0;
    for (const auto& w : enumerate_words(level, 3))
      for (std::uint64_t q = 0; q < P; ++q)
        for (std::uint64_t mm = 0; mm < 3; ++mm) {
          Ordinal x = m.xi(level, w, odd_j(q, mm));
          CHECK(x == oracle(w, q, mm));
          CHECK(level_of(x) == level);
          CHECK((parity(x) == Parity::Odd) == w.head().inverted);
          seen.insert(x.str());
          ++count;
          auto back = m.decode(level, x);
          REQUIRE(back);
          CHECK(back->word == w);
          CHECK(back->j == odd_j(q, mm));
        }
    CHECK(seen.size() == count);
  }
}

TEST_CASE("decode covers every point of an interval") {
  ShelahModel m(6);
  for (std::uint64_t c = 4; c < 8; ++c)
    for (std::uint64_t fin = 0; fin < 30; ++fin) {
      Ordinal x = w_times(c, fin);
      auto pc = m.decode(2, x);
      REQUIRE(pc);
      CHECK(m.xi(2, pc->word, pc->j) == x);
    }
}

TEST_CASE("f examples") {
  ShelahModel m(6);
  CHECK(m.f_apply(1, 2) == 2);
  CHECK(m.f_apply(1, 1) == m.xi(1, parse_word("s(1,1)"), 1));
  CHECK(m.f_apply(1, m.xi(2, parse_word("S(2,1) s(2,2)"), 3)) == m.xi(2, parse_word("s(2,2)"), 3));
  CHECK(m.f_preimage(1, 4) == 4);
  CHECK(m.f_preimage(1, m.xi(1, parse_word("s(1,1)"), 3)) == 3);
  CHECK(m.f_apply(1, w_times(7, 9)) == w_times(6, 6));
  CHECK_THROWS_AS(m.f_preimage(1, 3), Error);
  CHECK_THROWS_AS(m.f_apply(1, w_times(64)), Error);
  CHECK_THROWS_AS(m.f_apply(0, 2), Error);
}

TEST_CASE("f maps: injective, even-valued, identity exactly on the low evens, intervals kept") {
  ShelahModel m(5);
  std::mt19937_64 rng(5);
  for (unsigned alpha = 1; alpha <= 3; ++alpha) {
    std::map<std::string, std::string> image_of;
    for (int i = 0; i < 400; ++i) {
      Ordinal e = random_below(rng, 5, false);
      Ordinal fe;
      try {
        fe = m.f_apply(alpha, e);
      } catch (const Error&) {
        continue;  // image beyond the truncation
      }
      CHECK(is_even(fe));
      auto [it, fresh] = image_of.emplace(fe.str(), e.str());
      if (!fresh) CHECK(it->second == e.str());
      CHECK((fe == e) == (e < wb::gamma(alpha) && is_even(e)));
      if (e >= wb::gamma(alpha)) CHECK(level_of(fe) == level_of(e));
      CHECK(m.f_preimage(alpha, fe) == e);
    }
    for (int i = 0; i < 200; ++i) {
      Ordinal d = random_below(rng, 5, true);
      CHECK(m.f_apply(alpha, m.f_preimage(alpha, d)) == d);
    }
  }
}

TEST_CASE("composite grammar") {
  CompositeWord g = parse_composite("f(3) F(1)");
  CHECK(g.group == Group::G1);
  REQUIRE(g.factors.size() == 1);
  CHECK(g.factors[0] == Factor{3, 1});
  CHECK(g.str() == "f(3) F(1)");
  CompositeWord h = parse_composite("F(2) f(1) F(3) f(2)");
  CHECK(h.group == Group::G2);
  CHECK(h.factors.front() == Factor{3, 2});  // rightmost pair acts first
  CHECK(h.str() == "F(2) f(1) F(3) f(2)");
  CHECK(h.inverse().str() == "F(2) f(3) F(1) f(2)");
  CHECK(parse_composite("id").empty());
  CHECK_THROWS_AS(parse_composite("f(2) F(2)"), Error);
  CHECK_THROWS_AS(parse_composite("f(2) F(1) f(1) F(3)"), Error);
  CHECK_THROWS_AS(parse_composite("f(2)"), Error);
  CHECK_THROWS_AS(parse_composite("f(2) f(1)"), Error);
  CHECK_THROWS_AS(make_composite(Group::G1, {{1, 0}}), Error);
}

TEST_CASE("composites: identity, trajectory, inverse round trip") {
  ShelahModel m(6);
  CHECK(m.apply(CompositeWord{}, w_times(3, 4)) == w_times(3, 4));
  CompositeWord g = parse_composite("f(3) F(1)");
  Ordinal x = w_times(5, 2);
  auto tr = m.apply_composite(g, x);
  REQUIRE(tr.xi_seq.size() == 2);
  CHECK(tr.eta_seq.front() == m.f_preimage(1, x));
  CHECK(tr.xi_seq.back() == m.f_apply(3, m.f_preimage(1, x)));
  CHECK_THROWS_AS(m.apply_composite(g, 3), Error);

  std::mt19937_64 rng(17);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    CompositeWord w = random_g1(rng, 4, 3);
    Ordinal s = random_below(rng, 3, true);
    try {
      Ordinal y = m.apply(w, s);
      CHECK(m.apply(w.inverse(), y) == s);
      ++checked;
    } catch (const Error&) {
      // trajectory left the truncation
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("escape witness") {
  ShelahModel m(6);
  auto rep = m.gamma_claim_witness(parse_composite("f(3) F(1)"), 3);
  CHECK(rep.ok);
  CHECK_FALSE(rep.flipped);
  CHECK(rep.final_level == 3u);
  CHECK(rep.trajectory.b_leq.back() == 3u);
  REQUIRE(rep.trajectory.forms[1]);
  CHECK(rep.trajectory.forms[1]->word.head() == sym(3, 3));
  CHECK(rep.trajectory.xi_seq.front() == m.xi(2, parse_word("s(2,2)"), 1));

  auto flipped = m.gamma_claim_witness(parse_composite("f(1) F(3)"), 3);
  CHECK(flipped.flipped);
  CHECK(flipped.ok);

  CHECK_THROWS_WITH_AS(m.gamma_claim_witness(parse_composite("f(2) F(1)"), 3),
                       doctest::Contains("not a gamma-claim instance"), Error);
  CHECK_FALSE(m.escape_admissibility(parse_composite("f(4) F(5) f(4) F(2) f(1) F(3)"), 3).empty());
}

TEST_CASE("escape witness on random admissible words") {
  ShelahModel m(6);
  std::mt19937_64 rng(23);
  int done = 0;
  for (int i = 0; i < 2000 && done < 60; ++i) {
    CompositeWord w = random_g1(rng, 5, 3);
    for (unsigned delta = 1; delta <= 5; ++delta) {
      if (!m.escape_admissibility(w, delta).empty()) continue;
      try {
        auto rep = m.gamma_claim_witness(w, delta);
        CHECK_MESSAGE(rep.ok, w.str() << " delta " << delta);
        ++done;
      } catch (const BudgetExceeded&) {
      }
    }
  }
  CHECK(done >= 60);
}

TEST_CASE("rewriting between the groups") {
  ShelahModel m(8);
  CompositeWord g = parse_composite("f(2) F(1)");
  std::vector<Ordinal> sample{2, 4, W};
  CompositeWord h = m.rewrite_between_groups(g, Group::G2, sample);
  CHECK(h.group == Group::G2);
  for (const auto& x : sample) CHECK(m.apply(h, x) == m.apply(g, x));

  // the inserted level fixes every sample point below its interval
  unsigned gam = h.factors.front().beta;
  for (const auto& x : sample) CHECK(m.f_apply(gam, x) == x);

  CompositeWord back = m.rewrite_between_groups(h, Group::G1, sample);
  CHECK(back.group == Group::G1);
  for (const auto& x : sample) CHECK(m.apply(back, m.f_apply(back.max_level(), x)) ==
                                     m.f_apply(back.max_level(), m.apply(h, x)));

  CHECK(m.rewrite_between_groups(CompositeWord{}, Group::G2, sample).empty());
  CHECK_THROWS_AS(m.rewrite_between_groups(g, Group::G1, sample), Error);
  CHECK_THROWS_AS(m.rewrite_between_groups(g, Group::G2, {3}), Error);
  CHECK_THROWS_AS(ShelahModel(3).rewrite_between_groups(g, Group::G2, sample), Error);
}

TEST_CASE("relation membership") {
  ShelahModel m(8);
  auto id = m.r_delta_member(1, 10, CompositeWord{});
  CHECK(id.member);
  CHECK(id.tuple == std::vector<Ordinal>{0, 2, 4, 6, 8});

  CompositeWord h = parse_composite("f(2) F(1)");
  auto one = m.r_delta_member(1, 10, h);
  CHECK(one.member);
  CHECK(one.witness == h);

  auto two = m.r_delta_member(2, 10, h);
  CHECK(two.member);
  CHECK(two.witness.group == Group::G2);
  CHECK(two.witness == m.rewrite_between_groups(h, Group::G2, two.tuple));
  CHECK_THROWS_AS(m.r_delta_member(3, 10, h), Error);
}

TEST_CASE("binary encoding keeps automorphism counts") {
  auto count = [](const FinStructure& s) { return brute_automorphisms(s, {4096, true}).size(); };
  FinStructure two = pure_set(2);
  FinStructure enc = encode_binary(two);
  CHECK(enc.relations.size() == 1);
  CHECK(count(enc) == 2);

  FinStructure edge;
  edge.size = 3;
  edge.relations.push_back({"E", 2, {{0, 1}, {1, 0}}});
  edge.normalize();
  CHECK(count(edge) == 2);
  CHECK(count(encode_binary(edge)) == 2);

  FinStructure mixed = equivalence_classes({2, 1});
  mixed.relations.push_back({"P", 1, {{2}}});
  mixed.normalize();
  FinStructure enc2 = encode_binary(mixed);
  CHECK(count(enc2) == count(mixed));
  // markers sit right after the original points and never move
  for (const auto& aut : brute_automorphisms(enc2, {4096, true}))
    for (int k = 0; k < 2; ++k) CHECK(aut[mixed.size + k] == mixed.size + k);

  FinStructure nullary;
  nullary.size = 1;
  nullary.relations.push_back({"Z", 0, {}});
  CHECK_THROWS_AS(encode_binary(nullary), Error);
}
