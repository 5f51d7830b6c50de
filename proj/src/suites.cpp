#include "wb/suites.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "wb/error.hpp"
#include "wb/freegroup.hpp"
#include "wb/games.hpp"
#include "wb/linear_orders.hpp"
#include "wb/ordinal.hpp"
#include "wb/shelah.hpp"

namespace wb {

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("config: expected a JSON object");
  Config c;
  for (const auto& [key, v] : j.items()) {
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0)
      throw Error("config: '" + key + "' must be a positive integer");
    if (key == "truncation")
      c.truncation = v.get<unsigned>();
    else if (key == "node_budget")
      c.node_budget = v.get<std::size_t>();
    else if (key == "brute_budget")
      c.brute_budget = v.get<int>();
    else if (key == "samples")
      c.samples = v.get<std::size_t>();
    else if (key == "seed")
      c.seed = v.get<std::uint64_t>();
    else
      throw Error("config: unknown key '" + key + "'");
  }
  return c;
}

nlohmann::json Config::to_json() const {
  nlohmann::json j{{"truncation", truncation}, {"node_budget", node_budget}, {"brute_budget", brute_budget},
                   {"seed", seed}};
  if (samples) j["samples"] = samples;  // 0 means per-suite defaults
  return j;
}

void SuiteResult::check(bool cond, const std::string& what) {
  ++checks;
  if (!cond) {
    ++failures;
    if (messages.size() < 10) messages.push_back(what);
  }
}

void SuiteResult::fail(const std::string& what) { check(false, what); }

std::string SuiteResult::line() const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << name << ": " << (ok() ? "PASS" : "FAIL") << " checks=" << checks << " failures=" << failures << " ("
     << seconds << "s)";
  return os.str();
}

nlohmann::json SuiteResult::to_json() const {
  return {{"name", name},         {"ok", ok()},         {"checks", checks}, {"failures", failures},
          {"messages", messages}, {"details", details}, {"seconds", seconds}};
}

namespace {

using Rng = std::mt19937_64;

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

std::size_t count_or(const Config& cfg, std::size_t fallback) { return cfg.samples ? cfg.samples : fallback; }

// Grows a reduced word leftwards from the terminal symbol.
Word random_word(unsigned level, std::size_t max_len, Rng& rng) {
  Word w = make_word({sym(level, level)});
  std::size_t target = uniform(rng, 1, max_len);
  for (int tries = 0; w.size() < target && tries < 50; ++tries) {
    Symbol s = sym(level, static_cast<unsigned>(uniform(rng, 0, level)));
    try {
      Word next = lmul(s, w, uniform(rng, 0, 1) == 1);
      if (next.size() > w.size()) w = next;
    } catch (const Error&) {
    }
  }
  return w;
}

CompositeWord random_composite(Group group, std::size_t max_factors, unsigned max_level, Rng& rng) {
  for (;;) {
    std::vector<Factor> fs(uniform(rng, 1, max_factors));
    for (auto& f : fs) {
      f.beta = static_cast<unsigned>(uniform(rng, 1, max_level));
      f.alpha = static_cast<unsigned>(uniform(rng, 1, max_level));
    }
    try {
      return make_composite(group, fs);
    } catch (const Error&) {
    }
  }
}

Ordinal random_ordinal(Rng& rng, std::uint32_t max_degree, std::uint64_t max_coeff) {
  std::vector<Term> terms;
  for (int e = static_cast<int>(max_degree); e >= 0; --e)
    if (uniform(rng, 0, 2) != 0) {
      std::uint64_t c = uniform(rng, e == 0 ? 0 : 1, max_coeff);
      if (c) terms.push_back({static_cast<std::uint32_t>(e), c});
    }
  return Ordinal::from_terms(terms);
}

// w*q + r with q below 2^levels.
Ordinal sample_below_gamma(Rng& rng, unsigned levels, bool even) {
  std::uint64_t q = uniform(rng, 0, (std::uint64_t{1} << levels) - 1);
  std::uint64_t r = uniform(rng, 0, 40);
  if (even) r &= ~std::uint64_t{1};
  return add(Ordinal::omega_pow(1, q), Ordinal(r));
}

template <class F>
void guarded(SuiteResult& res, const std::string& what, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    res.fail(what + ": " + e.what());
  }
}

// ---- ordinals

void suite_ordinal(SuiteResult& res, const Config& cfg) {
  Rng rng(cfg.seed);
  const std::size_t n = count_or(cfg, 10000);
  for (std::size_t i = 0; i < n; ++i) {
    Ordinal a = random_ordinal(rng, 3, 6), b = random_ordinal(rng, 3, 6), c = random_ordinal(rng, 3, 6);
    guarded(res, "ordinal sample " + std::to_string(i), [&] {
      res.check(add(add(a, b), c) == add(a, add(b, c)),
                "associativity " + a.str() + ", " + b.str() + ", " + c.str());
      Ordinal ab = add(a, b);
      res.check(left_sub(a, ab) == b, "left_sub(" + a.str() + ", " + ab.str() + ") != " + b.str());
      res.check(!(ab < a), "a + b below a for " + a.str() + ", " + b.str());
      if (a <= b) res.check(add(a, left_sub(a, b)) == b, "round trip " + a.str() + " <= " + b.str());
      Ordinal x = Ordinal::from_terms({{1, uniform(rng, 1, 100)}, {0, uniform(rng, 1, 9)}});
      auto lv = level_of(x);
      res.check(lv && gamma(*lv) <= x && x < gamma(*lv + 1), "level_of brackets " + x.str());
      Parity expect = b.is_finite() ? (((a.finite_part() + b.finite_part()) % 2) ? Parity::Odd : Parity::Even)
                                    : parity(b);
      res.check(parity(ab) == expect, "parity of " + a.str() + " + " + b.str());
    });
  }
  for (unsigned k = 0; k < 40; ++k)
    res.check(gamma(k + 1) == add(gamma(k), gamma(k)), "gamma recurrence at " + std::to_string(k));
  res.check(add(parse_ordinal("w*2+3"), parse_ordinal("w+1")) == parse_ordinal("w*3+1"), "w*2+3 + w+1");
  res.details["samples"] = n;
}

// ---- free group

void suite_lemmaA(SuiteResult& res, const Config& cfg) {
  std::size_t exhaustive = 0;
  for (unsigned level = 0; level <= 3; ++level) {
    std::vector<Word> words = enumerate_words(level, 5);
    words.insert(words.begin(), Word());
    for (unsigned idx = 0; idx <= level; ++idx) {
      std::map<std::string, const Word*> seen;
      for (const Word& w : words) {
        Word prod;
        try {
          prod = lmul(sym(level, idx), w);
        } catch (const Error&) {
          continue;
        }
        ++exhaustive;
        res.check(validate(prod.symbols()).ok(), "product not reduced: " + prod.str());
        auto [it, fresh] = seen.emplace(prod.str(), &w);
        res.check(fresh, "s(" + std::to_string(level) + "," + std::to_string(idx) + ") collides on " +
                             it->second->str() + " and " + w.str());
      }
    }
  }
  Rng rng(cfg.seed);
  const std::size_t n = count_or(cfg, 10000);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned level = static_cast<unsigned>(uniform(rng, 0, 5));
    Word t1 = random_word(level, 7, rng), t2 = random_word(level, 7, rng);
    Symbol s = sym(level, static_cast<unsigned>(uniform(rng, 0, level)));
    if (t1 == t2) continue;
    guarded(res, "lmul " + s.str() + " on " + t1.str() + " / " + t2.str(), [&] {
      res.check(!(lmul(s, t1) == lmul(s, t2)), "collision " + s.str() + " on " + t1.str() + " / " + t2.str());
    });
    // cancellation round trip when the inverse product is defined
    try {
      Word back = lmul(s, lmul(s, t1, true), false);
      res.check(back == t1, "inverse round trip on " + t1.str());
    } catch (const Error&) {
    }
  }
  res.details["exhaustive_products"] = exhaustive;
  res.details["random_pairs"] = n;
}

// ---- f maps

void suite_f_alpha(SuiteResult& res, const Config& cfg) {
  const unsigned N = 5;
  ShelahModel model(N);
  Rng rng(cfg.seed);
  const std::size_t n = count_or(cfg, 500);
  for (unsigned alpha = 1; alpha <= 3; ++alpha) {
    std::map<Ordinal, Ordinal> image_of;
    for (std::size_t i = 0; i < n; ++i) {
      Ordinal e = sample_below_gamma(rng, N, false);
      guarded(res, "f" + std::to_string(alpha) + "(" + e.str() + ")", [&] {
        Ordinal y = model.f_apply(alpha, e);
        auto [it, fresh] = image_of.emplace(y, e);
        res.check(fresh || it->second == e, "f" + std::to_string(alpha) + " identifies " + it->second.str() +
                                                " and " + e.str());
        res.check(is_even(y), "odd image of " + e.str());
        bool in_a = e < gamma(alpha) && is_even(e);
        res.check((y == e) == in_a, "identity mismatch at " + e.str() + " under f" + std::to_string(alpha));
        auto lv = level_of(e);
        if (lv && *lv > alpha) res.check(level_of(y) == lv, "interval of " + e.str() + " not preserved");
      });
      Ordinal d = sample_below_gamma(rng, N, true);
      guarded(res, "preimage of " + d.str(), [&] {
        res.check(model.f_apply(alpha, model.f_preimage(alpha, d)) == d,
                  "f" + std::to_string(alpha) + " o preimage != id at " + d.str());
      });
    }
  }
  res.details["samples_per_alpha"] = n;
  res.details["truncation"] = N;
}

// ---- claim Gamma

void suite_gamma(SuiteResult& res, const Config& cfg) {
  ShelahModel model(6);
  Rng rng(cfg.seed);
  const std::size_t want = count_or(cfg, 100);
  std::size_t words = 0, pairs = 0, draws = 0, overflow = 0;
  while (words < want && draws < 100 * want) {
    ++draws;
    CompositeWord g = random_composite(Group::G1, 4, 5, rng);
    std::vector<std::pair<unsigned, EscapeReport>> reports;
    try {
      for (unsigned delta = 1; delta <= 5; ++delta)
        if (model.escape_admissibility(g, delta).empty()) reports.emplace_back(delta, model.gamma_claim_witness(g, delta));
    } catch (const BudgetExceeded&) {
      ++overflow;
      continue;
    } catch (const std::exception& e) {
      res.fail(g.str() + ": " + e.what());
      continue;
    }
    if (reports.empty()) continue;
    ++words;
    for (const auto& [delta, rep] : reports) {
      ++pairs;
      res.check(rep.ok && rep.escapes, "no escape for " + g.str() + " at delta " + std::to_string(delta));
      for (const auto& st : rep.steps)
        res.check(st.bound_ok && st.disjunction_ok && st.shape_ok,
                  g.str() + " step " + std::to_string(st.step) + " fails at delta " + std::to_string(delta));
    }
  }
  res.check(words == want, "only " + std::to_string(words) + " admissible words in " + std::to_string(draws) +
                               " draws");
  res.details["words"] = words;
  res.details["pairs"] = pairs;
  res.details["draws"] = draws;
  res.details["skipped_overflow"] = overflow;
}

// ---- generator-family rewriting

void suite_rewrite(SuiteResult& res, const Config& cfg) {
  ShelahModel model(8);
  Rng rng(cfg.seed);
  const std::size_t n = count_or(cfg, 100);
  std::size_t done = 0, overflow = 0;
  while (done < n && overflow < 10 * n) {
    CompositeWord g = random_composite(Group::G1, 3, 5, rng);
    std::vector<Ordinal> sample;
    for (int k = 0; k < 6; ++k) sample.push_back(sample_below_gamma(rng, 5, true));
    try {
      CompositeWord g2 = model.rewrite_between_groups(g, Group::G2, sample);
      std::vector<std::pair<Ordinal, Ordinal>> values;
      for (const auto& x : sample) values.emplace_back(model.apply(g2, x), model.apply(g, x));
      CompositeWord back = model.rewrite_between_groups(g2, Group::G1, sample);
      ++done;
      for (std::size_t k = 0; k < sample.size(); ++k)
        res.check(values[k].first == values[k].second, "G2 form of " + g.str() + " differs at " + sample[k].str());
      res.check(back.group == Group::G1, "round trip left G1 for " + g.str());
    } catch (const BudgetExceeded&) {
      ++overflow;
    } catch (const std::exception& e) {
      ++done;
      res.fail("rewrite " + g.str() + ": " + e.what());
    }
  }
  res.check(done == n, "only " + std::to_string(done) + " words evaluated");
  res.details["words"] = done;
  res.details["skipped_overflow"] = overflow;
}

// ---- games

void suite_games(SuiteResult& res, const Config& cfg) {
  SolverOptions opt;
  opt.node_budget = cfg.node_budget;
  std::size_t closed = 0;
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int k = 0; k <= 5; ++k) {
        bool expect = a == b || std::min(a, b) >= k;
        guarded(res, "pure sets", [&] {
          ++closed;
          res.check((ef_winner(pure_set(a), pure_set(b), k, opt) == Winner::Exists) == expect,
                    "pure sets " + std::to_string(a) + " vs " + std::to_string(b) + " in " + std::to_string(k));
        });
      }
  for (int p = 2; p <= 3; ++p)
    for (int m = 2; m <= 3; ++m) {
      auto A = equivalence_classes(std::vector<int>(p, m));
      auto B = equivalence_classes(std::vector<int>(p + 1, m));
      std::string tag = std::to_string(p) + " classes of " + std::to_string(m);
      guarded(res, tag, [&] {
        res.check(restricted_winner(GameKind::leq(), A, B, 2, opt) == Winner::Forall, "leq not a forall win: " + tag);
        res.check(restricted_winner(GameKind::preceq({}), A, B, 1, opt) == Winner::Exists,
                  "preceq not an exists win: " + tag);
      });
    }
  guarded(res, "splitting examples", [&] {
    res.check(splitting_winner(strict_order(3), 1, opt) == Winner::Forall, "rigid order should lose splitting");
    res.check(splitting_winner(pure_set(4), 2, opt) == Winner::Exists, "pure 4 should split twice");
  });
  guarded(res, "compose pure 2 / 4", [&] {
    auto cs = compose_strategy(pure_set(2), pure_set(4), 1, opt);
    auto y = split_yield(pure_set(2), cs.as_strategy(), cs.initial(), 1);
    res.check(y.leaves >= 2, "composed strategy gave " + std::to_string(y.leaves) + " leaves");
    res.details["compose_leaves"] = y.leaves;
  });
  auto solver = std::make_shared<SplittingSolver>(pure_set(8), opt);
  std::vector<std::size_t> leaves;
  for (int k = 0; k <= 3; ++k)
    guarded(res, "pure 8 yield", [&] {
      auto y = split_yield(pure_set(8), solved_split_strategy(solver, k), SplitState{solver->empty_map(), {}, {}, 0}, k);
      leaves.push_back(y.leaves);
      res.check(y.leaves >= (std::size_t{1} << k), "pure 8 yield " + std::to_string(y.leaves) + " at k=" +
                                                       std::to_string(k));
    });
  res.details["closed_form_instances"] = closed;
  res.details["pure8_leaves"] = leaves;
}

// ---- linear orders

void check_map(SuiteResult& res, const OrderMap& m, std::size_t n, Rng& rng, bool target_trip) {
  std::size_t bad_order = 0, bad_trip = 0, bad_target = 0;
  try {
    for (std::size_t i = 0; i < n; ++i) {
      OrderPoint p = random_point(*m.source, rng), q = random_point(*m.source, rng);
      OrderPoint fp = m.forward(p), fq = m.forward(q);
      validate_point(*m.target, fp);
      if (compare_points(*m.source, p, q) != compare_points(*m.target, fp, fq)) ++bad_order;
      if (!(m.backward(fp) == p)) ++bad_trip;
      if (target_trip) {
        OrderPoint t = random_point(*m.target, rng);
        if (!(m.forward(m.backward(t)) == t)) ++bad_target;
      }
    }
  } catch (const std::exception& e) {
    res.fail(m.name + ": " + e.what());
    return;
  }
  res.check(bad_order == 0, m.name + ": " + std::to_string(bad_order) + " order violations");
  res.check(bad_trip == 0, m.name + ": " + std::to_string(bad_trip) + " source round-trip failures");
  if (target_trip) res.check(bad_target == 0, m.name + ": " + std::to_string(bad_target) + " target round-trip failures");
}

void suite_orders(SuiteResult& res, const Config& cfg) {
  Rng rng(cfg.seed);
  const std::size_t n = count_or(cfg, 10000);
  const Ordinal w = Ordinal::omega_pow(1);
  for (const Ordinal& a : {Ordinal(1), w, parse_ordinal("w*3+2")}) check_map(res, iso_eta_ge(a), n, rng, true);
  for (std::uint64_t k = 2; k <= 5; ++k) check_map(res, iso_times_n(k), n, rng, true);
  // target-side trips are exact only for finite copy counts
  for (const char* a : {"2", "5", "w", "w*2", "w^2"}) {
    Ordinal o = parse_ordinal(a);
    check_map(res, iso_times_rev(o), n, rng, o.is_finite());
  }
  auto random_c = [&](const OrderTerm& t) {
    std::vector<OrderPoint> C;
    for (std::size_t i = uniform(rng, 0, 20); i > 0; --i) C.push_back(random_point(t, rng));
    return C;
  };
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 5}, {4, 5}}) {
    auto C = random_c(*chain_ascending(a));
    guarded(res, "P10", [&] {
      OrderMap m = chain_iso_ascending(a, b, C);
      for (const auto& c : C) res.check(m.forward(c) == c, m.name + " moves " + c.str());
      check_map(res, m, n, rng, true);
    });
  }
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{{"0", "1"}, {"1", "3"}, {"2", "5"}, {"w", "w+3"}}) {
    Ordinal lo = parse_ordinal(a), hi = parse_ordinal(b);
    auto C = random_c(*chain_descending(lo));
    guarded(res, "P11", [&] {
      OrderMap m = chain_iso_descending(lo, hi, C);
      for (const auto& c : C) res.check(m.forward(c) == c, m.name + " moves " + c.str());
      check_map(res, m, n, rng, lo.is_finite());
    });
  }
  TermPtr up = times_n(eta(), w);
  TermPtr down = chain_descending(w);
  for (std::size_t k = 1; k <= 10; ++k) {
    auto xs = unbounded_witness(k);
    auto ys = descending_witness(k);
    res.check(xs.size() == k && ys.size() == k, "witness length at k=" + std::to_string(k));
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      res.check(compare_points(*up, xs[i], xs[i + 1]) == Order::LT, "unbounded witness not increasing");
      res.check(compare_points(*down, ys[i], ys[i + 1]) == Order::GT, "descending witness not descending");
      res.check(ys[i].path != ys[i + 1].path, "descending witness repeats a copy");
    }
    for (int t = 0; t < 50; ++t) {
      OrderPoint p = random_point(*up, rng);
      std::uint64_t copy = p.path.at(0).finite_part();
      for (std::size_t i = copy + 1; i < xs.size(); ++i)
        res.check(compare_points(*up, p, xs[i]) == Order::LT, "point " + p.str() + " not below witness");
    }
  }
  // strict total order and density on eta samples
  TermPtr e = eta();
  for (std::size_t i = 0; i < n / 10; ++i) {
    OrderPoint p = random_point(*e, rng), q = random_point(*e, rng), r = random_point(*e, rng);
    Order pq = compare_points(*e, p, q), qr = compare_points(*e, q, r);
    res.check(compare_points(*e, p, p) == Order::EQ, "irreflexivity");
    res.check((pq == Order::EQ) == (p == q), "trichotomy");
    if (pq == Order::LT && qr == Order::LT) res.check(compare_points(*e, p, r) == Order::LT, "transitivity");
    if (pq == Order::LT) {
      // append a fresh index past both supports
      std::vector<Ordinal> v = p.leaf.values();
      v.resize(std::max(p.leaf.support_end(), q.leaf.support_end()) + 1);
      v.back() = Ordinal(1);
      OrderPoint mid{{}, EtaPoint(v)};
      res.check(compare_points(*e, p, mid) == Order::LT && compare_points(*e, mid, q) == Order::LT,
                "no point between " + p.str() + " and " + q.str());
    }
  }
  res.details["samples_per_map"] = n;
}

// ---- trees

void suite_trees(SuiteResult& res, const Config& cfg) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [name, tree, rank] : tree_corpus()) {
    guarded(res, name, [&] {
      CorrespondenceReport rep = correspondence_report(tree, std::max(cfg.brute_budget, 64));
      res.check(rep.rank == rank, name + ": rank " + std::to_string(rep.rank));
      res.check(rep.span_size == (std::size_t{1} << rank), name + ": span size");
      res.check(rep.ok, name + ": " + (rep.failures.empty() ? std::string("report not ok") : rep.failures.front()));
      AutomorphismOptions big;
      big.size_budget = 4096;
      auto enc = encode_binary(build_m_prime(tree).structure);
      std::size_t enc_count = brute_automorphisms(enc, big).size();
      res.check(enc_count == rep.aut_m_prime, name + ": binary encoding has " + std::to_string(enc_count));
      per[name] = rep.to_json();
      per[name]["encoded_automorphisms"] = enc_count;
    });
  }
  res.details["trees"] = per;
}

void suite_prop15(SuiteResult& res, const Config& cfg) {
  Rng rng(cfg.seed);
  const std::size_t n = count_or(cfg, 50);
  for (std::size_t i = 0; i < n; ++i) {
    int size = static_cast<int>(uniform(rng, 1, 5));
    FinStructure M = random_structure(size, 2, rng());
    std::vector<int> order(size);
    for (int k = 0; k < size; ++k) order[k] = k;
    std::shuffle(order.begin(), order.end(), rng);
    guarded(res, "structure " + std::to_string(i), [&] {
      Prop15Report rep = prop15_tree(M, order, cfg.brute_budget);
      res.check(rep.ok, "structure " + std::to_string(i) + ": " + std::to_string(rep.full_branches) +
                            " branches vs " + std::to_string(rep.aut_count) + " automorphisms");
    });
  }
  res.details["structures"] = n;
}

using SuiteFn = std::function<void(SuiteResult&, const Config&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"ordinal", suite_ordinal}, {"lemmaA", suite_lemmaA}, {"f_alpha", suite_f_alpha},
      {"gamma", suite_gamma},     {"rewrite", suite_rewrite}, {"games", suite_games},
      {"orders", suite_orders},   {"trees", suite_trees},   {"prop15", suite_prop15}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, f] : registry()) v.push_back(n);
    return v;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const Config& cfg) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    SuiteResult res;
    res.name = name;
    auto t0 = std::chrono::steady_clock::now();
    fn(res, cfg);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }
  std::string all;
  for (const auto& n : suite_names()) all += (all.empty() ? "" : ", ") + n;
  throw Error("unknown suite '" + name + "' (known: " + all + ")");
}

std::vector<NamedTree> tree_corpus() {
  auto make = [](const char* text) { return tree_from_json(nlohmann::json::parse(text)); };
  return {
      {"path_h4", make(R"({"height":4,"levels":[["p0"],["p1"],["p2"],["p3"]],
                          "parent":{"p1":"p0","p2":"p1","p3":"p2"}})"), 1},
      {"root_two_children", make(R"({"height":2,"levels":[["r"],["x","y"]],"parent":{"x":"r","y":"r"}})"), 2},
      {"full_binary_d2", make(R"({"height":3,"levels":[["r"],["a","b"],["aa","ab","ba","bb"]],
                                 "parent":{"a":"r","b":"r","aa":"a","ab":"a","ba":"b","bb":"b"}})"), 4},
      {"comb3", make(R"({"height":3,"levels":[["s0"],["s1","a1"],["s2","a2","b2"]],
                        "parent":{"s1":"s0","a1":"s0","s2":"s1","b2":"s1","a2":"a1"}})"), 3},
  };
}

FinStructure random_structure(int size, int max_relations, std::uint64_t seed) {
  Rng rng(seed);
  FinStructure M;
  M.size = size;
  int rels = static_cast<int>(uniform(rng, 1, static_cast<std::uint64_t>(std::max(1, max_relations))));
  for (int r = 0; r < rels; ++r) {
    Relation rel{"R" + std::to_string(r), static_cast<int>(uniform(rng, 1, 3)), {}};
    std::size_t total = 1;
    for (int k = 0; k < rel.arity; ++k) total *= static_cast<std::size_t>(size);
    std::bernoulli_distribution keep(rel.arity == 3 ? 0.15 : 0.35);
    for (std::size_t code = 0; code < total; ++code) {
      if (!keep(rng)) continue;
      Tuple t(rel.arity);
      std::size_t c = code;
      for (int k = 0; k < rel.arity; ++k) {
        t[k] = static_cast<int>(c % size);
        c /= size;
      }
      rel.tuples.push_back(std::move(t));
    }
    M.relations.push_back(std::move(rel));
  }
  M.normalize();
  return M;
}

}  // namespace wb
