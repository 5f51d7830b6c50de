#include "wb/games.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "wb/error.hpp"

namespace wb {

std::string to_string(Winner w) { return w == Winner::Exists ? "Exists" : "Forall"; }

std::string GameKind::str() const {
  switch (tag) {
    case EF: return "ef";
    case Splitting: return "splitting";
    case Preceq: return "preceq";
    case Leq: return "leq";
  }
  return "?";
}

GameKind parse_game_kind(const std::string& name, const std::vector<int>& fixed) {
  if (name == "ef") return GameKind::ef();
  if (name == "splitting" || name == "split") return GameKind::splitting();
  if (name == "preceq") return GameKind::preceq(fixed);
  if (name == "leq") return GameKind::leq();
  throw Error("unknown game kind '" + name + "' (expected ef, splitting, preceq or leq)");
}

namespace {

const char* side_name(Demand::Side s) {
  switch (s) {
    case Demand::Dom: return "A";
    case Demand::Ran: return "B";
    case Demand::Identity: return "id";
  }
  return "?";
}

std::string map_key(const PartialMap& m, int rounds) {
  std::string k;
  k.reserve(m.dom_size() + 1);
  for (int a = 0; a < m.dom_size(); ++a) k.push_back(static_cast<char>(m(a) + 1));
  k.push_back(static_cast<char>(rounds));
  return k;
}

void charge(std::size_t& nodes, std::size_t budget) {
  if (++nodes > budget)
    throw BudgetExceeded("game search exceeded the node budget of " + std::to_string(budget));
}

}  // namespace

std::string Demand::str() const { return std::string(side_name(side)) + ":" + std::to_string(point); }

nlohmann::json Move::to_json() const {
  nlohmann::json j{{"player", player}, {"side", side}, {"point", point}};
  j["choice"] = choice ? nlohmann::json(*choice) : nlohmann::json(nullptr);
  return j;
}

Move Move::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("move: expected an object");
  Move m;
  try {
    m.player = j.at("player").get<std::string>();
    m.side = j.at("side").get<std::string>();
    m.point = j.value("point", -1);
    if (j.contains("choice") && !j["choice"].is_null()) m.choice = j["choice"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("move: ") + e.what());
  }
  if (m.player != "forall" && m.player != "exists") throw Error("move: player must be forall or exists");
  return m;
}

std::optional<std::pair<std::string, Tuple>> iso_violation(const FinStructure& A, const FinStructure& B,
                                                           const PartialMap& pi) {
  auto check = [](const FinStructure& X, const FinStructure& Y, const PartialMap& f, bool forward)
      -> std::optional<std::pair<std::string, Tuple>> {
    for (const auto& r : X.relations)
      for (const auto& t : r.tuples) {
        Tuple u;
        bool inside = true;
        for (int x : t) {
          int y = forward ? f(x) : f.preimage(x);
          if (y < 0) {
            inside = false;
            break;
          }
          u.push_back(y);
        }
        if (inside && !Y.holds(r.name, u)) return std::make_pair(r.name, forward ? t : u);
      }
    return std::nullopt;
  };
  if (auto v = check(A, B, pi, true)) return v;
  return check(B, A, pi, false);
}

// Per point, the relation tuples through it, paired with the counterpart relation on the other side.
struct PairGameSolver::Index {
  struct Touch {
    const Relation* rel;
    const Relation* other;
    std::size_t k;
  };
  std::vector<std::vector<Touch>> left, right;

  static void build(const FinStructure& X, const FinStructure& Y, std::vector<std::vector<Touch>>& out) {
    out.assign(X.size, {});
    for (const auto& r : X.relations) {
      const Relation* o = Y.find(r.name);
      for (std::size_t k = 0; k < r.tuples.size(); ++k) {
        std::vector<int> seen;
        for (int x : r.tuples[k]) {
          if (std::find(seen.begin(), seen.end(), x) != seen.end()) continue;
          seen.push_back(x);
          out[x].push_back({&r, o, k});
        }
      }
    }
  }
};

PairGameSolver::PairGameSolver(const FinStructure& A, const FinStructure& B, bool leq_rules, SolverOptions opt)
    : A_(A), B_(B), leq_(leq_rules), opt_(opt), idx_(std::make_shared<Index>()) {
  Index::build(A_, B_, idx_->left);
  Index::build(B_, A_, idx_->right);
}

bool PairGameSolver::extension_ok(const PartialMap& pi, int a, int b) const {
  auto through = [](const std::vector<Index::Touch>& touches, auto map_of) {
    for (const auto& t : touches) {
      const Tuple& tup = t.rel->tuples[t.k];
      Tuple u(tup.size());
      bool inside = true;
      for (std::size_t i = 0; i < tup.size() && inside; ++i) {
        u[i] = map_of(tup[i]);
        inside = u[i] >= 0;
      }
      if (!inside) continue;
      if (!t.other || !std::binary_search(t.other->tuples.begin(), t.other->tuples.end(), u)) return false;
    }
    return true;
  };
  auto fwd = [&](int x) { return x == a ? b : pi(x); };
  auto bwd = [&](int y) { return y == b ? a : pi.preimage(y); };
  return through(idx_->left[a], fwd) && through(idx_->right[b], bwd);
}

std::vector<Demand> PairGameSolver::demands(const PartialMap& pi) const {
  std::vector<Demand> out;
  if (leq_)
    for (int a = 0; a < A_.size; ++a)
      if (!pi.in_dom(a) && !pi.in_ran(a)) out.push_back({Demand::Identity, a});
  for (int a = 0; a < A_.size; ++a)
    if (!pi.in_dom(a)) out.push_back({Demand::Dom, a});
  for (int b = 0; b < B_.size; ++b)
    if (!pi.in_ran(b)) out.push_back({Demand::Ran, b});
  return out;
}

std::vector<int> PairGameSolver::responses(const PartialMap& pi, const Demand& d) const {
  std::vector<int> out;
  switch (d.side) {
    case Demand::Identity:
      if (d.point < A_.size && d.point < B_.size && !pi.in_dom(d.point) && !pi.in_ran(d.point) &&
          extension_ok(pi, d.point, d.point))
        out.push_back(d.point);
      break;
    case Demand::Dom:
      if (pi.in_dom(d.point)) break;
      for (int b = 0; b < B_.size; ++b)
        if (!pi.in_ran(b) && extension_ok(pi, d.point, b)) out.push_back(b);
      break;
    case Demand::Ran:
      if (pi.in_ran(d.point)) break;
      for (int a = 0; a < A_.size; ++a)
        if (!pi.in_dom(a) && extension_ok(pi, a, d.point)) out.push_back(a);
      break;
  }
  return out;
}

PartialMap PairGameSolver::apply(const PartialMap& pi, const Demand& d, int response) const {
  return d.side == Demand::Ran ? pi.with(response, d.point) : pi.with(d.point, response);
}

bool PairGameSolver::exists_wins(const PartialMap& pi, int rounds) {
  if (rounds <= 0) return true;
  std::string key = map_key(pi, rounds);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  charge(nodes_, opt_.node_budget);
  bool win = true;
  for (const auto& d : demands(pi)) {
    bool answered = false;
    for (int r : responses(pi, d))
      if (exists_wins(apply(pi, d, r), rounds - 1)) {
        answered = true;
        break;
      }
    if (!answered) {
      win = false;
      break;
    }
  }
  memo_[key] = win;
  return win;
}

std::optional<int> PairGameSolver::winning_response(const PartialMap& pi, const Demand& d, int rounds) {
  for (int r : responses(pi, d))
    if (exists_wins(apply(pi, d, r), rounds - 1)) return r;
  return std::nullopt;
}

SplittingSolver::SplittingSolver(const FinStructure& A, SolverOptions opt) : A_(A), opt_(opt) {}

std::vector<Demand> SplittingSolver::demands(const PartialMap& pi) const {
  std::vector<Demand> out;
  for (int a = 0; a < A_.size; ++a)
    if (!pi.in_dom(a)) out.push_back({Demand::Dom, a});
  for (int b = 0; b < A_.size; ++b)
    if (!pi.in_ran(b)) out.push_back({Demand::Ran, b});
  return out;
}

bool SplittingSolver::extendable(const PartialMap& pi) {
  std::string key = map_key(pi, 0);
  if (auto it = ext_memo_.find(key); it != ext_memo_.end()) return it->second;
  bool ok = extends_to_automorphism(A_, pi, opt_.aut_budget);
  ext_memo_[key] = ok;
  return ok;
}

std::vector<int> SplittingSolver::responses(const PartialMap& pi, const Demand& d) {
  std::vector<int> out;
  if (d.side == Demand::Identity) return out;
  for (int v = 0; v < A_.size; ++v) {
    bool free = d.side == Demand::Dom ? !pi.in_ran(v) && !pi.in_dom(d.point) : !pi.in_dom(v) && !pi.in_ran(d.point);
    if (free && extendable(apply(pi, d, v))) out.push_back(v);
  }
  return out;
}

PartialMap SplittingSolver::apply(const PartialMap& pi, const Demand& d, int response) const {
  return d.side == Demand::Ran ? pi.with(response, d.point) : pi.with(d.point, response);
}

bool SplittingSolver::exists_wins(const PartialMap& pi, int rounds) {
  if (rounds <= 0) return true;
  std::string key = map_key(pi, rounds);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  charge(nodes_, opt_.node_budget);
  bool win = true;
  for (const auto& d : demands(pi))
    if (winning_responses(pi, d, rounds).size() < 2) {
      win = false;
      break;
    }
  memo_[key] = win;
  return win;
}

std::vector<int> SplittingSolver::winning_responses(const PartialMap& pi, const Demand& d, int rounds) {
  std::vector<int> out;
  for (int v : responses(pi, d))
    if (exists_wins(apply(pi, d, v), rounds - 1)) out.push_back(v);
  return out;
}

Winner ef_winner(const FinStructure& A, const FinStructure& B, int rounds, const SolverOptions& opt) {
  if (rounds < 0) throw Error("rounds must be non-negative");
  PairGameSolver s(A, B, false, opt);
  return s.exists_wins(s.empty_map(), rounds) ? Winner::Exists : Winner::Forall;
}

Winner splitting_winner(const FinStructure& A, int rounds, const SolverOptions& opt) {
  if (rounds < 0) throw Error("rounds must be non-negative");
  SplittingSolver s(A, opt);
  return s.exists_wins(s.empty_map(), rounds) ? Winner::Exists : Winner::Forall;
}

namespace {

void require_substructure(const FinStructure& A, const FinStructure& B) {
  if (A.size > B.size) throw Error("restricted game: A has more points than B");
  std::vector<int> first(A.size);
  for (int i = 0; i < A.size; ++i) first[i] = i;
  FinStructure R = B.induced(first);
  std::set<std::string> names;
  for (const auto& r : A.relations) names.insert(r.name);
  for (const auto& r : R.relations) names.insert(r.name);
  for (const auto& n : names) {
    const Relation* x = A.find(n);
    const Relation* y = R.find(n);
    std::vector<Tuple> tx = x ? x->tuples : std::vector<Tuple>{};
    std::vector<Tuple> ty = y ? y->tuples : std::vector<Tuple>{};
    if (tx != ty)
      throw Error("restricted game: A is not B restricted to its first " + std::to_string(A.size) +
                  " points (relation '" + n + "' differs)");
  }
}

PartialMap identity_on(const std::vector<int>& C, int a_size, int b_size) {
  PartialMap pi(a_size, b_size);
  for (int c : C) {
    if (c < 0 || c >= a_size) throw Error("fixed set C is not a subset of A: point " + std::to_string(c));
    pi.add(c, c);
  }
  return pi;
}

}  // namespace

Winner restricted_winner(const GameKind& kind, const FinStructure& A, const FinStructure& B, int rounds,
                         const SolverOptions& opt) {
  if (rounds < 0) throw Error("rounds must be non-negative");
  if (kind.tag != GameKind::Preceq && kind.tag != GameKind::Leq)
    throw Error("restricted_winner expects the preceq or leq kind");
  require_substructure(A, B);
  if (kind.tag == GameKind::Preceq) {
    PartialMap start = identity_on(kind.fixed, A.size, B.size);
    PairGameSolver s(A, B, false, opt);
    return s.exists_wins(start, rounds) ? Winner::Exists : Winner::Forall;
  }
  PairGameSolver s(A, B, true, opt);
  return s.exists_wins(s.empty_map(), rounds) ? Winner::Exists : Winner::Forall;
}

SplitStrategy solved_split_strategy(std::shared_ptr<SplittingSolver> solver, int rounds) {
  return [solver, rounds](const SplitState& s, const Demand& d) {
    auto vals = solver->winning_responses(s.pi, d, rounds - s.round);
    if (vals.size() < 2) vals = solver->responses(s.pi, d);
    if (vals.size() < 2)
      throw Error("no split available for demand " + d.str() + " at round " + std::to_string(s.round + 1));
    SplitState p = s, q = s;
    p.pi = solver->apply(s.pi, d, vals[0]);
    q.pi = solver->apply(s.pi, d, vals[1]);
    p.round = q.round = s.round + 1;
    return std::make_pair(p, q);
  };
}

PartialMap compose_maps(const PartialMap& sigma, const PartialMap& rho) {
  PartialMap out(sigma.dom_size(), rho.ran_size());
  for (int a = 0; a < sigma.dom_size(); ++a)
    if (sigma.in_dom(a) && rho.in_dom(sigma(a))) out.add(a, rho(sigma(a)));
  return out;
}

ComposedStrategy::ComposedStrategy(const FinStructure& A, const FinStructure& B, int split_rounds, SolverOptions opt)
    : A_(A), B_(B), split_rounds_(split_rounds) {
  if (B.size <= A.size)
    throw Error("compose_strategy needs |B| > |A| (got " + std::to_string(B.size) + " and " +
                std::to_string(A.size) + ")");
  if (split_rounds < 0) throw Error("split rounds must be non-negative");
  ab_ = std::make_shared<PairGameSolver>(A, B, false, opt);
  ba_ = std::make_shared<PairGameSolver>(B, A, false, opt);
  // Each split round uses one move on one side and up to two on the other.
  horizon_ = 2 * split_rounds;
  while (horizon_ > 0 &&
         !(ab_->exists_wins(ab_->empty_map(), horizon_) && ba_->exists_wins(ba_->empty_map(), horizon_)))
    --horizon_;
}

SplitState ComposedStrategy::initial() const {
  return SplitState{PartialMap(A_.size, A_.size), PartialMap(A_.size, B_.size), PartialMap(B_.size, A_.size), 0};
}

bool ComposedStrategy::s_position(PairGameSolver& g, const PartialMap& m) {
  int rem = horizon_ - static_cast<int>(m.count());
  return rem <= 0 || g.exists_wins(m, rem);
}

std::optional<int> ComposedStrategy::s_answer(PairGameSolver& g, const PartialMap& m, const Demand& d) {
  auto rs = g.responses(m, d);
  for (int r : rs)
    if (s_position(g, g.apply(m, d, r))) return r;
  if (!rs.empty()) return rs.front();
  return std::nullopt;
}

std::pair<std::pair<PartialMap, PartialMap>, std::pair<PartialMap, PartialMap>> ComposedStrategy::split_domain(
    PairGameSolver& g1, PairGameSolver& g2, const PartialMap& first, const PartialMap& second, int x, int round) {
  auto fail = [&]() -> std::pair<std::pair<PartialMap, PartialMap>, std::pair<PartialMap, PartialMap>> {
    throw Error("insufficient slack at round " + std::to_string(round));
  };
  if (first.in_dom(x)) {
    int y = first(x);
    std::vector<int> good;
    for (int a : g2.responses(second, {Demand::Dom, y}))
      if (s_position(g2, second.with(y, a))) good.push_back(a);
    if (good.size() < 2) return fail();
    return {{first, second.with(y, good[0])}, {first, second.with(y, good[1])}};
  }
  // Two targets b != b' outside ran(first), both S-positions; the second map is then extended at both.
  std::vector<int> targets;
  for (int b : g1.responses(first, {Demand::Dom, x}))
    if (s_position(g1, first.with(x, b))) targets.push_back(b);
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      PartialMap shared = second;
      bool ok = true;
      for (int b : {targets[i], targets[j]}) {
        if (shared.in_dom(b)) continue;
        auto a = s_answer(g2, shared, {Demand::Dom, b});
        if (!a) {
          ok = false;
          break;
        }
        shared = shared.with(b, *a);
      }
      if (ok) return {{first.with(x, targets[i]), shared}, {first.with(x, targets[j]), shared}};
    }
  return fail();
}

std::pair<SplitState, SplitState> ComposedStrategy::reply(const SplitState& s, const Demand& d) {
  SplitState p = s, q = s;
  p.round = q.round = s.round + 1;
  if (d.side == Demand::Dom) {
    auto [l, r] = split_domain(*ab_, *ba_, s.sigma, s.rho, d.point, p.round);
    p.sigma = l.first, p.rho = l.second;
    q.sigma = r.first, q.rho = r.second;
  } else if (d.side == Demand::Ran) {
    // The inverse of pi is sigma^-1 o rho^-1, with rho^-1 : A -> B playing the first role.
    auto [l, r] = split_domain(*ab_, *ba_, s.rho.inverse(), s.sigma.inverse(), d.point, p.round);
    p.rho = l.first.inverse(), p.sigma = l.second.inverse();
    q.rho = r.first.inverse(), q.sigma = r.second.inverse();
  } else {
    throw Error("the splitting game has no identity demands");
  }
  p.pi = compose_maps(p.sigma, p.rho);
  q.pi = compose_maps(q.sigma, q.rho);
  return {p, q};
}

SplitStrategy ComposedStrategy::as_strategy() {
  auto self = std::make_shared<ComposedStrategy>(*this);
  return [self](const SplitState& s, const Demand& d) { return self->reply(s, d); };
}

ComposedStrategy compose_strategy(const FinStructure& A, const FinStructure& B, int split_rounds,
                                  const SolverOptions& opt) {
  return ComposedStrategy(A, B, split_rounds, opt);
}

SplitYield split_yield(const FinStructure& A, const SplitStrategy& strategy, const SplitState& start, int rounds,
                       int aut_budget) {
  if (rounds < 0) throw Error("rounds must be non-negative");
  std::set<std::vector<std::pair<int, int>>> leaves;
  SplitYield y;
  std::vector<std::string> path;
  auto transcript = [&] {
    std::string t;
    for (const auto& p : path) t += (t.empty() ? "" : " ") + p;
    return t.empty() ? std::string("(start)") : t;
  };
  auto legal = [&](const SplitState& from, const SplitState& to, const Demand& d) -> std::string {
    if (!to.pi.extends(from.pi)) return "reply does not extend the current map";
    if (d.side == Demand::Dom ? !to.pi.in_dom(d.point) : !to.pi.in_ran(d.point))
      return "reply is undefined at the demanded point";
    if (!is_partial_iso(A, A, to.pi)) return "reply is not a partial isomorphism";
    if (A.size <= aut_budget && !extends_to_automorphism(A, to.pi, aut_budget))
      return "reply does not extend to an automorphism";
    if (to.sigma.dom_size() > 0 && !(compose_maps(to.sigma, to.rho) == to.pi))
      return "reply breaks pi = rho o sigma";
    return {};
  };
  std::function<void(const SplitState&, int)> go = [&](const SplitState& s, int depth) {
    std::vector<Demand> ds;
    for (int a = 0; a < A.size; ++a)
      if (!s.pi.in_dom(a)) ds.push_back({Demand::Dom, a});
    for (int b = 0; b < A.size; ++b)
      if (!s.pi.in_ran(b)) ds.push_back({Demand::Ran, b});
    if (depth == rounds || ds.empty()) {
      leaves.insert(s.pi.pairs());
      ++y.branches;
      return;
    }
    for (const auto& d : ds) {
      path.push_back(d.str());
      std::pair<SplitState, SplitState> r;
      try {
        r = strategy(s, d);
      } catch (const BudgetExceeded&) {
        throw;
      } catch (const Error& e) {
        throw Error("strategy lost after " + transcript() + ": " + e.what());
      }
      for (const SplitState* t : {&r.first, &r.second}) {
        std::string why = legal(s, *t, d);
        if (!why.empty()) throw Error("strategy lost after " + transcript() + ": " + why);
      }
      int v1 = d.side == Demand::Dom ? r.first.pi(d.point) : r.first.pi.preimage(d.point);
      int v2 = d.side == Demand::Dom ? r.second.pi(d.point) : r.second.pi.preimage(d.point);
      if (v1 == v2) throw Error("strategy lost after " + transcript() + ": the two extensions agree at the demand");
      for (int c = 0; c < 2; ++c) {
        path.push_back("pick" + std::to_string(c));
        go(c == 0 ? r.first : r.second, depth + 1);
        path.pop_back();
      }
      path.pop_back();
    }
  };
  go(start, 0);
  y.leaves = leaves.size();
  return y;
}

GameSession::GameSession(GameKind kind, FinStructure A, FinStructure B, int rounds, SolverOptions opt)
    : kind_(std::move(kind)), A_(std::move(A)), B_(std::move(B)), rounds_(rounds) {
  if (rounds < 0) throw Error("rounds must be non-negative");
  switch (kind_.tag) {
    case GameKind::EF:
      pair_ = std::make_shared<PairGameSolver>(A_, B_, false, opt);
      pi_ = pair_->empty_map();
      break;
    case GameKind::Preceq:
      require_substructure(A_, B_);
      pair_ = std::make_shared<PairGameSolver>(A_, B_, false, opt);
      pi_ = identity_on(kind_.fixed, A_.size, B_.size);
      break;
    case GameKind::Leq:
      require_substructure(A_, B_);
      pair_ = std::make_shared<PairGameSolver>(A_, B_, true, opt);
      pi_ = pair_->empty_map();
      break;
    case GameKind::Splitting:
      B_ = A_;
      split_ = std::make_shared<SplittingSolver>(A_, opt);
      pi_ = split_->empty_map();
      break;
  }
  finish_round();
}

std::vector<Demand> GameSession::legal() const {
  if (over() || awaiting_choice()) return {};
  return pair_ ? pair_->demands(pi_) : split_->demands(pi_);
}

void GameSession::finish_round() {
  if (winner_) return;
  if (round_ >= rounds_) {
    winner_ = Winner::Exists;
    reason_ = "duplicator survived all rounds";
  } else if ((pair_ ? pair_->demands(pi_) : split_->demands(pi_)).empty()) {
    winner_ = Winner::Exists;
    reason_ = "no moves left for the spoiler";
  }
}

void GameSession::move(const Demand& d) {
  if (over()) throw Error("the game is over");
  if (awaiting_choice()) throw Error("pick one of the two offered extensions first");
  auto ls = legal();
  if (std::find(ls.begin(), ls.end(), d) == ls.end()) throw Error("illegal move " + d.str());
  transcript_.push_back({"forall", side_name(d.side), d.point, std::nullopt});
  int remaining = rounds_ - round_;
  const char* reply_side = d.side == Demand::Dom ? "B" : d.side == Demand::Ran ? "A" : "id";
  if (pair_) {
    auto r = pair_->winning_response(pi_, d, remaining);
    if (!r) {
      auto rs = pair_->responses(pi_, d);
      if (!rs.empty()) r = rs.front();
    }
    if (!r) {
      winner_ = Winner::Forall;
      reason_ = "no partial isomorphism extends the map at " + d.str();
      if (d.side == Demand::Identity && !pi_.in_ran(d.point)) {
        PartialMap bad = pi_;
        bad.add(d.point, d.point);
        losing_tuple_ = iso_violation(A_, B_, bad);
      }
      return;
    }
    pi_ = pair_->apply(pi_, d, *r);
    transcript_.push_back({"exists", reply_side, *r, std::nullopt});
    ++round_;
    finish_round();
    return;
  }
  auto vals = split_->winning_responses(pi_, d, remaining);
  if (vals.size() < 2) vals = split_->responses(pi_, d);
  if (vals.size() < 2) {
    winner_ = Winner::Forall;
    reason_ = "no two contradictory extensions at " + d.str();
    return;
  }
  pending_ = {split_->apply(pi_, d, vals[0]), split_->apply(pi_, d, vals[1])};
  transcript_.push_back({"exists", reply_side, vals[0], vals[1]});
}

void GameSession::choose(int which) {
  if (!awaiting_choice()) throw Error("no extensions are waiting for a choice");
  if (which != 0 && which != 1) throw Error("choice must be 0 or 1");
  pi_ = pending_[which];
  pending_.clear();
  transcript_.push_back({"forall", "pick", -1, which});
  ++round_;
  finish_round();
}

Demand GameSession::to_demand(const Move& m) const {
  if (m.side == "A") return {Demand::Dom, m.point};
  if (m.side == "B") return {Demand::Ran, m.point};
  if (m.side == "id") return {Demand::Identity, m.point};
  throw Error("move side must be A, B or id");
}

GameSession GameSession::replay(GameKind kind, FinStructure A, FinStructure B, int rounds,
                                const std::vector<Move>& moves, SolverOptions opt) {
  GameSession s(std::move(kind), std::move(A), std::move(B), rounds, opt);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const Move& m = moves[i];
    if (m.player == "exists") {
      std::size_t at = i;
      if (at >= s.transcript_.size() || !(s.transcript_[at].to_json() == m.to_json()))
        throw Error("replay diverged at move " + std::to_string(i + 1));
      continue;
    }
    if (m.side == "pick")
      s.choose(m.choice.value_or(-1));
    else
      s.move(s.to_demand(m));
  }
  return s;
}

nlohmann::json GameSession::state_json() const {
  nlohmann::json legal_j = nlohmann::json::array();
  for (const auto& d : legal()) legal_j.push_back({{"side", side_name(d.side)}, {"point", d.point}});
  nlohmann::json pend = nlohmann::json::array();
  for (const auto& p : pending_) pend.push_back(map_to_json(p));
  nlohmann::json tr = nlohmann::json::array();
  for (const auto& m : transcript_) tr.push_back(m.to_json());
  nlohmann::json j{{"kind", kind_.str()},   {"round", round_}, {"rounds", rounds_}, {"map", map_to_json(pi_)},
                   {"over", over()},        {"pending", pend}, {"legal", legal_j},  {"transcript", tr}};
  j["winner"] = winner_ ? nlohmann::json(to_string(*winner_)) : nlohmann::json(nullptr);
  j["reason"] = reason_;
  if (losing_tuple_)
    j["losing_tuple"] = {{"relation", losing_tuple_->first}, {"tuple", losing_tuple_->second}};
  else
    j["losing_tuple"] = nullptr;
  return j;
}

}  // namespace wb
