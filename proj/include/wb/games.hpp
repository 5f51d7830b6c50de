#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "wb/structure.hpp"

namespace wb {

enum class Winner { Exists, Forall };
std::string to_string(Winner w);

struct SolverOptions {
  std::size_t node_budget = 5'000'000;
  int aut_budget = 64;  // size budget for automorphism-extension checks in the splitting game
};

// Kinds of single-structure-pair games. Preceq starts from the identity on `fixed`.
struct GameKind {
  enum Tag { EF, Splitting, Preceq, Leq } tag = EF;
  std::vector<int> fixed;

  static GameKind ef() { return {EF, {}}; }
  static GameKind splitting() { return {Splitting, {}}; }
  static GameKind preceq(std::vector<int> c) { return {Preceq, std::move(c)}; }
  static GameKind leq() { return {Leq, {}}; }
  std::string str() const;
};
GameKind parse_game_kind(const std::string& name, const std::vector<int>& fixed = {});

// A move demanded by the spoiler. Dom: a point of the left structure to be mapped;
// Ran: a point of the right structure to be hit; Identity: the pair (a, a).
struct Demand {
  enum Side { Dom, Ran, Identity } side = Dom;
  int point = 0;
  bool operator==(const Demand&) const = default;
  std::string str() const;
};

struct Move {
  std::string player;  // "forall" or "exists"
  std::string side;    // "A", "B", "id", "pick"
  int point = -1;
  std::optional<int> choice;
  nlohmann::json to_json() const;
  static Move from_json(const nlohmann::json& j);
};

// First tuple witnessing that pi is not a partial isomorphism: (relation, tuple on the left side).
std::optional<std::pair<std::string, Tuple>> iso_violation(const FinStructure& A, const FinStructure& B,
                                                           const PartialMap& pi);

// Exhaustive solver for the EF game and the G_leq game on a fixed pair (A, B).
// A position is a partial map A -> B; the duplicator must keep a partial isomorphism.
class PairGameSolver {
 public:
  PairGameSolver(const FinStructure& A, const FinStructure& B, bool leq_rules = false, SolverOptions opt = {});

  const FinStructure& left() const { return A_; }
  const FinStructure& right() const { return B_; }

  std::vector<Demand> demands(const PartialMap& pi) const;
  // Legal duplicator answers (other side's point); Identity demands have at most one.
  std::vector<int> responses(const PartialMap& pi, const Demand& d) const;
  PartialMap apply(const PartialMap& pi, const Demand& d, int response) const;

  bool exists_wins(const PartialMap& pi, int rounds);
  // Smallest response after which the duplicator still wins rounds-1 more rounds.
  std::optional<int> winning_response(const PartialMap& pi, const Demand& d, int rounds);
  PartialMap empty_map() const { return PartialMap(A_.size, B_.size); }
  std::size_t nodes() const { return nodes_; }

 private:
  bool extension_ok(const PartialMap& pi, int a, int b) const;

  FinStructure A_, B_;
  bool leq_;
  SolverOptions opt_;
  struct Index;
  std::shared_ptr<Index> idx_;
  std::unordered_map<std::string, bool> memo_;
  std::size_t nodes_ = 0;
};

// Splitting game on one structure: the duplicator must give two extensions, both defined at the
// demanded point, disagreeing there, each extendable to an automorphism.
class SplittingSolver {
 public:
  explicit SplittingSolver(const FinStructure& A, SolverOptions opt = {});
  std::vector<Demand> demands(const PartialMap& pi) const;
  // Answers v such that pi + (x, v) (or (v, y) for Ran) extends to an automorphism.
  std::vector<int> responses(const PartialMap& pi, const Demand& d);
  PartialMap apply(const PartialMap& pi, const Demand& d, int response) const;
  bool exists_wins(const PartialMap& pi, int rounds);
  std::vector<int> winning_responses(const PartialMap& pi, const Demand& d, int rounds);
  PartialMap empty_map() const { return PartialMap(A_.size, A_.size); }
  const FinStructure& structure() const { return A_; }

 private:
  bool extendable(const PartialMap& pi);
  FinStructure A_;
  SolverOptions opt_;
  std::unordered_map<std::string, bool> memo_, ext_memo_;
  std::size_t nodes_ = 0;
};

Winner ef_winner(const FinStructure& A, const FinStructure& B, int rounds, const SolverOptions& opt = {});
Winner splitting_winner(const FinStructure& A, int rounds, const SolverOptions& opt = {});
// kind is Preceq(C) or Leq; A must be B restricted to its first |A| points.
Winner restricted_winner(const GameKind& kind, const FinStructure& A, const FinStructure& B, int rounds,
                         const SolverOptions& opt = {});

// Splitting-game position. sigma: A -> B and rho: B -> A are only used by composed strategies.
struct SplitState {
  PartialMap pi, sigma, rho;
  int round = 0;
};

using SplitStrategy = std::function<std::pair<SplitState, SplitState>(const SplitState&, const Demand&)>;

// Duplicator strategy read off the splitting solver, for a game of `rounds` rounds.
SplitStrategy solved_split_strategy(std::shared_ptr<SplittingSolver> solver, int rounds);

// Builds a splitting strategy for A out of EF strategies for (A, B) and (B, A) by keeping pi = rho o sigma.
class ComposedStrategy {
 public:
  ComposedStrategy(const FinStructure& A, const FinStructure& B, int split_rounds, SolverOptions opt = {});
  SplitState initial() const;
  std::pair<SplitState, SplitState> reply(const SplitState& s, const Demand& d);
  SplitStrategy as_strategy();
  int horizon() const { return horizon_; }

 private:
  bool s_position(PairGameSolver& g, const PartialMap& m);
  std::optional<int> s_answer(PairGameSolver& g, const PartialMap& m, const Demand& d);
  std::pair<std::pair<PartialMap, PartialMap>, std::pair<PartialMap, PartialMap>> split_domain(
      PairGameSolver& g1, PairGameSolver& g2, const PartialMap& first, const PartialMap& second, int x,
      int round);

  FinStructure A_, B_;
  int split_rounds_;
  std::shared_ptr<PairGameSolver> ab_, ba_;
  int horizon_ = 0;
};

ComposedStrategy compose_strategy(const FinStructure& A, const FinStructure& B, int split_rounds,
                                  const SolverOptions& opt = {});

// Relational composition rho o sigma as a partial map on A.
PartialMap compose_maps(const PartialMap& sigma, const PartialMap& rho);

struct SplitYield {
  std::size_t leaves = 0;  // distinct leaf maps
  std::size_t branches = 0;
};

// Plays the strategy against every spoiler demand and every choice for `rounds` rounds.
SplitYield split_yield(const FinStructure& A, const SplitStrategy& strategy, const SplitState& start, int rounds,
                       int aut_budget = 64);

// Interactive session: the human is the spoiler, the engine the duplicator.
class GameSession {
 public:
  GameSession(GameKind kind, FinStructure A, FinStructure B, int rounds, SolverOptions opt = {});

  const GameKind& kind() const { return kind_; }
  const PartialMap& map() const { return pi_; }
  int round() const { return round_; }
  int rounds() const { return rounds_; }
  bool over() const { return winner_.has_value(); }
  std::optional<Winner> winner() const { return winner_; }
  bool awaiting_choice() const { return !pending_.empty(); }
  const std::vector<PartialMap>& pending() const { return pending_; }

  std::vector<Demand> legal() const;
  // Spoiler demand; the engine replies immediately. Throws on illegal moves.
  void move(const Demand& d);
  // Splitting game only: the spoiler keeps extension 0 or 1.
  void choose(int which);

  const std::vector<Move>& transcript() const { return transcript_; }
  nlohmann::json state_json() const;
  static GameSession replay(GameKind kind, FinStructure A, FinStructure B, int rounds,
                            const std::vector<Move>& moves, SolverOptions opt = {});

 private:
  void finish_round();
  Demand to_demand(const Move& m) const;

  GameKind kind_;
  FinStructure A_, B_;
  int rounds_;
  int round_ = 0;
  PartialMap pi_;
  std::optional<Winner> winner_;
  std::string reason_;
  std::optional<std::pair<std::string, Tuple>> losing_tuple_;
  std::vector<PartialMap> pending_;
  std::vector<Move> transcript_;
  std::shared_ptr<PairGameSolver> pair_;
  std::shared_ptr<SplittingSolver> split_;
};

}  // namespace wb
