#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "wb/error.hpp"
#include "wb/freegroup.hpp"
#include "wb/games.hpp"
#include "wb/linear_orders.hpp"
#include "wb/ordinal.hpp"
#include "wb/shelah.hpp"
#include "wb/structure.hpp"
#include "wb/suites.hpp"
#include "wb/tree_models.hpp"

namespace wb {
namespace {

// Bad input from the command line or a file; maps to exit code 2.
struct UsageError : Error {
  using Error::Error;
};

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

template <class T, class F>
T from_file(const std::string& path, F&& convert) {
  nlohmann::json j = load_json_file(path);
  try {
    return convert(j);
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

FinStructure load_structure(const std::string& path) {
  return from_file<FinStructure>(path, [](const nlohmann::json& j) { return structure_from_json(j); });
}

LevelTree load_tree(const std::string& path) {
  return from_file<LevelTree>(path, [](const nlohmann::json& j) { return tree_from_json(j); });
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (cur.find_first_not_of(" \t") != std::string::npos) out.push_back(cur);
  return out;
}

int to_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size() || v < 0 || v > 1'000'000) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " must be a non-negative integer, got '" + s + "'");
  }
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) out.push_back(to_int(part, "list entry"));
  return out;
}

Symbol parse_symbol(const std::string& text) {
  static const std::regex re(R"(\s*([sS])\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("bad symbol '" + text + "' (expected s(b,a) or S(b,a))");
  return {static_cast<unsigned>(std::stoul(m[2])), static_cast<unsigned>(std::stoul(m[3])), m[1] == "S"};
}

std::vector<Symbol> parse_symbols(const std::string& text) {
  std::vector<Symbol> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok)
    if (tok != "e") out.push_back(parse_symbol(tok));
  return out;
}

Word word_arg(const std::string& text) {
  auto syms = parse_symbols(text);
  Validation v = validate(syms);
  if (!v.ok()) {
    std::string names;
    for (const auto& n : v.violations) names += " " + n;
    throw UsageError("not a reduced word:" + names);
  }
  return *v.word;
}

void need(const std::vector<std::string>& args, std::size_t n, const std::string& usage) {
  if (args.size() != n) throw UsageError("usage: " + usage);
}

struct Flags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  unsigned truncation = 0;
  int brute_budget = 0;
  std::size_t samples = 0;
};

Config resolve_config(const Flags& f) {
  Config cfg;
  std::string path = f.config_path;
  if (path.empty())
    if (const char* env = std::getenv("WB_CONFIG")) path = env;
  if (!path.empty()) cfg = from_file<Config>(path, [](const nlohmann::json& j) { return Config::from_json(j); });
  if (f.seed) cfg.seed = f.seed;
  if (f.budget) cfg.node_budget = f.budget;
  if (f.truncation) cfg.truncation = f.truncation;
  if (f.brute_budget) cfg.brute_budget = f.brute_budget;
  if (f.samples) cfg.samples = f.samples;
  return cfg;
}

SolverOptions solver_options(const Config& cfg) {
  SolverOptions o;
  o.node_budget = cfg.node_budget;
  return o;
}

// ---- subcommands

void cmd_ord(const std::string& op, const std::vector<std::string>& a, std::ostream& out) {
  if (op == "add" || op == "sub" || op == "cmp") {
    need(a, 2, "ord " + op + " <a> <b>");
    Ordinal x = parse_ordinal(a[0]), y = parse_ordinal(a[1]);
    if (op == "add") out << add(x, y).str() << "\n";
    if (op == "sub") out << left_sub(x, y).str() << "\n";
    if (op == "cmp") out << to_string(cmp(x, y)) << "\n";
  } else if (op == "gamma") {
    need(a, 1, "ord gamma <n>");
    out << gamma(static_cast<unsigned>(to_int(a[0], "n"))).str() << "\n";
  } else if (op == "parity") {
    need(a, 1, "ord parity <a>");
    out << to_string(parity(parse_ordinal(a[0]))) << "\n";
  } else if (op == "level") {
    need(a, 1, "ord level <a>");
    auto lv = level_of(parse_ordinal(a[0]));
    out << (lv ? std::to_string(*lv) : "none") << "\n";
  } else if (op == "norm") {
    need(a, 1, "ord norm <a>");
    out << parse_ordinal(a[0]).str() << "\n";
  } else {
    throw UsageError("unknown ord operation '" + op + "' (add, sub, cmp, gamma, parity, level, norm)");
  }
}

int cmd_word(const std::string& op, const std::vector<std::string>& a, bool inverse, std::ostream& out) {
  if (op == "validate") {
    need(a, 1, "word validate '<symbols>'");
    Validation v = validate(parse_symbols(a[0]));
    if (v.ok()) {
      out << "valid " << v.word->str() << "\n";
      return 0;
    }
    out << "invalid";
    for (const auto& n : v.violations) out << " " << n;
    out << "\n";
    return 1;
  }
  if (op == "lmul") {
    need(a, 2, "word lmul <symbol> '<word>' [--inverse]");
    Symbol s = parse_symbol(a[0]);
    out << lmul(s, word_arg(a[1]), inverse).str() << "\n";
    return 0;
  }
  throw UsageError("unknown word operation '" + op + "' (validate, lmul)");
}

std::vector<Ordinal> ordinal_list(const std::string& s) {
  std::vector<Ordinal> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_ordinal(part));
  return out;
}

int cmd_shelah(const std::string& op, const std::vector<std::string>& a, const Config& cfg, bool json,
               const std::string& to, const std::string& sample, std::ostream& out) {
  ShelahModel model(cfg.truncation);
  auto level = [](const std::string& s) { return static_cast<unsigned>(to_int(s, "level")); };
  if (op == "xi") {
    need(a, 3, "shelah xi <alpha> '<word>' <j>");
    out << model.xi(level(a[0]), word_arg(a[1]), parse_ordinal(a[2])).str() << "\n";
  } else if (op == "decode") {
    need(a, 2, "shelah decode <alpha> <ordinal>");
    auto pc = model.decode(level(a[0]), parse_ordinal(a[1]));
    if (!pc) {
      out << "absent\n";
      return 1;
    }
    out << pc->word.str() << " ; " << pc->j.str() << "\n";
  } else if (op == "f") {
    need(a, 2, "shelah f <alpha> <ordinal>");
    out << model.f_apply(level(a[0]), parse_ordinal(a[1])).str() << "\n";
  } else if (op == "preimage") {
    need(a, 2, "shelah preimage <alpha> <ordinal>");
    out << model.f_preimage(level(a[0]), parse_ordinal(a[1])).str() << "\n";
  } else if (op == "trajectory") {
    need(a, 2, "shelah trajectory '<composite>' <start>");
    auto tr = model.apply_composite(parse_composite(a[0]), parse_ordinal(a[1]));
    if (json)
      out << tr.to_json().dump(2) << "\n";
    else
      out << tr.to_text();
  } else if (op == "gamma-witness") {
    need(a, 2, "shelah gamma-witness '<composite>' <delta>");
    auto rep = model.gamma_claim_witness(parse_composite(a[0]), level(a[1]));
    out << rep.to_json().dump(2) << "\n";
    return rep.ok ? 0 : 1;
  } else if (op == "rewrite") {
    need(a, 1, "shelah rewrite '<composite>' --to G1|G2 --sample <list>");
    Group target;
    if (to == "G1")
      target = Group::G1;
    else if (to == "G2")
      target = Group::G2;
    else
      throw UsageError("--to must be G1 or G2");
    out << model.rewrite_between_groups(parse_composite(a[0]), target, ordinal_list(sample)).str() << "\n";
  } else if (op == "member") {
    need(a, 3, "shelah member <1|2> <prefix_len> '<composite>'");
    auto m = model.r_delta_member(to_int(a[0], "model index"), level(a[1]), parse_composite(a[2]));
    nlohmann::json tuple = nlohmann::json::array();
    for (const auto& x : m.tuple) tuple.push_back(x.str());
    out << nlohmann::json{{"member", m.member}, {"witness", m.witness.str()}, {"tuple", tuple}}.dump() << "\n";
    return m.member ? 0 : 1;
  } else if (op == "encode") {
    need(a, 1, "shelah encode <structure.json>");
    out << structure_to_json(encode_binary(load_structure(a[0]))).dump() << "\n";
  } else {
    throw UsageError("unknown shelah operation '" + op +
                     "' (xi, decode, f, preimage, trajectory, gamma-witness, rewrite, member, encode)");
  }
  return 0;
}

struct GameArgs {
  std::string kind = "ef";
  std::string a_path, b_path, fixed;
  int rounds = 1;
};

GameKind game_kind(const GameArgs& g) { return parse_game_kind(g.kind, int_list(g.fixed)); }

std::pair<FinStructure, FinStructure> game_structures(const GameArgs& g, const GameKind& kind) {
  if (g.a_path.empty()) throw UsageError("-A <structure.json> is required");
  FinStructure A = load_structure(g.a_path);
  if (kind.tag == GameKind::Splitting) return {A, A};
  if (g.b_path.empty()) throw UsageError("-B <structure.json> is required for " + g.kind);
  return {A, load_structure(g.b_path)};
}

Winner solve_game(const GameKind& kind, const FinStructure& A, const FinStructure& B, int rounds,
                  const SolverOptions& opt) {
  switch (kind.tag) {
    case GameKind::EF: return ef_winner(A, B, rounds, opt);
    case GameKind::Splitting: return splitting_winner(A, rounds, opt);
    default: return restricted_winner(kind, A, B, rounds, opt);
  }
}

void print_session(const GameSession& s, std::ostream& out) {
  out << "round " << s.round() << "/" << s.rounds() << "  map " << map_to_json(s.map()).dump() << "\n";
  if (s.awaiting_choice()) {
    for (std::size_t i = 0; i < s.pending().size(); ++i)
      out << "  extension " << i << ": " << map_to_json(s.pending()[i]).dump() << "\n";
    out << "pick 0 or 1\n";
    return;
  }
  if (s.over()) return;
  out << "legal:";
  for (const auto& d : s.legal()) out << " " << (d.side == Demand::Dom ? "A" : d.side == Demand::Ran ? "B" : "id")
                                      << " " << d.point << ",";
  out << "\n";
}

void play_game(const GameKind& kind, const FinStructure& A, const FinStructure& B, int rounds,
               const SolverOptions& opt, std::istream& in, std::ostream& out) {
  GameSession s(kind, A, B, rounds, opt);
  out << kind.str() << " game, " << rounds << " rounds; you play the spoiler. Moves: A <x>, B <y>, id <a>, pick "
      << "<0|1>, quit\n";
  std::string line;
  while (!s.over()) {
    print_session(s, out);
    out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    std::istringstream is(line);
    std::string side;
    int point = -1;
    if (!(is >> side)) continue;
    if (side == "quit") break;
    if (!(is >> point)) {
      out << "rejected: expected a side and a number\n";
      continue;
    }
    try {
      if (side == "pick")
        s.choose(point);
      else if (side == "A")
        s.move({Demand::Dom, point});
      else if (side == "B")
        s.move({Demand::Ran, point});
      else if (side == "id")
        s.move({Demand::Identity, point});
      else
        out << "rejected: unknown side '" << side << "'\n";
    } catch (const Error& e) {
      out << "rejected: " << e.what() << "\n";
    }
  }
  nlohmann::json st = s.state_json();
  out << "final map " << st["map"].dump() << "\n";
  if (s.over()) {
    out << "winner " << st["winner"].get<std::string>() << " (" << st["reason"].get<std::string>() << ")\n";
    if (!st["losing_tuple"].is_null()) out << "losing tuple " << st["losing_tuple"].dump() << "\n";
  } else {
    out << "game abandoned\n";
  }
  out << "transcript " << st["transcript"].dump() << "\n";
}

void check_domain(const OrderMap& m, const OrderPoint& p, bool inverse) {
  validate_point(inverse ? *m.target : *m.source, p);
}

int cmd_eta(const std::string& op, const std::vector<std::string>& a, bool inverse, const std::string& fix,
            std::ostream& out) {
  if (op == "compare") {
    need(a, 3, "eta compare '<term>' <p> <q>");
    TermPtr t = parse_order_term(a[0]);
    out << to_string(compare_points(*t, parse_order_point(a[1]), parse_order_point(a[2]))) << "\n";
    return 0;
  }
  if (op == "iso") {
    need(a, 3, "eta iso L9i|L9ii|L9iii <param> <point> [--inverse]");
    OrderMap m;
    if (a[0] == "L9i")
      m = iso_eta_ge(parse_ordinal(a[1]));
    else if (a[0] == "L9ii")
      m = iso_times_n(static_cast<std::uint64_t>(to_int(a[1], "n")));
    else if (a[0] == "L9iii")
      m = iso_times_rev(parse_ordinal(a[1]));
    else
      throw UsageError("iso kind must be L9i, L9ii or L9iii");
    OrderPoint p = parse_order_point(a[2]);
    check_domain(m, p, inverse);
    out << (inverse ? m.backward(p) : m.forward(p)).str() << "\n";
    return 0;
  }
  if (op == "chain-iso") {
    need(a, 4, "eta chain-iso P10|P11 <small> <big> <point> [--fix 'p;q;...'] [--inverse]");
    std::vector<OrderPoint> C;
    for (const auto& s : split(fix, ';')) C.push_back(parse_order_point(s));
    OrderMap m;
    if (a[0] == "P10")
      m = chain_iso_ascending(static_cast<std::uint64_t>(to_int(a[1], "n")),
                              static_cast<std::uint64_t>(to_int(a[2], "m")), C);
    else if (a[0] == "P11")
      m = chain_iso_descending(parse_ordinal(a[1]), parse_ordinal(a[2]), C);
    else
      throw UsageError("chain kind must be P10 or P11");
    OrderPoint p = parse_order_point(a[3]);
    check_domain(m, p, inverse);
    out << (inverse ? m.backward(p) : m.forward(p)).str() << "\n";
    return 0;
  }
  if (op == "witness") {
    need(a, 2, "eta witness P10unbounded|P11descending <k>");
    std::size_t k = static_cast<std::size_t>(to_int(a[1], "k"));
    if (k == 0) throw UsageError("k must be at least 1");
    std::vector<OrderPoint> pts;
    if (a[0] == "P10unbounded")
      pts = unbounded_witness(k);
    else if (a[0] == "P11descending")
      pts = descending_witness(k);
    else
      throw UsageError("witness kind must be P10unbounded or P11descending");
    for (const auto& p : pts) out << p.str() << "\n";
    return 0;
  }
  throw UsageError("unknown eta operation '" + op + "' (compare, iso, chain-iso, witness)");
}

int cmd_tree(const std::string& op, const std::vector<std::string>& a, const Config& cfg, const std::string& model,
             const std::string& order, std::ostream& out) {
  if (op == "span") {
    need(a, 1, "tree span <tree.json>");
    LevelTree t = load_tree(a[0]);
    GF2Span sp = tree_span(t);
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& b : sp.basis()) basis.push_back(b.str());
    out << nlohmann::json{{"rank", sp.rank()}, {"basis", basis}}.dump() << "\n";
    return 0;
  }
  if (op == "build") {
    need(a, 1, "tree build <tree.json> --model m|mprime");
    LevelTree t = load_tree(a[0]);
    std::size_t budget = static_cast<std::size_t>(std::max(cfg.brute_budget, 256));
    TranslationModel tm;
    if (model == "m")
      tm = build_m(t, budget);
    else if (model == "mprime")
      tm = build_m_prime(t, budget);
    else
      throw UsageError("--model must be m or mprime");
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < tm.points.size(); ++i)
      pts.push_back({{"bits", tm.points[i].str()}, {"length", tm.lengths[i]}});
    out << nlohmann::json{{"structure", structure_to_json(tm.structure)}, {"points", pts}}.dump() << "\n";
    return 0;
  }
  if (op == "report") {
    need(a, 1, "tree report <tree.json>");
    auto rep = correspondence_report(load_tree(a[0]), std::max(cfg.brute_budget, 64));
    out << rep.to_json().dump(2) << "\n";
    return rep.ok ? 0 : 1;
  }
  if (op == "prop15") {
    need(a, 1, "tree prop15 <structure.json> [--order 0,1,...]");
    FinStructure M = load_structure(a[0]);
    std::vector<int> ord = int_list(order);
    if (order.empty())
      for (int i = 0; i < M.size; ++i) ord.push_back(i);
    auto rep = prop15_tree(M, ord, cfg.brute_budget);
    out << rep.to_json().dump(2) << "\n";
    return rep.ok ? 0 : 1;
  }
  throw UsageError("unknown tree operation '" + op + "' (span, build, report, prop15)");
}

int cmd_verify(const std::vector<std::string>& suites, const Config& cfg, bool json, std::ostream& out) {
  std::vector<std::string> names;
  for (const auto& s : suites) {
    if (s == "all")
      names.insert(names.end(), suite_names().begin(), suite_names().end());
    else
      names.push_back(s);
  }
  if (names.empty()) names = suite_names();
  for (const auto& n : names)
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
      throw UsageError("unknown suite '" + n + "'");
  bool ok = true;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& n : names) {
    SuiteResult r = run_suite(n, cfg);
    ok = ok && r.ok();
    if (json) {
      nlohmann::json j = r.to_json();
      j.erase("seconds");  // keep the document reproducible
      all.push_back(j);
    } else {
      out << r.line() << "\n";
      for (const auto& m : r.messages) out << "  " << m << "\n";
    }
  }
  if (json) out << all.dump(2) << "\n";
  return ok ? 0 : 1;
}

}  // namespace

// ---- serve mode

struct ServeEndpoint::Impl {
  SolverOptions opt;
  std::map<std::string, std::unique_ptr<GameSession>> sessions;
  std::uint64_t next = 1;

  static const nlohmann::json& field(const nlohmann::json& args, const char* name) {
    if (!args.contains(name)) throw Error(std::string("missing argument '") + name + "'");
    return args[name];
  }

  struct Setup {
    GameKind kind;
    FinStructure A, B;
    int rounds;
  };

  Setup setup(const nlohmann::json& args) {
    Setup s;
    std::vector<int> fixed;
    if (args.contains("fixed")) fixed = args["fixed"].get<std::vector<int>>();
    s.kind = parse_game_kind(field(args, "kind").get<std::string>(), fixed);
    s.A = structure_from_json(field(args, "A"));
    s.B = s.kind.tag == GameKind::Splitting ? s.A : structure_from_json(field(args, "B"));
    s.rounds = field(args, "rounds").get<int>();
    if (s.rounds < 0) throw Error("rounds must be non-negative");
    return s;
  }

  GameSession& session(const nlohmann::json& args) {
    std::string tok = field(args, "session").get<std::string>();
    auto it = sessions.find(tok);
    if (it == sessions.end()) throw Error("unknown session '" + tok + "'");
    return *it->second;
  }

  nlohmann::json dispatch(const std::string& op, const nlohmann::json& args) {
    if (op == "ping") return "pong";
    if (op == "start") {
      Setup s = setup(args);
      std::string tok = "s" + std::to_string(next++);
      auto g = std::make_unique<GameSession>(s.kind, s.A, s.B, s.rounds, opt);
      nlohmann::json st = g->state_json();
      sessions[tok] = std::move(g);
      return {{"session", tok}, {"state", st}};
    }
    if (op == "legal") return session(args).state_json()["legal"];
    if (op == "state") return session(args).state_json();
    if (op == "move") {
      GameSession& g = session(args);
      std::string side = field(args, "side").get<std::string>();
      int point = field(args, "point").get<int>();
      Demand d;
      if (side == "A")
        d = {Demand::Dom, point};
      else if (side == "B")
        d = {Demand::Ran, point};
      else if (side == "id")
        d = {Demand::Identity, point};
      else
        throw Error("side must be A, B or id");
      g.move(d);
      return g.state_json();
    }
    if (op == "choose") {
      GameSession& g = session(args);
      g.choose(field(args, "choice").get<int>());
      return g.state_json();
    }
    if (op == "end") {
      std::string tok = field(args, "session").get<std::string>();
      if (!sessions.erase(tok)) throw Error("unknown session '" + tok + "'");
      return {{"ended", tok}};
    }
    if (op == "replay") {
      Setup s = setup(args);
      std::vector<Move> moves;
      for (const auto& m : field(args, "transcript")) moves.push_back(Move::from_json(m));
      return GameSession::replay(s.kind, s.A, s.B, s.rounds, moves, opt).state_json();
    }
    if (op == "solve") {
      Setup s = setup(args);
      return {{"winner", to_string(solve_game(s.kind, s.A, s.B, s.rounds, opt))}};
    }
    throw Error("unknown op '" + op + "'");
  }
};

ServeEndpoint::ServeEndpoint(std::size_t node_budget) : impl_(std::make_unique<Impl>()) {
  impl_->opt.node_budget = node_budget;
}

ServeEndpoint::~ServeEndpoint() = default;

nlohmann::json ServeEndpoint::handle(const nlohmann::json& request) {
  nlohmann::json id = request.is_object() && request.contains("id") ? request["id"] : nlohmann::json(nullptr);
  try {
    if (!request.is_object()) throw Error("request must be a JSON object");
    if (!request.contains("op") || !request["op"].is_string()) throw Error("request needs a string 'op'");
    nlohmann::json args = request.value("args", nlohmann::json::object());
    if (!args.is_object()) throw Error("'args' must be an object");
    return {{"id", id}, {"ok", true}, {"value", impl_->dispatch(request["op"].get<std::string>(), args)}};
  } catch (const nlohmann::json::exception& e) {
    return {{"id", id}, {"ok", false}, {"error", std::string("bad argument: ") + e.what()}};
  } catch (const std::exception& e) {
    return {{"id", id}, {"ok", false}, {"error", e.what()}};
  }
}

std::string ServeEndpoint::handle_line(const std::string& line) {
  nlohmann::json req;
  try {
    req = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    return nlohmann::json{{"id", nullptr}, {"ok", false}, {"error", e.what()}}.dump();
  }
  return handle(req).dump();
}

// ---- entry point

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Workbench for ordinals, free-group words, back-and-forth games, lexicographic orders and tree "
               "models"};
  app.name("wb");
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config_path, "JSON config file (default: $WB_CONFIG)");
  app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--budget", flags.budget, "solver node budget");
  app.add_option("--truncation", flags.truncation, "largest level of the ordinal construction");
  app.add_option("--brute-budget", flags.brute_budget, "size budget for brute-force automorphism search");

  std::string op;
  std::vector<std::string> rest;
  bool inverse = false, json = false;
  std::string to, sample, fix, model = "m", order;
  // Single-valued positionals: a vector positional would split bracketed point literals like `[w, 2]`.
  std::deque<std::pair<std::string, CLI::Option*>> operands;  // stable addresses for CLI11 bindings
  auto with_op = [&](CLI::App* sub) {
    sub->add_option("op", op, "operation")->required();
    for (int i = 1; i <= 5; ++i) {
      operands.emplace_back();
      operands.back().second = sub->add_option("arg" + std::to_string(i), operands.back().first, "operand");
    }
  };
  auto* ord = app.add_subcommand("ord", "ordinal arithmetic: add, sub, cmp, gamma, parity, level, norm");
  with_op(ord);
  auto* word = app.add_subcommand("word", "reduced words: validate, lmul");
  with_op(word);
  word->add_flag("--inverse", inverse, "multiply by the inverse symbol");
  auto* shelah = app.add_subcommand(
      "shelah", "listing and permutations: xi, decode, f, preimage, trajectory, gamma-witness, rewrite, member, "
                "encode");
  with_op(shelah);
  shelah->add_flag("--json", json, "JSON trajectory output");
  shelah->add_option("--to", to, "target group for rewrite (G1 or G2)");
  shelah->add_option("--sample", sample, "comma-separated even ordinals for rewrite");

  GameArgs ga;
  auto* game = app.add_subcommand("game", "games: solve, play");
  game->add_option("op", op, "solve or play")->required();
  game->add_option("--kind", ga.kind, "ef, splitting, preceq or leq");
  game->add_option("--rounds", ga.rounds, "number of rounds");
  game->add_option("-A", ga.a_path, "left structure file");
  game->add_option("-B", ga.b_path, "right structure file");
  game->add_option("--fixed", ga.fixed, "comma-separated points fixed at the start (preceq)");

  auto* eta_cmd = app.add_subcommand("eta", "lexicographic orders: compare, iso, chain-iso, witness");
  with_op(eta_cmd);
  eta_cmd->add_flag("--inverse", inverse, "apply the inverse map");
  eta_cmd->add_option("--fix", fix, "semicolon-separated points to keep fixed");

  auto* tree = app.add_subcommand("tree", "tree models: span, build, report, prop15");
  with_op(tree);
  tree->add_option("--model", model, "m or mprime");
  tree->add_option("--order", order, "enumeration of the universe for prop15");

  std::vector<std::string> suites;
  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("--suite", suites, "suite name or all (repeatable)");
  verify->add_option("--samples", flags.samples, "sample count override");
  verify->add_flag("--json", json, "JSON report");

  app.add_subcommand("serve", "newline-delimited JSON protocol on standard streams");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (auto& [value, opt] : operands)
    if (opt->count() > 0) rest.push_back(value);

  try {
    Config cfg = resolve_config(flags);
    if (ord->parsed()) {
      cmd_ord(op, rest, out);
      return 0;
    }
    if (word->parsed()) return cmd_word(op, rest, inverse, out);
    if (shelah->parsed()) return cmd_shelah(op, rest, cfg, json, to, sample, out);
    if (game->parsed()) {
      GameKind kind = game_kind(ga);
      auto [A, B] = game_structures(ga, kind);
      if (ga.rounds < 0) throw UsageError("--rounds must be non-negative");
      if (op == "solve") {
        out << to_string(solve_game(kind, A, B, ga.rounds, solver_options(cfg))) << "\n";
        return 0;
      }
      if (op == "play") {
        play_game(kind, A, B, ga.rounds, solver_options(cfg), in, out);
        return 0;
      }
      throw UsageError("game operation must be solve or play");
    }
    if (eta_cmd->parsed()) return cmd_eta(op, rest, inverse, fix, out);
    if (tree->parsed()) return cmd_tree(op, rest, cfg, model, order, out);
    if (verify->parsed()) return cmd_verify(suites, cfg, json, out);
    ServeEndpoint endpoint(cfg.node_budget);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out << endpoint.handle_line(line) << "\n" << std::flush;
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace wb
