#include "wb/tree_models.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "wb/error.hpp"

namespace wb {

void Bits::set(std::size_t i, bool v) {
  if (v)
    w_[i / 64] |= std::uint64_t{1} << (i % 64);
  else
    w_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
}

bool Bits::none() const {
  return std::all_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x == 0; });
}

std::size_t Bits::count() const {
  std::size_t c = 0;
  for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
  return c;
}

std::optional<std::size_t> Bits::lowest() const {
  for (std::size_t k = 0; k < w_.size(); ++k)
    if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
  return std::nullopt;
}

Bits& Bits::operator^=(const Bits& o) {
  if (o.n_ != n_) throw Error("ragged vectors: widths " + std::to_string(n_) + " and " + std::to_string(o.n_));
  for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
  return *this;
}

std::string Bits::str() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (test(i)) s[i] = '1';
  return s;
}

LevelTree::LevelTree(std::vector<std::vector<std::string>> levels, std::map<std::string, std::string> parent)
    : levels_(std::move(levels)), parent_names_(std::move(parent)) {
  std::map<std::string, std::size_t> id;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    offset_.push_back(names_.size());
    for (const auto& n : levels_[l]) {
      if (!id.emplace(n, names_.size()).second) throw Error("tree: duplicate node name '" + n + "'");
      names_.push_back(n);
      level_of_.push_back(static_cast<int>(l));
    }
  }
  parent_.assign(names_.size(), -1);
  for (const auto& [child, par] : parent_names_) {
    auto c = id.find(child);
    auto p = id.find(par);
    if (c == id.end()) throw Error("tree: parent entry for unknown node '" + child + "'");
    if (p == id.end()) throw Error("tree: unknown parent '" + par + "' of '" + child + "'");
    if (level_of_[p->second] + 1 != level_of_[c->second])
      throw Error("tree: parent of '" + child + "' is not one level down");
    parent_[c->second] = static_cast<int>(p->second);
  }
  for (std::size_t v = 0; v < names_.size(); ++v)
    if (level_of_[v] > 0 && parent_[v] < 0) throw Error("tree: node '" + names_[v] + "' has no parent");
}

std::vector<std::size_t> LevelTree::descendants_at(std::size_t node, int beta) const {
  std::vector<std::size_t> out;
  if (beta < level(node) || beta >= height()) return out;
  for (std::size_t p = 0; p < levels_[beta].size(); ++p) {
    int v = static_cast<int>(node_id(beta, p));
    while (v >= 0 && level(v) > level(node)) v = parent(v);
    if (v == static_cast<int>(node)) out.push_back(node_id(beta, p));
  }
  return out;
}

LevelTree tree_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("tree: expected a JSON object");
  try {
    int h = j.at("height").get<int>();
    auto levels = j.at("levels").get<std::vector<std::vector<std::string>>>();
    if (static_cast<int>(levels.size()) != h)
      throw Error("tree: height " + std::to_string(h) + " but " + std::to_string(levels.size()) + " levels");
    std::map<std::string, std::string> parent;
    if (j.contains("parent")) parent = j["parent"].get<std::map<std::string, std::string>>();
    return LevelTree(std::move(levels), std::move(parent));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("tree: ") + e.what());
  }
}

nlohmann::json tree_to_json(const LevelTree& t) {
  return {{"height", t.height()}, {"levels", t.levels()}, {"parent", t.parents()}};
}

std::vector<Bits> branch_vectors(const LevelTree& t) {
  std::vector<Bits> out;
  if (t.height() == 0) return out;
  for (std::size_t p = 0; p < t.levels().back().size(); ++p) {
    Bits b(t.node_count());
    for (int v = static_cast<int>(t.node_id(t.height() - 1, p)); v >= 0; v = t.parent(v)) b.set(v);
    out.push_back(std::move(b));
  }
  return out;
}

Bits restrict_to(const LevelTree& t, const Bits& s, int alpha) {
  Bits r = s;
  for (std::size_t v = 0; v < t.node_count(); ++v)
    if (t.level(v) >= alpha) r.set(v, false);
  return r;
}

GF2Span::GF2Span(const std::vector<Bits>& vectors, std::size_t width) : width_(width) {
  for (Bits v : vectors) {
    if (v.size() != width_) throw Error("ragged vectors: expected width " + std::to_string(width_));
    for (std::size_t k = 0; k < basis_.size(); ++k)
      if (v.test(pivots_[k])) v ^= basis_[k];
    auto p = v.lowest();
    if (!p) continue;
    for (auto& b : basis_)
      if (b.test(*p)) b ^= v;
    basis_.push_back(std::move(v));
    pivots_.push_back(*p);
  }
}

bool GF2Span::contains(Bits v) const {
  if (v.size() != width_) return false;
  for (std::size_t k = 0; k < basis_.size(); ++k)
    if (v.test(pivots_[k])) v ^= basis_[k];
  return v.none();
}

std::vector<Bits> GF2Span::elements(std::size_t limit) const {
  if (rank() >= 63 || (std::size_t{1} << rank()) > limit)
    throw BudgetExceeded("span of rank " + std::to_string(rank()) + " too large to enumerate");
  std::vector<Bits> out;
  for (std::size_t i = 0; i < (std::size_t{1} << rank()); ++i) {
    Bits e(width_);
    for (std::size_t k = 0; k < rank(); ++k)
      if ((i >> k) & 1) e ^= basis_[k];
    out.push_back(std::move(e));
  }
  return out;
}

GF2Span span(const std::vector<Bits>& vectors) {
  return GF2Span(vectors, vectors.empty() ? 0 : vectors.front().size());
}

GF2Span tree_span(const LevelTree& t) { return GF2Span(branch_vectors(t), t.node_count()); }

bool star_check(const LevelTree& t, const Bits& s, int alpha, int beta) {
  if (alpha >= beta) throw Error("star_check needs alpha < beta");
  if (beta >= t.height()) throw Error("star_check: level " + std::to_string(beta) + " beyond the tree height");
  for (std::size_t p = 0; p < t.levels()[alpha].size(); ++p) {
    std::size_t node = t.node_id(alpha, p);
    std::size_t odd = 0;
    for (std::size_t d : t.descendants_at(node, beta)) odd ^= s.test(d) ? 1 : 0;
    if (s.test(node) != (odd == 1)) return false;
  }
  return true;
}

TranslationModel build_m_prime(const LevelTree& t, std::size_t budget) {
  GF2Span sp = tree_span(t);
  TranslationModel out;
  out.points = sp.elements(budget);
  out.lengths.assign(out.points.size(), t.height());
  std::map<Bits, int> index;
  for (std::size_t i = 0; i < out.points.size(); ++i) index[out.points[i]] = static_cast<int>(i);
  out.structure.size = static_cast<int>(out.points.size());
  for (const auto& s : out.points) {
    Relation r{"R_" + s.str(), 2, {}};
    for (std::size_t i = 0; i < out.points.size(); ++i)
      r.tuples.push_back({static_cast<int>(i), index.at(out.points[i] ^ s)});
    out.structure.relations.push_back(std::move(r));
  }
  out.structure.normalize();
  return out;
}

TranslationModel build_m(const LevelTree& t, std::size_t budget) {
  GF2Span sp = tree_span(t);
  std::vector<Bits> full = sp.elements(budget);
  TranslationModel out;
  std::map<std::pair<int, Bits>, int> index;
  for (int a = 0; a <= t.height(); ++a)
    for (const auto& s : full) {
      Bits r = restrict_to(t, s, a);
      if (index.emplace(std::make_pair(a, r), static_cast<int>(out.points.size())).second) {
        out.points.push_back(r);
        out.lengths.push_back(a);
      }
    }
  if (out.points.size() > budget)
    throw BudgetExceeded("segment model has " + std::to_string(out.points.size()) + " points, budget " +
                         std::to_string(budget));
  const int n = static_cast<int>(out.points.size());
  out.structure.size = n;
  Relation F{"F", 2, {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (out.lengths[x] < out.lengths[y] && restrict_to(t, out.points[y], out.lengths[x]) == out.points[x])
        F.tuples.push_back({x, y});
  out.structure.relations.push_back(std::move(F));
  for (int r = 0; r < n; ++r) {
    Relation R{"R" + std::to_string(out.lengths[r]) + "_" + out.points[r].str(), 2, {}};
    for (int x = 0; x < n; ++x)
      if (out.lengths[x] == out.lengths[r])
        R.tuples.push_back({x, index.at({out.lengths[r], out.points[x] ^ out.points[r]})});
    out.structure.relations.push_back(std::move(R));
  }
  out.structure.normalize();
  return out;
}

nlohmann::json CorrespondenceReport::to_json() const {
  return {{"rank", rank},           {"span_size", span_size},     {"aut_m_prime", aut_m_prime},
          {"aut_m", aut_m},         {"star_checks", star_checks}, {"ok", ok},
          {"failures", failures}};
}

CorrespondenceReport correspondence_report(const LevelTree& t, int brute_budget) {
  CorrespondenceReport rep;
  GF2Span sp = tree_span(t);
  rep.rank = sp.rank();
  std::vector<Bits> elems = sp.elements();
  rep.span_size = elems.size();
  for (const auto& s : elems)
    for (int a = 0; a < t.height(); ++a)
      for (int b = a + 1; b < t.height(); ++b) {
        ++rep.star_checks;
        if (!star_check(t, s, a, b))
          rep.failures.push_back("parity law fails for " + s.str() + " at levels " + std::to_string(a) + "<" +
                                 std::to_string(b));
      }
  AutomorphismOptions opt;
  opt.size_budget = brute_budget;

  TranslationModel mp = build_m_prime(t, static_cast<std::size_t>(brute_budget));
  auto auts = brute_automorphisms(mp.structure, opt);
  rep.aut_m_prime = auts.size();
  std::set<Bits> shifts;
  for (const auto& pi : auts) {
    Bits s = mp.points[pi[0]] ^ mp.points[0];
    shifts.insert(s);
    for (std::size_t x = 0; x < mp.points.size(); ++x)
      if (!(mp.points[pi[x]] == (mp.points[x] ^ s))) {
        rep.failures.push_back("automorphism of M' is not the translation by " + s.str());
        break;
      }
  }
  if (shifts.size() != auts.size()) rep.failures.push_back("two automorphisms of M' share a translation");

  TranslationModel m = build_m(t, static_cast<std::size_t>(brute_budget));
  auto auts_m = brute_automorphisms(m.structure, opt);
  rep.aut_m = auts_m.size();
  int zero_top = -1;
  for (std::size_t i = 0; i < m.points.size(); ++i)
    if (m.lengths[i] == t.height() && m.points[i].none()) zero_top = static_cast<int>(i);
  std::set<Bits> recon;
  for (const auto& pi : auts_m) {
    Bits s = m.points[pi[zero_top]];
    recon.insert(s);
    if (!sp.contains(s)) rep.failures.push_back("reconstructed " + s.str() + " is not in the span");
    for (std::size_t r = 0; r < m.points.size(); ++r) {
      if (m.lengths[pi[r]] != m.lengths[r] ||
          !(m.points[pi[r]] == (m.points[r] ^ restrict_to(t, s, m.lengths[r])))) {
        rep.failures.push_back("automorphism of M is not the segment translation by " + s.str());
        break;
      }
    }
  }
  if (recon.size() != auts_m.size()) rep.failures.push_back("two automorphisms of M reconstruct the same element");
  if (rep.aut_m_prime != rep.span_size || rep.aut_m != rep.span_size)
    rep.failures.push_back("counts differ: span " + std::to_string(rep.span_size) + ", AUT(M') " +
                           std::to_string(rep.aut_m_prime) + ", AUT(M) " + std::to_string(rep.aut_m));
  rep.ok = rep.failures.empty();
  return rep;
}

nlohmann::json Prop15Report::to_json() const {
  return {{"level_sizes", level_sizes}, {"full_branches", full_branches}, {"aut_count", aut_count},
          {"stranded", stranded},       {"linked_full", linked_full},     {"matched", matched},
          {"ok", ok}};
}

Prop15Report prop15_tree(const FinStructure& M, const std::vector<int>& order, int brute_budget) {
  const int n = M.size;
  {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i)
      if (sorted[i] != i || static_cast<int>(sorted.size()) != n)
        throw Error("prop15: enumeration must list every point exactly once");
  }
  if (n > brute_budget)
    throw BudgetExceeded("structure of size " + std::to_string(n) + " exceeds the brute-force budget");
  Prop15Report rep;
  AutomorphismOptions plain;
  plain.size_budget = brute_budget;
  plain.degree_pruning = false;
  std::vector<std::vector<std::vector<int>>> nodes(n + 1);
  for (int a = 0; a <= n; ++a) {
    FinStructure sub = M.induced(std::vector<int>(order.begin(), order.begin() + a));
    nodes[a] = brute_automorphisms(sub, plain);
    std::sort(nodes[a].begin(), nodes[a].end());
    rep.level_sizes.push_back(nodes[a].size());
  }
  auto maps_prefix = [](const std::vector<int>& f, int a) {
    for (int i = 0; i < a; ++i)
      if (f[i] >= a) return false;
    return true;
  };
  for (int a = 1; a <= n; ++a)
    for (const auto& f : nodes[a])
      if (!maps_prefix(f, a - 1)) ++rep.stranded;
  rep.full_branches = nodes[n].size();
  for (const auto& f : nodes[n]) {
    bool linked = true;
    for (int a = n - 1; a >= 0 && linked; --a) linked = maps_prefix(f, a);
    if (linked) ++rep.linked_full;
  }
  AutomorphismOptions pruned;
  pruned.size_budget = brute_budget;
  auto auts = brute_automorphisms(M, pruned);
  rep.aut_count = auts.size();
  std::set<std::vector<int>> top;
  for (const auto& f : nodes[n]) {
    std::vector<int> g(n);
    for (int i = 0; i < n; ++i) g[order[i]] = order[f[i]];
    top.insert(g);
  }
  rep.matched = top == std::set<std::vector<int>>(auts.begin(), auts.end());
  rep.ok = rep.matched && rep.full_branches == rep.aut_count;
  return rep;
}

}  // namespace wb
