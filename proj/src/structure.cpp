#include "wb/structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "wb/error.hpp"

namespace wb {

void FinStructure::normalize() {
  if (size < 0) throw Error("structure size must be non-negative");
  std::set<std::string> names;
  for (auto& r : relations) {
    if (!names.insert(r.name).second) throw Error("duplicate relation name '" + r.name + "'");
    if (r.arity < 0) throw Error("relation '" + r.name + "' has negative arity");
    for (const auto& t : r.tuples) {
      if (static_cast<int>(t.size()) != r.arity)
        throw Error("relation '" + r.name + "': tuple of length " + std::to_string(t.size()) +
                    " but arity " + std::to_string(r.arity));
      for (int x : t)
        if (x < 0 || x >= size)
          throw Error("relation '" + r.name + "': entry " + std::to_string(x) + " outside universe");
    }
    std::sort(r.tuples.begin(), r.tuples.end());
    r.tuples.erase(std::unique(r.tuples.begin(), r.tuples.end()), r.tuples.end());
  }
}

const Relation* FinStructure::find(const std::string& name) const {
  for (const auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

bool FinStructure::holds(const std::string& name, const Tuple& t) const {
  const Relation* r = find(name);
  return r && std::binary_search(r->tuples.begin(), r->tuples.end(), t);
}

FinStructure FinStructure::induced(const std::vector<int>& keep) const {
  std::vector<int> pos(size, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<int>(i);
  FinStructure out;
  out.size = static_cast<int>(keep.size());
  for (const auto& r : relations) {
    Relation nr{r.name, r.arity, {}};
    for (const auto& t : r.tuples) {
      Tuple u;
      bool inside = true;
      for (int x : t) {
        if (pos[x] < 0) {
          inside = false;
          break;
        }
        u.push_back(pos[x]);
      }
      if (inside) nr.tuples.push_back(std::move(u));
    }
    out.relations.push_back(std::move(nr));
  }
  out.normalize();
  return out;
}

FinStructure structure_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("structure: expected a JSON object");
  if (!j.contains("size") || !j["size"].is_number_integer()) throw Error("structure: missing integer 'size'");
  FinStructure s;
  s.size = j["size"].get<int>();
  if (j.contains("relations")) {
    if (!j["relations"].is_array()) throw Error("structure: 'relations' must be an array");
    for (const auto& rj : j["relations"]) {
      if (!rj.is_object() || !rj.contains("name") || !rj["name"].is_string())
        throw Error("structure: relation without a string 'name'");
      Relation r;
      r.name = rj["name"].get<std::string>();
      if (!rj.contains("arity") || !rj["arity"].is_number_integer())
        throw Error("structure: relation '" + r.name + "' needs an integer 'arity'");
      r.arity = rj["arity"].get<int>();
      if (rj.contains("tuples")) {
        for (const auto& tj : rj["tuples"]) {
          if (!tj.is_array()) throw Error("structure: tuples must be arrays");
          Tuple t;
          for (const auto& x : tj) {
            if (!x.is_number_integer()) throw Error("structure: tuple entries must be integers");
            t.push_back(x.get<int>());
          }
          r.tuples.push_back(std::move(t));
        }
      }
      s.relations.push_back(std::move(r));
    }
  }
  s.normalize();
  return s;
}

nlohmann::json structure_to_json(const FinStructure& s) {
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& r : s.relations)
    rels.push_back({{"name", r.name}, {"arity", r.arity}, {"tuples", r.tuples}});
  return {{"size", s.size}, {"relations", rels}};
}

FinStructure pure_set(int n) {
  FinStructure s;
  s.size = n;
  return s;
}

FinStructure equivalence_classes(const std::vector<int>& sizes) {
  FinStructure s;
  Relation e{"E", 2, {}};
  int start = 0;
  for (int sz : sizes) {
    for (int i = start; i < start + sz; ++i)
      for (int j = start; j < start + sz; ++j) e.tuples.push_back({i, j});
    start += sz;
  }
  s.size = start;
  s.relations.push_back(std::move(e));
  s.normalize();
  return s;
}

FinStructure strict_order(int n) {
  FinStructure s;
  s.size = n;
  Relation lt{"<", 2, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) lt.tuples.push_back({i, j});
  s.relations.push_back(std::move(lt));
  s.normalize();
  return s;
}

bool PartialMap::add(int a, int b) {
  if (a < 0 || a >= dom_size() || b < 0 || b >= ran_size()) return false;
  if (fwd_[a] == b) return true;
  if (fwd_[a] >= 0 || bwd_[b] >= 0) return false;
  fwd_[a] = b;
  bwd_[b] = a;
  ++count_;
  return true;
}

PartialMap PartialMap::with(int a, int b) const {
  PartialMap m = *this;
  if (!m.add(a, b)) throw Error("pair (" + std::to_string(a) + "," + std::to_string(b) + ") breaks injectivity");
  return m;
}

PartialMap PartialMap::inverse() const {
  PartialMap m;
  m.fwd_ = bwd_;
  m.bwd_ = fwd_;
  m.count_ = count_;
  return m;
}

std::vector<std::pair<int, int>> PartialMap::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < dom_size(); ++a)
    if (fwd_[a] >= 0) out.emplace_back(a, fwd_[a]);
  return out;
}

bool PartialMap::compatible(const PartialMap& o) const {
  for (int a = 0; a < dom_size(); ++a)
    if (fwd_[a] >= 0 && o.fwd_[a] >= 0 && fwd_[a] != o.fwd_[a]) return false;
  for (int b = 0; b < ran_size(); ++b)
    if (bwd_[b] >= 0 && o.bwd_[b] >= 0 && bwd_[b] != o.bwd_[b]) return false;
  return true;
}

bool PartialMap::extends(const PartialMap& smaller) const {
  for (int a = 0; a < smaller.dom_size(); ++a)
    if (smaller.fwd_[a] >= 0 && (a >= dom_size() || fwd_[a] != smaller.fwd_[a])) return false;
  return true;
}

std::string PartialMap::str() const {
  std::string out = "{";
  for (auto [a, b] : pairs()) {
    if (out.size() > 1) out += ", ";
    out += std::to_string(a) + "->" + std::to_string(b);
  }
  return out + "}";
}

nlohmann::json map_to_json(const PartialMap& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (auto [a, b] : m.pairs()) arr.push_back({a, b});
  return arr;
}

namespace {

bool image_in(const Tuple& t, const PartialMap& f, bool forward, const Relation* target) {
  if (!target) return false;
  Tuple u(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) u[i] = forward ? f(t[i]) : f.preimage(t[i]);
  return std::binary_search(target->tuples.begin(), target->tuples.end(), u);
}

bool covered(const Tuple& t, const PartialMap& f, bool forward) {
  for (int x : t)
    if (forward ? !f.in_dom(x) : !f.in_ran(x)) return false;
  return true;
}

}  // namespace

bool is_partial_iso(const FinStructure& A, const FinStructure& B, const PartialMap& pi) {
  for (const auto& r : A.relations)
    for (const auto& t : r.tuples)
      if (covered(t, pi, true) && !image_in(t, pi, true, B.find(r.name))) return false;
  for (const auto& r : B.relations)
    for (const auto& t : r.tuples)
      if (covered(t, pi, false) && !image_in(t, pi, false, A.find(r.name))) return false;
  return true;
}

namespace {

class AutSearch {
 public:
  AutSearch(const FinStructure& M, const AutomorphismOptions& opt) : M_(M), opt_(opt), n_(M.size) {
    touching_.assign(n_, {});
    for (std::size_t r = 0; r < M.relations.size(); ++r) {
      const auto& rel = M.relations[r];
      sets_.emplace_back();
      for (std::size_t k = 0; k < rel.tuples.size(); ++k) {
        sets_.back().insert(encode(rel.tuples[k]));
        std::vector<int> seen;
        for (int x : rel.tuples[k]) {
          if (std::find(seen.begin(), seen.end(), x) != seen.end()) continue;
          seen.push_back(x);
          touching_[x].push_back({r, k});
        }
      }
    }
    adj_.assign(n_, {});
    for (const auto& rel : M.relations)
      for (const auto& t : rel.tuples)
        for (int a : t)
          for (int b : t)
            if (a != b) adj_[a].push_back(b);
    adjbits_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int a = 0; a < n_; ++a) {
      auto& v = adj_[a];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      for (int b : v) adjbits_[static_cast<std::size_t>(a) * n_ + b] = 1;
    }
    sig_.assign(n_, {});
    for (std::size_t r = 0; r < M.relations.size(); ++r) {
      const auto& rel = M.relations[r];
      for (int x = 0; x < n_; ++x) sig_[x].resize(sig_[x].size() + rel.arity, 0);
      std::size_t base = sig_.empty() ? 0 : sig_[0].size() - rel.arity;
      for (const auto& t : rel.tuples)
        for (int i = 0; i < rel.arity; ++i) ++sig_[t[i]][base + i];
    }
  }

  std::vector<std::vector<int>> run(const PartialMap& fixed) {
    img_.assign(n_, -1);
    pre_.assign(n_, -1);
    std::size_t left = n_;
    for (int x = 0; x < n_; ++x) {
      int y = fixed.dom_size() > x ? fixed(x) : -1;
      if (y >= 0) {
        if (opt_.degree_pruning && sig_[x] != sig_[y]) return {};
        if (pre_[y] >= 0 || !consistent(x, y)) return {};
        img_[x] = y;
        pre_[y] = x;
        --left;
      }
    }
    dfs(left);
    return std::move(found_);
  }

 private:
  bool adjacent(int a, int b) const { return adjbits_[static_cast<std::size_t>(a) * n_ + b]; }

  // Unassigned images y compatible with every assigned neighbour of x.
  void candidates(int x, std::vector<int>& out) const {
    out.clear();
    int anchor = -1;
    for (int z : adj_[x])
      if (img_[z] >= 0 && (anchor < 0 || adj_[img_[z]].size() < adj_[img_[anchor]].size())) anchor = z;
    auto keep = [&](int y) {
      if (pre_[y] >= 0) return;
      if (opt_.degree_pruning && sig_[x] != sig_[y]) return;
      for (int z : adj_[x])
        if (img_[z] >= 0 && !adjacent(img_[z], y)) return;
      out.push_back(y);
    };
    if (anchor >= 0)
      for (int y : adj_[img_[anchor]]) keep(y);
    else
      for (int y = 0; y < n_; ++y) keep(y);
  }

  std::uint64_t encode(const Tuple& t) const {
    std::uint64_t key = 0;
    for (int x : t) key = key * static_cast<std::uint64_t>(n_ + 1) + static_cast<std::uint64_t>(x);
    return key;
  }

  // Checks every relation tuple through x (forward) and through y (backward)
  // whose entries are all assigned, assuming x -> y is being added.
  bool consistent(int x, int y) {
    img_[x] = y;
    pre_[y] = x;
    bool ok = true;
    for (auto [r, k] : touching_[x]) {
      const Tuple& t = M_.relations[r].tuples[k];
      Tuple u;
      u.reserve(t.size());
      for (int z : t) {
        if (img_[z] < 0) break;
        u.push_back(img_[z]);
      }
      if (u.size() == t.size() && !sets_[r].count(encode(u))) {
        ok = false;
        break;
      }
    }
    if (ok) {
      for (auto [r, k] : touching_[y]) {
        const Tuple& t = M_.relations[r].tuples[k];
        Tuple u;
        u.reserve(t.size());
        for (int z : t) {
          if (pre_[z] < 0) break;
          u.push_back(pre_[z]);
        }
        if (u.size() == t.size() && !sets_[r].count(encode(u))) {
          ok = false;
          break;
        }
      }
    }
    img_[x] = -1;
    pre_[y] = -1;
    return ok;
  }

  // Branches on the unassigned point with the fewest candidate images.
  void dfs(std::size_t left) {
    if (found_.size() >= opt_.max_results) return;
    if (left == 0) {
      found_.push_back(img_);
      return;
    }
    int best = -1;
    std::vector<int> best_c, c;
    for (int x = 0; x < n_; ++x) {
      if (img_[x] >= 0) continue;
      candidates(x, c);
      if (best < 0 || c.size() < best_c.size()) {
        best = x;
        best_c.swap(c);
        if (best_c.size() <= 1) break;
      }
    }
    for (int y : best_c) {
      if (!consistent(best, y)) continue;
      img_[best] = y;
      pre_[y] = best;
      dfs(left - 1);
      img_[best] = -1;
      pre_[y] = -1;
      if (found_.size() >= opt_.max_results) return;
    }
  }

  const FinStructure& M_;
  AutomorphismOptions opt_;
  int n_;
  std::vector<std::unordered_set<std::uint64_t>> sets_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> touching_;
  std::vector<std::vector<int>> sig_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> img_, pre_;
  std::vector<char> adjbits_;
  std::vector<std::vector<int>> found_;
};

}  // namespace

std::vector<std::vector<int>> automorphisms_extending(const FinStructure& M, const PartialMap& fixed,
                                                      const AutomorphismOptions& opt) {
  if (M.size > opt.size_budget)
    throw BudgetExceeded("structure of size " + std::to_string(M.size) + " exceeds the brute-force budget " +
                         std::to_string(opt.size_budget));
  for (const auto& r : M.relations) {
    double bits = r.arity * std::log2(static_cast<double>(M.size + 1));
    if (bits > 62) throw BudgetExceeded("relation '" + r.name + "' too wide for tuple hashing");
  }
  return AutSearch(M, opt).run(fixed);
}

std::vector<std::vector<int>> brute_automorphisms(const FinStructure& M, const AutomorphismOptions& opt) {
  return automorphisms_extending(M, PartialMap(M.size, M.size), opt);
}

bool extends_to_automorphism(const FinStructure& M, const PartialMap& pi, int size_budget) {
  AutomorphismOptions opt;
  opt.size_budget = size_budget;
  opt.max_results = 1;
  return !automorphisms_extending(M, pi, opt).empty();
}

}  // namespace wb
