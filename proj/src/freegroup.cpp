#include "wb/freegroup.hpp"

#include <cctype>
#include <algorithm>

#include "wb/error.hpp"

namespace wb {

struct WordAccess {
  static Word make(std::vector<Symbol> s) {
    Word w;
    w.syms_ = std::move(s);
    return w;
  }
};

std::string Symbol::str() const {
  return std::string(inverted ? "S(" : "s(") + std::to_string(level) + "," + std::to_string(index) + ")";
}

std::optional<unsigned> Word::level() const {
  if (syms_.empty()) return std::nullopt;
  return syms_.front().level;
}

Word Word::tail() const {
  if (syms_.empty()) throw Error("tail of the empty word");
  return WordAccess::make({syms_.begin() + 1, syms_.end()});
}

std::string Word::str() const {
  if (syms_.empty()) return "e";
  std::string out;
  for (const auto& s : syms_) {
    if (!out.empty()) out += ' ';
    out += s.str();
  }
  return out;
}

Validation validate(const std::vector<Symbol>& symbols) {
  Validation v;
  auto flag = [&](const char* name) {
    for (const auto& x : v.violations)
      if (x == name) return;
    v.violations.emplace_back(name);
  };
  const std::size_t n = symbols.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Symbol& s = symbols[k];
    if (s.index > s.level || s.level != symbols.front().level) flag("T2");
  }
  if (n > 0) {
    const Symbol& last = symbols.back();
    if (last.inverted || last.index != last.level) flag("T3");
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Symbol& a = symbols[k];
    const Symbol& b = symbols[k + 1];
    if (a.inverted && b.inverted) flag("T4");
    if (a.level == b.level && a.index == b.index && a.inverted != b.inverted) flag("T5");
  }
  if (v.violations.empty()) v.word = WordAccess::make(symbols);
  return v;
}

Word make_word(const std::vector<Symbol>& symbols) {
  Validation v = validate(symbols);
  if (v.ok()) return *v.word;
  std::string msg = "not a reduced word:";
  for (const auto& x : v.violations) msg += " " + x;
  throw Error(msg);
}

Word lmul(const Symbol& s, const Word& tau, bool inverse) {
  if (s.inverted) throw Error("lmul multiplier must be a generator; use the inverse flag");
  if (s.index > s.level) throw Error("T2 would fail: index exceeds level");
  if (!tau.empty() && *tau.level() != s.level) throw Error("T2 would fail: level mismatch");
  const auto& t = tau.symbols();
  if (!inverse) {
    if (t.empty()) {
      if (s.index != s.level) throw Error("T3 would fail: product ends in a non-terminal symbol");
      return WordAccess::make({s});
    }
    if (t.front() == s.inverse()) return tau.tail();  // cancellation
    std::vector<Symbol> out{s};
    out.insert(out.end(), t.begin(), t.end());
    return WordAccess::make(std::move(out));
  }
  if (t.empty()) throw Error("T3 would fail: product ends in an inverted symbol");
  if (t.front() == s) return tau.tail();
  if (t.front().inverted) throw Error("T4 would fail: two adjacent inverted symbols");
  std::vector<Symbol> out{s.inverse()};
  out.insert(out.end(), t.begin(), t.end());
  return WordAccess::make(std::move(out));
}

std::strong_ordering canonical_cmp(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Symbol& x = a.symbols()[i];
    const Symbol& y = b.symbols()[i];
    if (x.index != y.index) return x.index <=> y.index;
    if (x.inverted != y.inverted) return x.inverted <=> y.inverted;
  }
  return std::strong_ordering::equal;
}

Word parse_word(std::string_view text) {
  std::vector<Symbol> out;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw Error("word literal at column " + std::to_string(pos + 1) + ": " + msg);
  };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto number = [&]() -> unsigned {
    skip();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail("expected a number");
    unsigned v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<unsigned>(text[pos] - '0');
      if (v > 1000000) fail("number too large");
      ++pos;
    }
    skip();
    return v;
  };
  auto expect = [&](char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  };
  skip();
  if (text.substr(pos) == "e") return Word{};
  while (pos < text.size()) {
    char c = text[pos];
    if (c != 's' && c != 'S') fail("expected s(level,index) or S(level,index)");
    ++pos;
    expect('(');
    unsigned level = number();
    expect(',');
    unsigned index = number();
    expect(')');
    out.push_back({level, index, c == 'S'});
    skip();
  }
  return make_word(out);
}

std::vector<Word> enumerate_words(unsigned level, std::size_t max_len) {
  // Suffixes built right to left stay reduced as long as each new head is compatible.
  std::vector<std::vector<std::vector<Symbol>>> by_len(max_len + 1);
  if (max_len >= 1) by_len[1].push_back({sym(level, level)});
  for (std::size_t len = 2; len <= max_len; ++len) {
    for (const auto& suffix : by_len[len - 1]) {
      for (unsigned i = 0; i <= level; ++i) {
        for (bool iv : {false, true}) {
          Symbol a{level, i, iv};
          const Symbol& b = suffix.front();
          if (a.inverted && b.inverted) continue;
          if (a.index == b.index && a.inverted != b.inverted) continue;
          std::vector<Symbol> w{a};
          w.insert(w.end(), suffix.begin(), suffix.end());
          by_len[len].push_back(std::move(w));
        }
      }
    }
  }
  std::vector<Word> out;
  for (auto& bucket : by_len)
    for (auto& w : bucket) out.push_back(WordAccess::make(std::move(w)));
  std::stable_sort(out.begin(), out.end(),
                   [](const Word& a, const Word& b) { return canonical_cmp(a, b) < 0; });
  return out;
}

}  // namespace wb
