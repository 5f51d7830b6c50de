#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wb {

// Generator with level `level` and index `index` (index <= level), or its inverse.
struct Symbol {
  unsigned level = 0;
  unsigned index = 0;
  bool inverted = false;

  Symbol inverse() const { return {level, index, !inverted}; }
  bool operator==(const Symbol&) const = default;
  std::string str() const;
};

inline Symbol sym(unsigned level, unsigned index) { return {level, index, false}; }
inline Symbol inv(unsigned level, unsigned index) { return {level, index, true}; }

// Reduced word satisfying T1..T5. Only validate() and lmul() produce these.
class Word {
 public:
  Word() = default;

  const std::vector<Symbol>& symbols() const { return syms_; }
  std::size_t size() const { return syms_.size(); }
  bool empty() const { return syms_.empty(); }
  const Symbol& head() const { return syms_.front(); }
  // Level of every symbol; nullopt for the empty word, which lives at every level.
  std::optional<unsigned> level() const;
  Word tail() const;

  bool operator==(const Word&) const = default;
  std::string str() const;

 private:
  friend struct WordAccess;
  std::vector<Symbol> syms_;
};

struct Validation {
  std::optional<Word> word;
  std::vector<std::string> violations;  // names such as "T3", "T5"
  bool ok() const { return word.has_value(); }
};

Validation validate(const std::vector<Symbol>& symbols);
// Throws with the violation names when the list is not a reduced word.
Word make_word(const std::vector<Symbol>& symbols);

// Left multiplication by s (or s^-1 when inverse), cancelling against the head
// when it is the exact inverse. s itself must be non-inverted.
Word lmul(const Symbol& s, const Word& tau, bool inverse = false);

// Canonical total order: shorter first, then symbolwise by (index, inverted).
std::strong_ordering canonical_cmp(const Word& a, const Word& b);

Word parse_word(std::string_view text);

// Every reduced word at `level` of length 1..max_len, in canonical order.
std::vector<Word> enumerate_words(unsigned level, std::size_t max_len);

}  // namespace wb
