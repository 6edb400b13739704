#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relconj/errors.hpp"

namespace relconj {

// A symmetrized generating set: every declared generator is followed by its
// formal inverse unless it is declared self-inverse, in which case the
// involution fixes it. Symbol order is the declared order and doubles as the
// shortlex tie-break order everywhere.
class Alphabet {
 public:
  static std::shared_ptr<const Alphabet> make(
      const std::vector<std::string>& generators,
      const std::vector<std::string>& involutions = {});

  int size() const noexcept { return static_cast<int>(names_.size()); }
  const std::string& name(int symbol) const { return names_.at(symbol); }
  int inverse(int symbol) const { return inverse_.at(symbol); }
  std::optional<int> find(std::string_view name) const;
  bool is_self_inverse(int symbol) const { return inverse(symbol) == symbol; }

  // Structural equality (names and involution).
  bool operator==(const Alphabet& other) const;
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

 private:
  Alphabet() = default;
  std::vector<std::string> names_;
  std::vector<int> inverse_;
  std::unordered_map<std::string, int> index_;
};

using AlphabetRef = std::shared_ptr<const Alphabet>;

// A word over a symmetrized alphabet; letters are symbol indices. The empty
// word is the identity. Words are immutable values.
class Word {
 public:
  Word() = default;
  Word(AlphabetRef alphabet, std::vector<std::int32_t> letters);

  const AlphabetRef& alphabet() const noexcept { return alphabet_; }
  std::span<const std::int32_t> letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  bool operator==(const Word& other) const;
  bool operator!=(const Word& other) const { return !(*this == other); }

  // Lexicographic on letters, then by length: shortlex within a fixed length.
  static bool lex_less(const Word& a, const Word& b);

 private:
  AlphabetRef alphabet_;
  std::vector<std::int32_t> letters_;
};

// Token syntax: whitespace-separated `name` or `name^-1`.
Word parse_word(std::string_view text, AlphabetRef alphabet);
std::string print_word(const Word& w);

Word free_reduce(const Word& w);
Word invert(const Word& w);
Word concat_reduce(const Word& u, const Word& v);

// w = conjugator * core * conjugator^-1 with core cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const Word& w);

void check_same_alphabet(const Word& u, const Word& v);

}  // namespace relconj
