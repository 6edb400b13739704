#pragma once

#include <string>
#include <vector>

#include "relconj/groups.hpp"

namespace relconj {

// Marker for letters of a free ambient group, which has trivial parabolics.
inline constexpr int kFreeLetter = -1;

// One edge of the relative Cayley graph: a whole parabolic-factor element,
// or a single generator letter when the ambient group is free.
struct Syllable {
  int factor = kFreeLetter;  // 0-based parabolic index, or kFreeLetter
  Element element;           // factor element (parabolic) / unused for letters
  int letter = -1;           // ambient symbol when factor == kFreeLetter
};

// Syllable decomposition of an element of a free-product (or free) ambient
// group; the sequence is the relative geodesic and its length realizes the
// relative word length.
class RelativeWord {
 public:
  RelativeWord(GroupRef handle, std::vector<Syllable> syllables);

  const GroupRef& handle() const noexcept { return handle_; }
  const std::vector<Syllable>& syllables() const noexcept {
    return syllables_;
  }
  std::size_t length() const noexcept { return syllables_.size(); }

  // Ambient element of syllable p.
  Element syllable_element(std::size_t p) const;
  // Product of the first j syllables; j = 0 gives the identity.
  Element prefix(std::size_t j) const;
  Element evaluate() const { return prefix(syllables_.size()); }

 private:
  GroupRef handle_;
  std::vector<Syllable> syllables_;
};

RelativeWord relative_normal_form(const Element& e);
long long relative_length(const Element& e);

struct Membership {
  enum class Tag { none, all, factor };
  Tag tag = Tag::none;
  int factor = -1;

  static Membership none() { return {Tag::none, -1}; }
  static Membership all() { return {Tag::all, -1}; }
  static Membership in_factor(int i) { return {Tag::factor, i}; }
  bool contains(int i) const {
    return tag == Tag::all || (tag == Tag::factor && factor == i);
  }
  bool operator==(const Membership&) const = default;
};

// Identity is a member of every parabolic; a single syllable is a member of
// its factor; anything longer lies in no parabolic.
Membership parabolic_membership(const Element& e);

// Ambient identity-or-single-syllable element -> element of factor i.
Element project_to_factor(const Element& e, int factor);

// Substitutes a factor element for the parabolic syllable at `position` and
// re-normalizes; the factor identity deletes the syllable (neighbors may
// merge).
RelativeWord splice(const RelativeWord& x, std::size_t position,
                    const Element& replacement);

// `(A: u u) (B: v)` for parabolic syllables, bare letters for free ones.
std::string print_relative(const RelativeWord& x);
std::string factor_display_name(int factor);

}  // namespace relconj
