#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "relconj/words.hpp"

namespace relconj {

class Group;
using GroupRef = std::shared_ptr<const Group>;

struct ProductSyllable;

// A group element in canonical form. The payload depends on the owning
// backend: finite groups store an element index, abelian groups a coordinate
// vector (torsion coordinates reduced into [0, m)), free groups the freely
// reduced word, free products the alternating syllable sequence.
class Element {
 public:
  Element();
  Element(const Element&);
  Element(Element&&) noexcept;
  Element& operator=(const Element&);
  Element& operator=(Element&&) noexcept;
  ~Element();

  bool valid() const noexcept { return group_ != nullptr; }
  const Group* group() const noexcept { return group_; }

  bool operator==(const Element& other) const;
  bool operator!=(const Element& other) const { return !(*this == other); }
  std::size_t hash() const;
  bool is_identity() const;

  int finite_index() const;
  const std::vector<std::int64_t>& abelian_coords() const;
  const Word& free_word() const;
  const std::vector<ProductSyllable>& product_syllables() const;

 private:
  friend class FiniteGroup;
  friend class AbelianGroup;
  friend class FreeGroup;
  friend class FreeProductGroup;

  using Payload = std::variant<std::monostate, int, std::vector<std::int64_t>,
                               Word, std::vector<ProductSyllable>>;

  Element(const Group* group, Payload payload);

  const Group* group_ = nullptr;
  Payload payload_;
};

// One factor block of a free-product normal form. `element` is a nonidentity
// element of the factor's group.
struct ProductSyllable {
  int factor;
  Element element;

  bool operator==(const ProductSyllable& other) const {
    return factor == other.factor && element == other.element;
  }
};

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
};

using ElementSet = std::unordered_set<Element, ElementHash>;

// A computable group backend over a symmetrized alphabet. Handles are
// immutable and shared; elements are tied to their handle by pointer.
class Group : public std::enable_shared_from_this<Group> {
 public:
  enum class Kind { finite, abelian, free, free_product };

  virtual ~Group() = default;

  Kind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept;
  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetRef& alphabet_ref() const noexcept { return alphabet_; }

  virtual Element identity() const = 0;
  virtual Element letter(int symbol) const = 0;
  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& a) const = 0;
  // Length of a shortest word over the alphabet representing a.
  virtual long long x_length(const Element& a) const = 0;
  // Shortlex-least geodesic word representing a.
  virtual Word canonical_word(const Element& a) const = 0;

  virtual Element element_of(const Word& w) const;

  // x^-1 a x
  Element conjugate(const Element& a, const Element& x) const;

  void check_mine(const Element& e) const;
  void check_word(const Word& w) const;

 protected:
  Group(Kind kind, AlphabetRef alphabet);

  Kind kind_;
  AlphabetRef alphabet_;
};

class FiniteGroup final : public Group {
 public:
  struct Spec {
    std::vector<std::string> generators;
    std::vector<std::string> element_names;
    std::vector<std::vector<int>> table;  // table[a][b] = index of a*b
    std::unordered_map<std::string, int> generator_map;
    std::vector<std::string> declared_involutions;
  };

  static std::shared_ptr<const FiniteGroup> make(Spec spec);

  int order() const noexcept { return static_cast<int>(table_.size()); }
  int identity_index() const noexcept { return identity_; }
  int diameter() const noexcept { return diameter_; }
  const std::string& element_name(int index) const {
    return element_names_.at(index);
  }
  int index_of(const Element& e) const;
  Element element_at(int index) const;
  // All elements in (BFS distance, shortlex canonical word) order.
  const std::vector<int>& search_order() const noexcept {
    return search_order_;
  }

  Element identity() const override;
  Element letter(int symbol) const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  long long x_length(const Element& a) const override;
  Word canonical_word(const Element& a) const override;

 private:
  FiniteGroup(AlphabetRef alphabet, Spec spec);
  void build_distance_table();

  std::vector<std::string> element_names_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_of_;
  std::vector<int> symbol_element_;  // alphabet symbol -> element index
  int identity_ = -1;
  int diameter_ = 0;
  std::vector<int> distance_;
  std::vector<int> parent_element_;  // BFS tree: previous element
  std::vector<int> parent_symbol_;   // BFS tree: symbol taken
  std::vector<int> search_order_;
};

class AbelianGroup final : public Group {
 public:
  // Coordinates: `rank` free coordinates followed by one per torsion modulus.
  // Generator k maps to the k-th unit vector.
  static std::shared_ptr<const AbelianGroup> make(
      const std::vector<std::string>& generators, int rank,
      std::vector<std::int64_t> torsion,
      const std::vector<std::string>& involutions = {});

  int rank() const noexcept { return rank_; }
  const std::vector<std::int64_t>& torsion() const noexcept {
    return torsion_;
  }
  Element from_coords(std::vector<std::int64_t> coords) const;

  Element identity() const override;
  Element letter(int symbol) const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  long long x_length(const Element& a) const override;
  Word canonical_word(const Element& a) const override;

 private:
  AbelianGroup(AlphabetRef alphabet, int rank,
               std::vector<std::int64_t> torsion);
  std::vector<std::int64_t> normalize(std::vector<std::int64_t> coords) const;

  int rank_;
  std::vector<std::int64_t> torsion_;
  // symbol -> (coordinate, +1/-1)
  std::vector<std::pair<int, int>> symbol_action_;
};

class FreeGroup final : public Group {
 public:
  static std::shared_ptr<const FreeGroup> make(
      const std::vector<std::string>& generators);

  int rank() const noexcept { return rank_; }
  Element from_word(const Word& w) const;

  Element identity() const override;
  Element letter(int symbol) const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  long long x_length(const Element& a) const override;
  Word canonical_word(const Element& a) const override;
  Element element_of(const Word& w) const override;

 private:
  FreeGroup(AlphabetRef alphabet, int rank);
  int rank_;
};

class FreeProductGroup final : public Group {
 public:
  // Factors must be finite, abelian, or free; their alphabets are disjoint
  // and concatenate (in factor order) into the ambient alphabet.
  static std::shared_ptr<const FreeProductGroup> make(
      std::vector<GroupRef> factors);

  int factor_count() const noexcept {
    return static_cast<int>(factors_.size());
  }
  const GroupRef& factor(int i) const { return factors_.at(i); }
  int symbol_factor(int symbol) const { return symbol_factor_.at(symbol); }
  int to_factor_symbol(int symbol) const {
    return symbol_in_factor_.at(symbol);
  }
  int to_ambient_symbol(int factor, int factor_symbol) const;

  // Embeds a factor element as a (possibly empty) syllable sequence.
  Element embed(int factor, const Element& factor_element) const;
  Element from_syllables(std::vector<ProductSyllable> syllables) const;

  Element identity() const override;
  Element letter(int symbol) const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  long long x_length(const Element& a) const override;
  Word canonical_word(const Element& a) const override;

 private:
  FreeProductGroup(AlphabetRef alphabet, std::vector<GroupRef> factors);
  void append_syllable(std::vector<ProductSyllable>& acc,
                       const ProductSyllable& s) const;

  std::vector<GroupRef> factors_;
  std::vector<int> symbol_factor_;
  std::vector<int> symbol_in_factor_;
  std::vector<int> factor_symbol_base_;
};

struct EnumLimits {
  std::uint64_t max_elements = 10'000'000;
  int workers = 1;
};

// Level-synchronized BFS over the Cayley graph with canonical-form
// deduplication. Spheres come out in nondecreasing x_length, each sphere
// sorted by shortlex canonical word; sphere 0 is {identity}.
class BallEnumerator {
 public:
  BallEnumerator(GroupRef group, long long radius, EnumLimits limits = {});

  // Next sphere, or nullopt once the radius is exceeded or the group is
  // exhausted. Throws Error(resource_limit) if max_elements would be passed.
  std::optional<std::span<const Element>> next_sphere();

  long long radius_reached() const noexcept { return emitted_radius_; }
  std::uint64_t elements_seen() const noexcept { return seen_; }
  bool exhausted() const noexcept { return exhausted_; }

 private:
  GroupRef group_;
  long long radius_;
  EnumLimits limits_;
  ElementSet visited_;
  std::vector<Element> sphere_;
  long long next_radius_ = 0;
  long long emitted_radius_ = -1;
  std::uint64_t seen_ = 0;
  bool exhausted_ = false;
  bool done_ = false;
};

std::vector<Element> enumerate_ball(GroupRef group, long long radius,
                                    EnumLimits limits = {});

}  // namespace relconj
