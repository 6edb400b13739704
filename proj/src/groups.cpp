#include "relconj/groups.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace relconj {

// ---------------------------------------------------------------------------
// Element

Element::Element() = default;
Element::Element(const Element&) = default;
Element::Element(Element&&) noexcept = default;
Element& Element::operator=(const Element&) = default;
Element& Element::operator=(Element&&) noexcept = default;
Element::~Element() = default;

Element::Element(const Group* group, Payload payload)
    : group_(group), payload_(std::move(payload)) {}

bool Element::operator==(const Element& other) const {
  return group_ == other.group_ && payload_ == other.payload_;
}

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::size_t Element::hash() const {
  std::size_t h = payload_.index();
  switch (payload_.index()) {
    case 1:
      h = hash_combine(h, static_cast<std::size_t>(std::get<int>(payload_)));
      break;
    case 2:
      for (auto c : std::get<std::vector<std::int64_t>>(payload_)) {
        h = hash_combine(h, static_cast<std::size_t>(c));
      }
      break;
    case 3:
      for (auto l : std::get<Word>(payload_).letters()) {
        h = hash_combine(h, static_cast<std::size_t>(l));
      }
      break;
    case 4:
      for (const auto& s : std::get<std::vector<ProductSyllable>>(payload_)) {
        h = hash_combine(h, static_cast<std::size_t>(s.factor));
        h = hash_combine(h, s.element.hash());
      }
      break;
    default:
      break;
  }
  return h;
}

bool Element::is_identity() const {
  if (!valid()) return false;
  switch (group_->kind()) {
    case Group::Kind::finite:
      return finite_index() ==
             static_cast<const FiniteGroup*>(group_)->identity_index();
    case Group::Kind::abelian: {
      const auto& c = abelian_coords();
      return std::all_of(c.begin(), c.end(),
                         [](std::int64_t v) { return v == 0; });
    }
    case Group::Kind::free:
      return free_word().empty();
    case Group::Kind::free_product:
      return product_syllables().empty();
  }
  return false;
}

int Element::finite_index() const { return std::get<int>(payload_); }

const std::vector<std::int64_t>& Element::abelian_coords() const {
  return std::get<std::vector<std::int64_t>>(payload_);
}

const Word& Element::free_word() const { return std::get<Word>(payload_); }

const std::vector<ProductSyllable>& Element::product_syllables() const {
  return std::get<std::vector<ProductSyllable>>(payload_);
}

// ---------------------------------------------------------------------------
// Group

Group::Group(Kind kind, AlphabetRef alphabet)
    : kind_(kind), alphabet_(std::move(alphabet)) {}

const char* Group::kind_name() const noexcept {
  switch (kind_) {
    case Kind::finite: return "finite";
    case Kind::abelian: return "abelian";
    case Kind::free: return "free";
    case Kind::free_product: return "free_product";
  }
  return "group";
}

void Group::check_mine(const Element& e) const {
  if (e.group() != this) {
    fail(Errc::handle_mismatch, "element belongs to a different group handle");
  }
}

void Group::check_word(const Word& w) const {
  if (!w.alphabet() || *w.alphabet() != *alphabet_) {
    fail(Errc::alphabet_mismatch, "word is not over this group's alphabet");
  }
}

Element Group::element_of(const Word& w) const {
  check_word(w);
  Element acc = identity();
  for (auto l : w.letters()) acc = multiply(acc, letter(l));
  return acc;
}

Element Group::conjugate(const Element& a, const Element& x) const {
  check_mine(a);
  check_mine(x);
  return multiply(multiply(inverse(x), a), x);
}

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(AlphabetRef alphabet, Spec spec)
    : Group(Kind::finite, std::move(alphabet)),
      element_names_(std::move(spec.element_names)),
      table_(std::move(spec.table)) {}

std::shared_ptr<const FiniteGroup> FiniteGroup::make(Spec spec) {
  const int n = static_cast<int>(spec.element_names.size());
  if (n < 1) fail(Errc::bad_file, "finite group needs at least one element");
  if (static_cast<int>(spec.table.size()) != n) {
    fail(Errc::bad_file, "finite table must have one row per element");
  }
  for (const auto& row : spec.table) {
    if (static_cast<int>(row.size()) != n) {
      fail(Errc::bad_file, "finite table row has wrong length");
    }
    for (int v : row) {
      if (v < 0 || v >= n) fail(Errc::bad_file, "finite table entry out of range");
    }
  }
  // Latin square: rows and columns are permutations.
  for (int i = 0; i < n; ++i) {
    std::vector<bool> row_seen(n, false), col_seen(n, false);
    for (int j = 0; j < n; ++j) {
      if (row_seen[spec.table[i][j]]) {
        fail(Errc::bad_file, "finite table row is not a permutation");
      }
      row_seen[spec.table[i][j]] = true;
      if (col_seen[spec.table[j][i]]) {
        fail(Errc::bad_file, "finite table column is not a permutation");
      }
      col_seen[spec.table[j][i]] = true;
    }
  }
  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) {
      ok = spec.table[e][x] == x && spec.table[x][e] == x;
    }
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) fail(Errc::bad_file, "finite table has no identity");
  if (n <= 200) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          if (spec.table[spec.table[a][b]][c] != spec.table[a][spec.table[b][c]]) {
            fail(Errc::bad_file, "finite table is not associative");
          }
        }
      }
    }
  }

  if (spec.generators.empty()) {
    fail(Errc::bad_file, "finite group needs at least one generator");
  }
  for (const auto& g : spec.generators) {
    auto it = spec.generator_map.find(g);
    if (it == spec.generator_map.end()) {
      fail(Errc::bad_file, "generator_map missing entry for '" + g + "'");
    }
    if (it->second < 0 || it->second >= n) {
      fail(Errc::bad_file, "generator_map entry out of range for '" + g + "'");
    }
  }

  // Self-inverse generators are exactly those squaring to the identity.
  std::vector<std::string> involutions;
  for (const auto& g : spec.generators) {
    int eg = spec.generator_map.at(g);
    if (spec.table[eg][eg] == identity) involutions.push_back(g);
  }
  for (const auto& g : spec.declared_involutions) {
    if (std::find(involutions.begin(), involutions.end(), g) ==
        involutions.end()) {
      fail(Errc::bad_file,
           "declared involution '" + g + "' does not square to the identity");
    }
  }

  std::vector<int> inverse_of(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (spec.table[a][b] == identity) {
        if (spec.table[b][a] != identity) {
          fail(Errc::bad_file, "finite table inverses are not two-sided");
        }
        inverse_of[a] = b;
        break;
      }
    }
  }

  AlphabetRef alphabet = Alphabet::make(spec.generators, involutions);
  // Base symbols appear in declared generator order; derived inverse symbols
  // map to the inverse elements.
  std::vector<int> symbol_element(alphabet->size(), -1);
  {
    std::size_t gi = 0;
    for (int s = 0; s < alphabet->size(); ++s) {
      if (alphabet->inverse(s) >= s) {
        symbol_element[s] = spec.generator_map.at(spec.generators[gi]);
        ++gi;
      }
    }
    for (int s = 0; s < alphabet->size(); ++s) {
      if (alphabet->inverse(s) < s) {
        symbol_element[s] = inverse_of[symbol_element[alphabet->inverse(s)]];
      }
    }
  }

  auto group = std::shared_ptr<FiniteGroup>(
      new FiniteGroup(std::move(alphabet), std::move(spec)));
  group->identity_ = identity;
  group->inverse_of_ = std::move(inverse_of);
  group->symbol_element_ = std::move(symbol_element);
  group->build_distance_table();
  return group;
}

Element FiniteGroup::identity() const { return Element(this, identity_); }

Element FiniteGroup::letter(int symbol) const {
  return Element(this, symbol_element_.at(symbol));
}

Element FiniteGroup::multiply(const Element& a, const Element& b) const {
  check_mine(a);
  check_mine(b);
  return Element(this, table_[a.finite_index()][b.finite_index()]);
}

Element FiniteGroup::inverse(const Element& a) const {
  check_mine(a);
  return Element(this, inverse_of_[a.finite_index()]);
}

long long FiniteGroup::x_length(const Element& a) const {
  check_mine(a);
  return distance_[a.finite_index()];
}

Word FiniteGroup::canonical_word(const Element& a) const {
  check_mine(a);
  std::vector<std::int32_t> letters;
  int e = a.finite_index();
  while (e != identity_) {
    letters.push_back(parent_symbol_[e]);
    e = parent_element_[e];
  }
  std::reverse(letters.begin(), letters.end());
  return Word(alphabet_, std::move(letters));
}

int FiniteGroup::index_of(const Element& e) const {
  check_mine(e);
  return e.finite_index();
}

Element FiniteGroup::element_at(int index) const {
  if (index < 0 || index >= order()) {
    fail(Errc::index_out_of_range, "finite element index");
  }
  return Element(this, index);
}

void FiniteGroup::build_distance_table() {
  const int n = order();
  distance_.assign(n, -1);
  parent_element_.assign(n, -1);
  parent_symbol_.assign(n, -1);
  search_order_.clear();
  distance_[identity_] = 0;
  search_order_.push_back(identity_);
  std::vector<int> level{identity_};
  int d = 0;
  while (!level.empty()) {
    std::vector<int> next;
    for (int e : level) {
      for (int s = 0; s < alphabet_->size(); ++s) {
        int t = table_[e][symbol_element_[s]];
        if (distance_[t] == -1) {
          distance_[t] = d + 1;
          parent_element_[t] = e;
          parent_symbol_[t] = s;
          next.push_back(t);
          search_order_.push_back(t);
        }
      }
    }
    if (!next.empty()) diameter_ = d + 1;
    level = std::move(next);
    ++d;
  }
  for (int i = 0; i < n; ++i) {
    if (distance_[i] == -1) {
      fail(Errc::bad_file, "declared generators do not generate the group");
    }
  }
}

// ---------------------------------------------------------------------------
// AbelianGroup

AbelianGroup::AbelianGroup(AlphabetRef alphabet, int rank,
                           std::vector<std::int64_t> torsion)
    : Group(Kind::abelian, std::move(alphabet)),
      rank_(rank),
      torsion_(std::move(torsion)) {}

std::shared_ptr<const AbelianGroup> AbelianGroup::make(
    const std::vector<std::string>& generators, int rank,
    std::vector<std::int64_t> torsion,
    const std::vector<std::string>& involutions) {
  if (rank < 0) fail(Errc::bad_file, "abelian rank must be nonnegative");
  for (auto m : torsion) {
    if (m < 2) fail(Errc::bad_file, "torsion moduli must be >= 2");
  }
  const int dims = rank + static_cast<int>(torsion.size());
  if (static_cast<int>(generators.size()) != dims) {
    fail(Errc::bad_file,
         "abelian group needs exactly rank + #torsion generators");
  }
  if (dims == 0) fail(Errc::bad_file, "abelian group needs at least one generator");
  for (const auto& inv : involutions) {
    auto it = std::find(generators.begin(), generators.end(), inv);
    if (it == generators.end()) {
      fail(Errc::bad_file, "involution '" + inv + "' is not a generator");
    }
    int coord = static_cast<int>(it - generators.begin());
    if (coord < rank || torsion[coord - rank] != 2) {
      fail(Errc::bad_file,
           "involution '" + inv + "' does not square to the identity");
    }
  }
  AlphabetRef alphabet = Alphabet::make(generators, involutions);
  auto group = std::shared_ptr<AbelianGroup>(
      new AbelianGroup(std::move(alphabet), rank, std::move(torsion)));
  const Alphabet& ab = *group->alphabet_;
  group->symbol_action_.assign(ab.size(), {-1, 0});
  int coord = 0;
  for (int s = 0; s < ab.size(); ++s) {
    if (ab.inverse(s) >= s) {
      group->symbol_action_[s] = {coord, +1};
      if (ab.inverse(s) != s) group->symbol_action_[ab.inverse(s)] = {coord, -1};
      ++coord;
    }
  }
  return group;
}

std::vector<std::int64_t> AbelianGroup::normalize(
    std::vector<std::int64_t> coords) const {
  for (std::size_t k = 0; k < torsion_.size(); ++k) {
    std::int64_t m = torsion_[k];
    std::int64_t& c = coords[rank_ + k];
    c = ((c % m) + m) % m;
  }
  return coords;
}

Element AbelianGroup::from_coords(std::vector<std::int64_t> coords) const {
  if (static_cast<int>(coords.size()) != rank_ + static_cast<int>(torsion_.size())) {
    fail(Errc::index_out_of_range, "abelian coordinate vector has wrong length");
  }
  return Element(this, normalize(std::move(coords)));
}

Element AbelianGroup::identity() const {
  return Element(this, std::vector<std::int64_t>(
                           rank_ + torsion_.size(), 0));
}

Element AbelianGroup::letter(int symbol) const {
  std::vector<std::int64_t> coords(rank_ + torsion_.size(), 0);
  auto [coord, sign] = symbol_action_.at(symbol);
  coords[coord] += sign;
  return Element(this, normalize(std::move(coords)));
}

Element AbelianGroup::multiply(const Element& a, const Element& b) const {
  check_mine(a);
  check_mine(b);
  std::vector<std::int64_t> coords = a.abelian_coords();
  const auto& other = b.abelian_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += other[i];
  return Element(this, normalize(std::move(coords)));
}

Element AbelianGroup::inverse(const Element& a) const {
  check_mine(a);
  std::vector<std::int64_t> coords = a.abelian_coords();
  for (auto& c : coords) c = -c;
  return Element(this, normalize(std::move(coords)));
}

long long AbelianGroup::x_length(const Element& a) const {
  check_mine(a);
  const auto& coords = a.abelian_coords();
  long long total = 0;
  for (int k = 0; k < rank_; ++k) total += std::llabs(coords[k]);
  for (std::size_t k = 0; k < torsion_.size(); ++k) {
    std::int64_t c = coords[rank_ + k];
    total += std::min(c, torsion_[k] - c);
  }
  return total;
}

Word AbelianGroup::canonical_word(const Element& a) const {
  check_mine(a);
  const auto& coords = a.abelian_coords();
  std::vector<std::int32_t> letters;
  int coord = 0;
  for (int s = 0; s < alphabet_->size(); ++s) {
    if (alphabet_->inverse(s) < s) continue;  // derived inverse symbol
    int inv = alphabet_->inverse(s);
    std::int64_t c = coords[coord];
    std::int64_t count;
    std::int32_t sym;
    if (coord < rank_) {
      count = std::llabs(c);
      sym = c >= 0 ? s : inv;
    } else {
      std::int64_t m = torsion_[coord - rank_];
      if (c <= m - c) {
        count = c;
        sym = s;
      } else {
        count = m - c;
        sym = static_cast<std::int32_t>(inv);
      }
    }
    for (std::int64_t i = 0; i < count; ++i) letters.push_back(sym);
    ++coord;
  }
  return Word(alphabet_, std::move(letters));
}

// ---------------------------------------------------------------------------
// FreeGroup

FreeGroup::FreeGroup(AlphabetRef alphabet, int rank)
    : Group(Kind::free, std::move(alphabet)), rank_(rank) {}

std::shared_ptr<const FreeGroup> FreeGroup::make(
    const std::vector<std::string>& generators) {
  if (generators.empty()) {
    fail(Errc::bad_file, "free group needs at least one generator");
  }
  AlphabetRef alphabet = Alphabet::make(generators, {});
  return std::shared_ptr<const FreeGroup>(new FreeGroup(
      std::move(alphabet), static_cast<int>(generators.size())));
}

Element FreeGroup::from_word(const Word& w) const {
  check_word(w);
  return Element(this, free_reduce(w));
}

Element FreeGroup::identity() const {
  return Element(this, Word(alphabet_, {}));
}

Element FreeGroup::letter(int symbol) const {
  return Element(this, Word(alphabet_, {symbol}));
}

Element FreeGroup::multiply(const Element& a, const Element& b) const {
  check_mine(a);
  check_mine(b);
  return Element(this, concat_reduce(a.free_word(), b.free_word()));
}

Element FreeGroup::inverse(const Element& a) const {
  check_mine(a);
  return Element(this, invert(a.free_word()));
}

long long FreeGroup::x_length(const Element& a) const {
  check_mine(a);
  return static_cast<long long>(a.free_word().size());
}

Word FreeGroup::canonical_word(const Element& a) const {
  check_mine(a);
  return a.free_word();
}

Element FreeGroup::element_of(const Word& w) const { return from_word(w); }

// ---------------------------------------------------------------------------
// FreeProductGroup

FreeProductGroup::FreeProductGroup(AlphabetRef alphabet,
                                   std::vector<GroupRef> factors)
    : Group(Kind::free_product, std::move(alphabet)),
      factors_(std::move(factors)) {}

std::shared_ptr<const FreeProductGroup> FreeProductGroup::make(
    std::vector<GroupRef> factors) {
  if (factors.empty()) {
    fail(Errc::bad_file, "free product needs at least one factor");
  }
  std::vector<std::string> generators;
  std::vector<std::string> involutions;
  for (const auto& f : factors) {
    if (!f) fail(Errc::bad_file, "null factor");
    if (f->kind() == Kind::free_product) {
      fail(Errc::bad_file, "free product factors must be finite, abelian, or free");
    }
    const Alphabet& fa = f->alphabet();
    for (int s = 0; s < fa.size(); ++s) {
      if (fa.inverse(s) < s) continue;
      generators.push_back(fa.name(s));
      if (fa.inverse(s) == s) involutions.push_back(fa.name(s));
    }
  }
  AlphabetRef alphabet = Alphabet::make(generators, involutions);
  auto group = std::shared_ptr<FreeProductGroup>(
      new FreeProductGroup(std::move(alphabet), std::move(factors)));
  const Alphabet& ab = *group->alphabet_;
  group->symbol_factor_.assign(ab.size(), -1);
  group->symbol_in_factor_.assign(ab.size(), -1);
  group->factor_symbol_base_.clear();
  int base = 0;
  for (int fi = 0; fi < group->factor_count(); ++fi) {
    const Alphabet& fa = group->factors_[fi]->alphabet();
    group->factor_symbol_base_.push_back(base);
    for (int s = 0; s < fa.size(); ++s) {
      if (ab.name(base + s) != fa.name(s)) {
        fail(Errc::bad_file, "factor alphabets do not concatenate cleanly");
      }
      group->symbol_factor_[base + s] = fi;
      group->symbol_in_factor_[base + s] = s;
    }
    base += fa.size();
  }
  return group;
}

int FreeProductGroup::to_ambient_symbol(int factor, int factor_symbol) const {
  return factor_symbol_base_.at(factor) + factor_symbol;
}

Element FreeProductGroup::embed(int factor, const Element& factor_element) const {
  if (factor < 0 || factor >= factor_count()) {
    fail(Errc::index_out_of_range, "factor index");
  }
  factors_[factor]->check_mine(factor_element);
  std::vector<ProductSyllable> syllables;
  if (!factor_element.is_identity()) {
    syllables.push_back({factor, factor_element});
  }
  return Element(this, std::move(syllables));
}

Element FreeProductGroup::from_syllables(
    std::vector<ProductSyllable> syllables) const {
  int previous = -1;
  for (const auto& s : syllables) {
    if (s.factor < 0 || s.factor >= factor_count()) {
      fail(Errc::index_out_of_range, "syllable factor index");
    }
    factors_[s.factor]->check_mine(s.element);
    if (s.element.is_identity()) {
      fail(Errc::factor_mismatch, "identity syllable in normal form");
    }
    if (s.factor == previous) {
      fail(Errc::factor_mismatch, "adjacent syllables in the same factor");
    }
    previous = s.factor;
  }
  return Element(this, std::move(syllables));
}

void FreeProductGroup::append_syllable(std::vector<ProductSyllable>& acc,
                                       const ProductSyllable& s) const {
  if (!acc.empty() && acc.back().factor == s.factor) {
    Element merged =
        factors_[s.factor]->multiply(acc.back().element, s.element);
    acc.pop_back();
    if (!merged.is_identity()) {
      acc.push_back({s.factor, std::move(merged)});
    }
  } else {
    acc.push_back(s);
  }
}

Element FreeProductGroup::identity() const {
  return Element(this, std::vector<ProductSyllable>{});
}

Element FreeProductGroup::letter(int symbol) const {
  int fi = symbol_factor_.at(symbol);
  Element fe = factors_[fi]->letter(symbol_in_factor_[symbol]);
  return embed(fi, fe);
}

Element FreeProductGroup::multiply(const Element& a, const Element& b) const {
  check_mine(a);
  check_mine(b);
  std::vector<ProductSyllable> acc = a.product_syllables();
  for (const auto& s : b.product_syllables()) append_syllable(acc, s);
  return Element(this, std::move(acc));
}

Element FreeProductGroup::inverse(const Element& a) const {
  check_mine(a);
  const auto& syllables = a.product_syllables();
  std::vector<ProductSyllable> out;
  out.reserve(syllables.size());
  for (auto it = syllables.rbegin(); it != syllables.rend(); ++it) {
    out.push_back({it->factor, factors_[it->factor]->inverse(it->element)});
  }
  return Element(this, std::move(out));
}

long long FreeProductGroup::x_length(const Element& a) const {
  check_mine(a);
  long long total = 0;
  for (const auto& s : a.product_syllables()) {
    total += factors_[s.factor]->x_length(s.element);
  }
  return total;
}

Word FreeProductGroup::canonical_word(const Element& a) const {
  check_mine(a);
  std::vector<std::int32_t> letters;
  for (const auto& s : a.product_syllables()) {
    Word fw = factors_[s.factor]->canonical_word(s.element);
    for (auto l : fw.letters()) {
      letters.push_back(to_ambient_symbol(s.factor, l));
    }
  }
  return Word(alphabet_, std::move(letters));
}

// ---------------------------------------------------------------------------
// BallEnumerator

BallEnumerator::BallEnumerator(GroupRef group, long long radius,
                               EnumLimits limits)
    : group_(std::move(group)), radius_(radius), limits_(limits) {
  if (radius_ < 0) fail(Errc::index_out_of_range, "negative radius");
  if (limits_.workers < 1) limits_.workers = 1;
}

std::optional<std::span<const Element>> BallEnumerator::next_sphere() {
  if (done_) return std::nullopt;
  if (next_radius_ == 0) {
    Element id = group_->identity();
    if (limits_.max_elements < 1) {
      done_ = true;
      fail(Errc::resource_limit, "element cap exceeded");
    }
    visited_.insert(id);
    sphere_ = {std::move(id)};
    seen_ = 1;
    emitted_radius_ = 0;
    next_radius_ = 1;
    return std::span<const Element>(sphere_);
  }
  if (next_radius_ > radius_) {
    done_ = true;
    return std::nullopt;
  }

  const Alphabet& ab = group_->alphabet();
  std::vector<Element> gens;
  gens.reserve(ab.size());
  for (int s = 0; s < ab.size(); ++s) gens.push_back(group_->letter(s));

  std::vector<Element> candidates;
  const std::size_t fan = sphere_.size() * gens.size();
  candidates.reserve(fan);
  if (limits_.workers > 1 && sphere_.size() >= 512) {
    const int workers = limits_.workers;
    std::vector<std::vector<Element>> chunks(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t stride = (sphere_.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        const std::size_t lo = w * stride;
        const std::size_t hi = std::min(sphere_.size(), lo + stride);
        auto& out = chunks[w];
        out.reserve((hi > lo ? hi - lo : 0) * gens.size());
        for (std::size_t i = lo; i < hi; ++i) {
          for (const auto& g : gens) {
            out.push_back(group_->multiply(sphere_[i], g));
          }
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& c : chunks) {
      candidates.insert(candidates.end(),
                        std::make_move_iterator(c.begin()),
                        std::make_move_iterator(c.end()));
    }
  } else {
    for (const auto& e : sphere_) {
      for (const auto& g : gens) candidates.push_back(group_->multiply(e, g));
    }
  }

  std::vector<Element> fresh;
  for (auto& c : candidates) {
    if (visited_.contains(c)) continue;
    if (seen_ + 1 > limits_.max_elements) {
      done_ = true;
      fail(Errc::resource_limit, "element cap exceeded");
    }
    visited_.insert(c);
    fresh.push_back(std::move(c));
    ++seen_;
  }
  if (fresh.empty()) {
    done_ = true;
    exhausted_ = true;
    return std::nullopt;
  }
  std::vector<std::pair<Word, Element>> keyed;
  keyed.reserve(fresh.size());
  for (auto& e : fresh) {
    Word w = group_->canonical_word(e);
    keyed.emplace_back(std::move(w), std::move(e));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) {
              return Word::lex_less(a.first, b.first);
            });
  sphere_.clear();
  sphere_.reserve(keyed.size());
  for (auto& [w, e] : keyed) sphere_.push_back(std::move(e));
  emitted_radius_ = next_radius_;
  ++next_radius_;
  return std::span<const Element>(sphere_);
}

std::vector<Element> enumerate_ball(GroupRef group, long long radius,
                                    EnumLimits limits) {
  BallEnumerator it(std::move(group), radius, limits);
  std::vector<Element> out;
  while (auto sphere = it.next_sphere()) {
    out.insert(out.end(), sphere->begin(), sphere->end());
  }
  return out;
}

}  // namespace relconj
