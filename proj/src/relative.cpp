#include "relconj/relative.hpp"

namespace relconj {

RelativeWord::RelativeWord(GroupRef handle, std::vector<Syllable> syllables)
    : handle_(std::move(handle)), syllables_(std::move(syllables)) {
  if (!handle_) fail(Errc::handle_mismatch, "relative word without handle");
}

Element RelativeWord::syllable_element(std::size_t p) const {
  if (p >= syllables_.size()) {
    fail(Errc::index_out_of_range, "syllable position");
  }
  const Syllable& s = syllables_[p];
  if (s.factor == kFreeLetter) {
    return handle_->letter(s.letter);
  }
  const auto* product = static_cast<const FreeProductGroup*>(handle_.get());
  return product->embed(s.factor, s.element);
}

Element RelativeWord::prefix(std::size_t j) const {
  if (j > syllables_.size()) {
    fail(Errc::index_out_of_range, "prefix index exceeds relative length");
  }
  Element acc = handle_->identity();
  for (std::size_t p = 0; p < j; ++p) {
    acc = handle_->multiply(acc, syllable_element(p));
  }
  return acc;
}

RelativeWord relative_normal_form(const Element& e) {
  const Group* g = e.group();
  if (g == nullptr) fail(Errc::handle_mismatch, "invalid element");
  if (g->kind() == Group::Kind::free) {
    std::vector<Syllable> syllables;
    for (auto l : e.free_word().letters()) {
      Syllable s;
      s.factor = kFreeLetter;
      s.letter = l;
      syllables.push_back(std::move(s));
    }
    return RelativeWord(g->shared_from_this(), std::move(syllables));
  }
  if (g->kind() != Group::Kind::free_product) {
    fail(Errc::unsupported_backend,
         std::string(g->kind_name()) + " groups have no relative structure");
  }
  std::vector<Syllable> syllables;
  for (const auto& ps : e.product_syllables()) {
    Syllable s;
    s.factor = ps.factor;
    s.element = ps.element;
    syllables.push_back(std::move(s));
  }
  return RelativeWord(g->shared_from_this(), std::move(syllables));
}

long long relative_length(const Element& e) {
  const Group* g = e.group();
  if (g == nullptr) fail(Errc::handle_mismatch, "invalid element");
  if (g->kind() == Group::Kind::free) {
    return static_cast<long long>(e.free_word().size());
  }
  if (g->kind() != Group::Kind::free_product) {
    fail(Errc::unsupported_backend,
         std::string(g->kind_name()) + " groups have no relative structure");
  }
  return static_cast<long long>(e.product_syllables().size());
}

Membership parabolic_membership(const Element& e) {
  const Group* g = e.group();
  if (g == nullptr) fail(Errc::handle_mismatch, "invalid element");
  if (g->kind() == Group::Kind::free) {
    return e.is_identity() ? Membership::all() : Membership::none();
  }
  if (g->kind() != Group::Kind::free_product) {
    fail(Errc::unsupported_backend,
         std::string(g->kind_name()) + " groups have no parabolic structure");
  }
  const auto& syllables = e.product_syllables();
  if (syllables.empty()) return Membership::all();
  if (syllables.size() == 1) return Membership::in_factor(syllables[0].factor);
  return Membership::none();
}

Element project_to_factor(const Element& e, int factor) {
  const Group* g = e.group();
  if (g == nullptr || g->kind() != Group::Kind::free_product) {
    fail(Errc::unsupported_backend, "projection needs a free product element");
  }
  const auto* product = static_cast<const FreeProductGroup*>(g);
  if (factor < 0 || factor >= product->factor_count()) {
    fail(Errc::index_out_of_range, "factor index");
  }
  const auto& syllables = e.product_syllables();
  if (syllables.empty()) return product->factor(factor)->identity();
  if (syllables.size() == 1 && syllables[0].factor == factor) {
    return syllables[0].element;
  }
  fail(Errc::factor_mismatch, "element is not a member of the factor");
}

RelativeWord splice(const RelativeWord& x, std::size_t position,
                    const Element& replacement) {
  if (position >= x.length()) fail(Errc::index_out_of_range, "splice position");
  const Syllable& target = x.syllables()[position];
  if (target.factor == kFreeLetter) {
    fail(Errc::factor_mismatch, "cannot splice a free letter");
  }
  const auto* product =
      static_cast<const FreeProductGroup*>(x.handle().get());
  if (replacement.group() != product->factor(target.factor).get()) {
    fail(Errc::factor_mismatch,
         "replacement is not an element of the syllable's factor");
  }
  Element left = x.prefix(position);
  Element right = x.handle()->identity();
  for (std::size_t p = position + 1; p < x.length(); ++p) {
    right = x.handle()->multiply(right, x.syllable_element(p));
  }
  Element spliced = x.handle()->multiply(
      x.handle()->multiply(left, product->embed(target.factor, replacement)),
      right);
  return relative_normal_form(spliced);
}

std::string factor_display_name(int factor) {
  std::string name;
  int f = factor;
  do {
    name.insert(name.begin(), static_cast<char>('A' + (f % 26)));
    f = f / 26 - 1;
  } while (f >= 0);
  return name;
}

std::string print_relative(const RelativeWord& x) {
  std::string out;
  for (std::size_t p = 0; p < x.length(); ++p) {
    const Syllable& s = x.syllables()[p];
    if (!out.empty()) out += ' ';
    if (s.factor == kFreeLetter) {
      out += x.handle()->alphabet().name(s.letter);
    } else {
      const auto* product =
          static_cast<const FreeProductGroup*>(x.handle().get());
      Word fw = product->factor(s.factor)->canonical_word(s.element);
      out += '(' + factor_display_name(s.factor) + ':';
      out += ' ' + print_word(fw) + ')';
    }
  }
  return out;
}

}  // namespace relconj
