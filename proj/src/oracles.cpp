#include "relconj/oracles.hpp"

#include <algorithm>

namespace relconj {

namespace {

void check_factor_lists(const GroupRef& factor,
                        const std::vector<Element>& g_list,
                        const std::vector<Element>& f_list) {
  if (g_list.size() != f_list.size()) {
    fail(Errc::length_mismatch, "oracle lists must have equal length");
  }
  for (const auto& e : g_list) factor->check_mine(e);
  for (const auto& e : f_list) factor->check_mine(e);
}

bool conjugation_trivial(const Group& g) {
  if (g.kind() == Group::Kind::abelian) return true;
  return g.kind() == Group::Kind::free &&
         static_cast<const FreeGroup&>(g).rank() == 1;
}

}  // namespace

std::optional<Element> abelian_gcp(const GroupRef& factor,
                                   const std::vector<Element>& g_list,
                                   const std::vector<Element>& f_list) {
  if (!factor || !conjugation_trivial(*factor)) {
    fail(Errc::unsupported_backend,
         "abelian_gcp needs a conjugation-trivial factor");
  }
  check_factor_lists(factor, g_list, f_list);
  for (std::size_t i = 0; i < g_list.size(); ++i) {
    if (g_list[i] != f_list[i]) return std::nullopt;
  }
  return factor->identity();
}

std::optional<Element> finite_gcp(const GroupRef& factor,
                                  const std::vector<Element>& g_list,
                                  const std::vector<Element>& f_list) {
  if (!factor || factor->kind() != Group::Kind::finite) {
    fail(Errc::unsupported_backend, "finite_gcp needs a finite factor");
  }
  check_factor_lists(factor, g_list, f_list);
  const auto* finite = static_cast<const FiniteGroup*>(factor.get());
  for (int idx : finite->search_order()) {
    Element h = finite->element_at(idx);
    bool ok = true;
    for (std::size_t i = 0; i < g_list.size() && ok; ++i) {
      ok = factor->conjugate(g_list[i], h) == f_list[i];
    }
    if (ok) return h;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// ParabolicOracle

ParabolicOracle ParabolicOracle::for_factor(GroupRef factor) {
  if (!factor) fail(Errc::handle_mismatch, "null factor");
  switch (factor->kind()) {
    case Group::Kind::abelian:
      return ParabolicOracle(Kind::abelian_equality, std::move(factor));
    case Group::Kind::finite:
      return ParabolicOracle(Kind::finite_bruteforce, std::move(factor));
    case Group::Kind::free:
      if (static_cast<const FreeGroup*>(factor.get())->rank() == 1) {
        return ParabolicOracle(Kind::abelian_equality, std::move(factor));
      }
      fail(Errc::oracle_unavailable,
           "no GCP oracle for free factors of rank >= 2");
    case Group::Kind::free_product:
      break;
  }
  fail(Errc::oracle_unavailable, "no GCP oracle for this factor kind");
}

std::optional<Element> ParabolicOracle::solve_gcp(
    const std::vector<Element>& g_list,
    const std::vector<Element>& f_list) const {
  switch (kind_) {
    case Kind::abelian_equality: {
      check_factor_lists(factor_, g_list, f_list);
      for (std::size_t i = 0; i < g_list.size(); ++i) {
        if (g_list[i] != f_list[i]) return std::nullopt;
      }
      return factor_->identity();
    }
    case Kind::finite_bruteforce:
      return finite_gcp(factor_, g_list, f_list);
  }
  return std::nullopt;
}

long long ParabolicOracle::theta_bound(long long) const {
  switch (kind_) {
    case Kind::abelian_equality:
      return 0;
    case Kind::finite_bruteforce:
      return static_cast<const FiniteGroup*>(factor_.get())->diameter();
  }
  return 0;
}

ParabolicOracleSet ParabolicOracleSet::for_handle(const GroupRef& handle) {
  if (!handle) fail(Errc::handle_mismatch, "null handle");
  ParabolicOracleSet set;
  if (handle->kind() == Group::Kind::free) return set;
  if (handle->kind() != Group::Kind::free_product) {
    fail(Errc::unsupported_backend,
         "parabolic oracles need a free product or free ambient group");
  }
  const auto* product = static_cast<const FreeProductGroup*>(handle.get());
  for (int i = 0; i < product->factor_count(); ++i) {
    set.oracles_.push_back(ParabolicOracle::for_factor(product->factor(i)));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Independent word-enumeration search

std::optional<Element> bfs_conjugator_search(const ConjugacyInstance& inst,
                                             long long max_radius,
                                             std::uint64_t max_words) {
  if (max_radius < 0) fail(Errc::index_out_of_range, "negative radius");
  if (inst.a_list.empty() || inst.a_list.size() != inst.b_list.size()) {
    fail(Errc::length_mismatch, "instance lists must be nonempty and equal");
  }
  const Alphabet& ab = inst.handle->alphabet();
  const int n = ab.size();
  std::uint64_t words = 0;

  auto conjugates_all = [&](const Element& x) {
    for (std::size_t i = 0; i < inst.a_list.size(); ++i) {
      if (inst.handle->conjugate(inst.a_list[i], x) != inst.b_list[i]) {
        return false;
      }
    }
    return true;
  };

  for (long long d = 0; d <= max_radius; ++d) {
    std::vector<std::int32_t> digits(d, 0);
    for (;;) {
      if (++words > max_words) {
        fail(Errc::resource_limit, "word cap exceeded");
      }
      Element x = inst.handle->element_of(
          Word(inst.handle->alphabet_ref(), digits));
      if (conjugates_all(x)) return x;
      // next word of length d in lexicographic order
      int pos = static_cast<int>(d) - 1;
      while (pos >= 0 && digits[pos] == n - 1) {
        digits[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++digits[pos];
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Single-element conjugacy in free products

namespace {

bool factor_single_conjugate(const GroupRef& factor, const Element& a,
                             const Element& b) {
  switch (factor->kind()) {
    case Group::Kind::abelian:
      return a == b;
    case Group::Kind::finite: {
      const auto* finite = static_cast<const FiniteGroup*>(factor.get());
      for (int idx = 0; idx < finite->order(); ++idx) {
        if (factor->conjugate(a, finite->element_at(idx)) == b) return true;
      }
      return false;
    }
    case Group::Kind::free: {
      Word core_a = cyclic_reduce(a.free_word()).first;
      Word core_b = cyclic_reduce(b.free_word()).first;
      if (core_a.size() != core_b.size()) return false;
      const std::size_t k = core_a.size();
      if (k == 0) return true;
      auto la = core_a.letters();
      auto lb = core_b.letters();
      for (std::size_t r = 0; r < k; ++r) {
        bool match = true;
        for (std::size_t i = 0; i < k && match; ++i) {
          match = la[(i + r) % k] == lb[i];
        }
        if (match) return true;
      }
      return false;
    }
    case Group::Kind::free_product:
      break;
  }
  fail(Errc::unsupported_backend, "factor conjugacy");
}

// Conjugates off matching first/last factors until the syllable word is
// cyclically reduced (length <= 1 or ends in distinct factors).
std::vector<ProductSyllable> cyclically_reduce_syllables(
    const FreeProductGroup& product, std::vector<ProductSyllable> syl) {
  while (syl.size() >= 2 && syl.front().factor == syl.back().factor) {
    int fi = syl.front().factor;
    Element merged = product.factor(fi)->multiply(syl.back().element,
                                                  syl.front().element);
    syl.erase(syl.begin());
    syl.pop_back();
    if (!merged.is_identity()) {
      syl.push_back({fi, std::move(merged)});
    }
  }
  return syl;
}

}  // namespace

bool free_product_conjugacy_single(const Element& a, const Element& b) {
  const Group* g = a.group();
  if (g == nullptr || g->kind() != Group::Kind::free_product) {
    fail(Errc::unsupported_backend,
         "single-element criterion needs a free product");
  }
  if (b.group() != g) fail(Errc::handle_mismatch, "elements of different handles");
  const auto& product = static_cast<const FreeProductGroup&>(*g);

  auto ca = cyclically_reduce_syllables(product, a.product_syllables());
  auto cb = cyclically_reduce_syllables(product, b.product_syllables());
  if (ca.size() != cb.size()) return false;
  const std::size_t k = ca.size();
  if (k == 0) return true;
  if (k == 1) {
    if (ca[0].factor != cb[0].factor) return false;
    return factor_single_conjugate(product.factor(ca[0].factor),
                                   ca[0].element, cb[0].element);
  }
  for (std::size_t r = 0; r < k; ++r) {
    bool match = true;
    for (std::size_t i = 0; i < k && match; ++i) {
      match = ca[(i + r) % k] == cb[i];
    }
    if (match) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Calibration

namespace {

struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

}  // namespace

CalibrationReport calibrate_chi(const GroupRef& handle, long long k,
                                long long samples, std::uint64_t seed) {
  if (!handle || (handle->kind() != Group::Kind::free_product &&
                  handle->kind() != Group::Kind::free)) {
    fail(Errc::unsupported_backend,
         "calibration needs a free product or free handle");
  }
  if (k < 0) fail(Errc::index_out_of_range, "negative k");
  const Alphabet& ab = handle->alphabet();
  const int n = ab.size();

  CalibrationReport report;
  report.k = k;
  report.samples = samples;
  report.chi_lower_estimate = 0;
  report.witness_a = Word(handle->alphabet_ref(), {});
  report.witness_x = Word(handle->alphabet_ref(), {});

  auto random_word = [&](SplitMix64& rng, long long max_len) {
    long long len =
        max_len <= 0 ? 0
                     : static_cast<long long>(rng.next() %
                                              static_cast<std::uint64_t>(
                                                  max_len + 1));
    std::vector<std::int32_t> letters;
    letters.reserve(len);
    for (long long i = 0; i < len; ++i) {
      letters.push_back(static_cast<std::int32_t>(rng.next() % n));
    }
    return Word(handle->alphabet_ref(), std::move(letters));
  };

  // Estimates for smaller k' are valid lower bounds for chi(k) too (chi is
  // monotone); taking the running max keeps the report monotone in k.
  for (long long kp = 0; kp <= k; ++kp) {
    for (long long i = 0; i < samples; ++i) {
      SplitMix64 rng{seed + static_cast<std::uint64_t>(kp + 1) *
                                0xd1b54a32d192ed03ULL +
                     static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL};
      Word a_word = random_word(rng, kp);
      Word x_word = random_word(rng, 2 * kp + 4);
      Element a = handle->element_of(a_word);
      Element x = handle->element_of(x_word);
      Element b = handle->conjugate(a, x);
      if (handle->x_length(b) > kp) continue;
      RelativeWord rel = relative_normal_form(x);
      Element current = a;
      long long trace_max = handle->x_length(current);
      for (std::size_t j = 0; j < rel.length(); ++j) {
        current = handle->conjugate(current, rel.syllable_element(j));
        trace_max = std::max(trace_max, handle->x_length(current));
      }
      if (trace_max > report.chi_lower_estimate) {
        report.chi_lower_estimate = trace_max;
        report.witness_a = handle->canonical_word(a);
        report.witness_x = handle->canonical_word(x);
      }
    }
  }
  return report;
}

}  // namespace relconj
