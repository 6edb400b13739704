#pragma once

#include <optional>
#include <vector>

#include "relconj/gcp.hpp"

namespace relconj {

// Solves the GCP inside one parabolic factor, with a hard witness-length
// bound: theta_bound(mu') caps the X-length of any returned witness.
class ParabolicOracle {
 public:
  enum class Kind { abelian_equality, finite_bruteforce };

  static ParabolicOracle for_factor(GroupRef factor);

  Kind kind() const noexcept { return kind_; }
  const GroupRef& factor() const noexcept { return factor_; }

  std::optional<Element> solve_gcp(const std::vector<Element>& g_list,
                                   const std::vector<Element>& f_list) const;
  long long theta_bound(long long mu_prime) const;

 private:
  ParabolicOracle(Kind kind, GroupRef factor)
      : kind_(kind), factor_(std::move(factor)) {}

  Kind kind_;
  GroupRef factor_;
};

class ParabolicOracleSet {
 public:
  // One oracle per parabolic factor of a free product; empty for a free
  // ambient group. Throws OracleUnavailable for factors with no solver.
  static ParabolicOracleSet for_handle(const GroupRef& handle);

  std::size_t size() const noexcept { return oracles_.size(); }
  const ParabolicOracle& factor_oracle(int i) const { return oracles_.at(i); }

 private:
  std::vector<ParabolicOracle> oracles_;
};

// Conjugation is trivial in abelian groups: lists are conjugate iff equal,
// witnessed by the identity.
std::optional<Element> abelian_gcp(const GroupRef& factor,
                                   const std::vector<Element>& g_list,
                                   const std::vector<Element>& f_list);

// Brute force over all elements in BFS-distance-then-shortlex order.
std::optional<Element> finite_gcp(const GroupRef& factor,
                                  const std::vector<Element>& g_list,
                                  const std::vector<Element>& f_list);

// Independent ground-truth search: enumerates raw words over the alphabet in
// shortlex order (no Cayley BFS, no shared enumeration code) and returns the
// element of the first word that conjugates the instance.
std::optional<Element> bfs_conjugator_search(
    const ConjugacyInstance& inst, long long max_radius,
    std::uint64_t max_words = 100'000'000);

// Classical normal-form criterion for single elements of a free product:
// cyclically reduce at the syllable level, then compare factor-conjugacy
// (length <= 1) or cyclic permutations of the syllable sequences.
bool free_product_conjugacy_single(const Element& a, const Element& b);

struct CalibrationReport {
  long long k = 0;
  long long samples = 0;
  long long chi_lower_estimate = 0;
  Word witness_a;
  Word witness_x;
};

// Samples random (a, x) pairs with |a|_X <= k, keeps those with |a^x|_X <= k,
// and records the largest X-length seen along the trace of a through the
// prefixes of x. A lower estimate for chi(k); deterministic in the seed.
CalibrationReport calibrate_chi(const GroupRef& handle, long long k,
                                long long samples, std::uint64_t seed);

}  // namespace relconj
