#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "relconj/relative.hpp"

namespace relconj {

using BigNat = boost::multiprecision::cpp_int;

class ParabolicOracleSet;

// Two equal-length lists of elements with duplicates removed and mu (the max
// X-length across both lists) recomputed from the canonical forms.
struct ConjugacyInstance {
  GroupRef handle;
  std::vector<Element> a_list;
  std::vector<Element> b_list;
  long long mu = 0;
};

ConjugacyInstance make_instance(const GroupRef& handle,
                                const std::vector<Word>& a_words,
                                const std::vector<Word>& b_words);
ConjugacyInstance make_instance_elements(const GroupRef& handle,
                                         std::vector<Element> a_list,
                                         std::vector<Element> b_list);

// The search-radius constants the structural theorems depend on: chi(k) and
// eta(lambda, c, k) are treated as black-box inputs, theta(mu) bounds
// parabolic GCP witnesses. With monotone_extend, a lookup at a missing key
// falls back to the largest defined key below it.
class ConstantsProfile {
 public:
  using EtaKey = std::tuple<long long, long long, long long>;

  static ConstantsProfile from_maps(std::map<long long, long long> chi,
                                    std::map<EtaKey, long long> eta,
                                    std::map<long long, long long> theta,
                                    bool certified, bool monotone_extend);

  long long chi(long long k) const;
  long long eta(long long lambda, long long c, long long k) const;
  long long theta(long long mu) const;
  bool has_theta(long long mu) const;
  bool has_eta(long long lambda, long long c, long long k) const;
  bool certified() const noexcept { return certified_; }
  bool monotone_extend() const noexcept { return monotone_extend_; }

  const std::map<long long, long long>& chi_map() const { return chi_; }
  const std::map<EtaKey, long long>& eta_map() const { return eta_; }
  const std::map<long long, long long>& theta_map() const { return theta_; }

 private:
  std::map<long long, long long> chi_;
  std::map<EtaKey, long long> eta_;
  std::map<long long, long long> theta_;
  bool certified_ = false;
  bool monotone_extend_ = false;
};

// (|X|^chi(mu) + 1)^(|X|^mu + 1), exactly.
BigNat relative_length_bound(long long mu, long long alphabet_size,
                             const ConstantsProfile& profile);

// relative_length_bound(mu) * max(theta(mu), eta(1, 0, chi(mu))), exactly.
BigNat theorem4_bound(long long mu, long long alphabet_size,
                      const ConstantsProfile& profile);

// entries[j] = (a_i conjugated by the j-syllable prefix of x), j = 0..length.
struct TupleTrace {
  std::vector<std::vector<Element>> entries;
};

TupleTrace tuple_trace(const RelativeWord& x, const ConjugacyInstance& inst);

bool verify_conjugator(const ConjugacyInstance& inst, const Element& x);

// First repeated trace tuple (s minimal, then t minimal) yields the strictly
// shorter conjugator prefix(s) * prefix(t)^-1 * x; nullopt at a fixpoint.
std::optional<RelativeWord> pigeonhole_shorten(const RelativeWord& x,
                                               const ConjugacyInstance& inst);

struct ShorteningStep {
  std::size_t s = 0;
  std::size_t t = 0;
};

RelativeWord shorten_to_fixpoint(const RelativeWord& x,
                                 const ConjugacyInstance& inst,
                                 std::vector<ShorteningStep>* steps = nullptr);

// g_tuple/f_tuple flanking syllable `position`: g_i conjugated by the
// syllable element equals f_i.
std::pair<std::vector<Element>, std::vector<Element>> connectors(
    const RelativeWord& x, const ConjugacyInstance& inst,
    std::size_t position);

struct CompressionStep {
  std::size_t position = 0;           // position on the word it acted on
  int factor = kFreeLetter;
  bool case2 = false;                 // connector membership test passed
  bool replaced = false;
  bool deleted = false;
  Element witness;                    // factor element, when case2
  long long connector_mu = 0;
  long long declared_theta = -1;      // profile theta at connector_mu, if any
};

// Left-to-right pass over the evolving word: every syllable whose connectors
// all lie in its factor is handed to that factor's GCP oracle and replaced by
// the oracle witness (the identity witness deletes it). Output still
// conjugates the instance and is never relatively longer.
RelativeWord compress_parabolic_components(
    const RelativeWord& x, const ConjugacyInstance& inst,
    const ParabolicOracleSet& oracles, const ConstantsProfile& profile,
    std::vector<CompressionStep>* log = nullptr);

struct SearchStats {
  std::uint64_t elements_enumerated = 0;
  std::uint64_t candidates_checked = 0;
  double wall_time_s = 0.0;
  long long radius_reached = -1;
  bool resource_limited = false;
};

struct Decision {
  enum class Status { conjugate, not_conjugate, inconclusive };

  Status status = Status::inconclusive;
  Element witness;             // conjugate
  BigNat certified_radius;     // not_conjugate
  long long searched_radius = -1;  // inconclusive
  SearchStats stats;
};

struct SearchConfig {
  std::uint64_t max_elements = 10'000'000;
  long long max_radius = 16;
  int workers = 1;
  bool certified = false;                 // may exhaustion certify a negative
  bool allow_degenerate_profile = false;
};

// Enumerates the ball of the given radius in the deterministic order and
// returns the first verifying conjugator (the shortlex-least one of minimal
// X-length). Exhaustion yields NotConjugate only under config.certified.
Decision solve_bounded(const ConjugacyInstance& inst, const BigNat& radius,
                       const SearchConfig& config);

// Certified mode searches the full Theorem-4 radius; heuristic mode runs
// iterative deepening up to min(theorem-4 radius, config.max_radius).
Decision solve(const ConjugacyInstance& inst, const ConstantsProfile& profile,
               const SearchConfig& config);

// Iterative deepening (radii 1, 2, 4, ... up to config.max_radius) with no
// constants profile; never certifies a negative.
Decision solve_heuristic(const ConjugacyInstance& inst,
                         const SearchConfig& config);

}  // namespace relconj
