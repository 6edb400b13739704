#include "relconj/gcp.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "relconj/oracles.hpp"

namespace relconj {

namespace {

void check_lists(const ConjugacyInstance& inst) {
  if (inst.a_list.empty() || inst.a_list.size() != inst.b_list.size()) {
    fail(Errc::length_mismatch, "instance lists must be nonempty and equal");
  }
}

}  // namespace

ConjugacyInstance make_instance_elements(const GroupRef& handle,
                                         std::vector<Element> a_list,
                                         std::vector<Element> b_list) {
  if (!handle) fail(Errc::handle_mismatch, "null handle");
  if (a_list.empty() || a_list.size() != b_list.size()) {
    fail(Errc::length_mismatch,
         "lists must be nonempty and of equal length");
  }
  for (const auto& e : a_list) handle->check_mine(e);
  for (const auto& e : b_list) handle->check_mine(e);

  ConjugacyInstance inst;
  inst.handle = handle;
  for (std::size_t i = 0; i < a_list.size(); ++i) {
    bool duplicate = false;
    for (std::size_t j = 0; j < inst.a_list.size(); ++j) {
      if (inst.a_list[j] == a_list[i]) {
        if (inst.b_list[j] != b_list[i]) {
          fail(Errc::inconsistent_duplicates,
               "equal a-entries with different b-entries cannot be conjugate");
        }
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      inst.a_list.push_back(std::move(a_list[i]));
      inst.b_list.push_back(std::move(b_list[i]));
    }
  }
  inst.mu = 0;
  for (const auto& e : inst.a_list) {
    inst.mu = std::max(inst.mu, handle->x_length(e));
  }
  for (const auto& e : inst.b_list) {
    inst.mu = std::max(inst.mu, handle->x_length(e));
  }
  return inst;
}

ConjugacyInstance make_instance(const GroupRef& handle,
                                const std::vector<Word>& a_words,
                                const std::vector<Word>& b_words) {
  if (!handle) fail(Errc::handle_mismatch, "null handle");
  if (a_words.empty() || a_words.size() != b_words.size()) {
    fail(Errc::length_mismatch,
         "lists must be nonempty and of equal length");
  }
  std::vector<Element> a_list, b_list;
  a_list.reserve(a_words.size());
  b_list.reserve(b_words.size());
  for (const auto& w : a_words) a_list.push_back(handle->element_of(w));
  for (const auto& w : b_words) b_list.push_back(handle->element_of(w));
  return make_instance_elements(handle, std::move(a_list), std::move(b_list));
}

// ---------------------------------------------------------------------------
// ConstantsProfile

ConstantsProfile ConstantsProfile::from_maps(
    std::map<long long, long long> chi, std::map<EtaKey, long long> eta,
    std::map<long long, long long> theta, bool certified,
    bool monotone_extend) {
  auto check_monotone = [](const std::map<long long, long long>& m,
                           const char* name) {
    long long prev = -1;
    for (const auto& [k, v] : m) {
      if (k < 0 || v < 0) {
        fail(Errc::bad_file, std::string(name) + " entries must be nonnegative");
      }
      if (v < prev) {
        fail(Errc::bad_file,
             std::string(name) + " must be monotone nondecreasing");
      }
      prev = v;
    }
  };
  check_monotone(chi, "chi");
  check_monotone(theta, "theta");
  for (const auto& [k, v] : eta) {
    if (v < 0) fail(Errc::bad_file, "eta entries must be nonnegative");
    (void)k;
  }
  ConstantsProfile p;
  p.chi_ = std::move(chi);
  p.eta_ = std::move(eta);
  p.theta_ = std::move(theta);
  p.certified_ = certified;
  p.monotone_extend_ = monotone_extend;
  return p;
}

namespace {

std::optional<long long> lookup_monotone(
    const std::map<long long, long long>& m, long long key,
    bool monotone_extend) {
  auto it = m.find(key);
  if (it != m.end()) return it->second;
  if (!monotone_extend) return std::nullopt;
  auto ub = m.upper_bound(key);
  if (ub == m.begin()) return std::nullopt;
  return std::prev(ub)->second;
}

}  // namespace

long long ConstantsProfile::chi(long long k) const {
  if (auto v = lookup_monotone(chi_, k, monotone_extend_)) return *v;
  fail(Errc::missing_constant, "chi undefined at " + std::to_string(k));
}

long long ConstantsProfile::theta(long long mu) const {
  if (auto v = lookup_monotone(theta_, mu, monotone_extend_)) return *v;
  fail(Errc::missing_constant, "theta undefined at " + std::to_string(mu));
}

bool ConstantsProfile::has_theta(long long mu) const {
  return lookup_monotone(theta_, mu, monotone_extend_).has_value();
}

long long ConstantsProfile::eta(long long lambda, long long c,
                                long long k) const {
  auto it = eta_.find({lambda, c, k});
  if (it != eta_.end()) return it->second;
  if (monotone_extend_) {
    // Fall back on the largest defined k' <= k with the same (lambda, c).
    auto ub = eta_.upper_bound({lambda, c, k});
    if (ub != eta_.begin()) {
      auto prev = std::prev(ub);
      const auto& [pl, pc, pk] = prev->first;
      if (pl == lambda && pc == c && pk <= k) return prev->second;
    }
  }
  fail(Errc::missing_constant,
       "eta undefined at (" + std::to_string(lambda) + "," +
           std::to_string(c) + "," + std::to_string(k) + ")");
}

bool ConstantsProfile::has_eta(long long lambda, long long c,
                               long long k) const {
  try {
    eta(lambda, c, k);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Bounds

BigNat relative_length_bound(long long mu, long long alphabet_size,
                             const ConstantsProfile& profile) {
  if (mu < 0 || alphabet_size < 1) {
    fail(Errc::index_out_of_range, "bad bound arguments");
  }
  long long chi = profile.chi(mu);
  if (chi > 100'000 || mu > 100'000) {
    fail(Errc::resource_limit,
         "bound exponent too large to materialize exactly");
  }
  BigNat x(alphabet_size);
  BigNat inner_exp =
      boost::multiprecision::pow(x, static_cast<unsigned>(mu)) + 1;
  if (inner_exp > 100'000) {
    fail(Errc::resource_limit,
         "bound exponent too large to materialize exactly");
  }
  BigNat base =
      boost::multiprecision::pow(x, static_cast<unsigned>(chi)) + 1;
  return boost::multiprecision::pow(base,
                                    inner_exp.convert_to<unsigned>());
}

BigNat theorem4_bound(long long mu, long long alphabet_size,
                      const ConstantsProfile& profile) {
  long long chi = profile.chi(mu);
  long long theta = profile.theta(mu);
  long long eta = profile.eta(1, 0, chi);
  BigNat multiplier = std::max(theta, eta);
  return relative_length_bound(mu, alphabet_size, profile) * multiplier;
}

// ---------------------------------------------------------------------------
// Traces and shortening

TupleTrace tuple_trace(const RelativeWord& x, const ConjugacyInstance& inst) {
  check_lists(inst);
  if (x.handle().get() != inst.handle.get()) {
    fail(Errc::handle_mismatch, "relative word over a different handle");
  }
  TupleTrace trace;
  trace.entries.reserve(x.length() + 1);
  trace.entries.push_back(inst.a_list);
  for (std::size_t j = 0; j < x.length(); ++j) {
    Element step = x.syllable_element(j);
    std::vector<Element> entry;
    entry.reserve(inst.a_list.size());
    for (const auto& prev : trace.entries.back()) {
      entry.push_back(inst.handle->conjugate(prev, step));
    }
    trace.entries.push_back(std::move(entry));
  }
  return trace;
}

bool verify_conjugator(const ConjugacyInstance& inst, const Element& x) {
  check_lists(inst);
  inst.handle->check_mine(x);
  for (std::size_t i = 0; i < inst.a_list.size(); ++i) {
    if (inst.handle->conjugate(inst.a_list[i], x) != inst.b_list[i]) {
      return false;
    }
  }
  return true;
}

std::optional<RelativeWord> pigeonhole_shorten(const RelativeWord& x,
                                               const ConjugacyInstance& inst) {
  if (!verify_conjugator(inst, x.evaluate())) {
    fail(Errc::not_a_conjugator, "pigeonhole_shorten needs a conjugator");
  }
  TupleTrace trace = tuple_trace(x, inst);
  const std::size_t entries = trace.entries.size();
  for (std::size_t s = 0; s + 1 < entries; ++s) {
    for (std::size_t t = s + 1; t < entries; ++t) {
      if (trace.entries[s] != trace.entries[t]) continue;
      Element shortened = inst.handle->multiply(
          inst.handle->multiply(x.prefix(s),
                                inst.handle->inverse(x.prefix(t))),
          x.evaluate());
      RelativeWord result = relative_normal_form(shortened);
      if (result.length() >= x.length()) {
        fail(Errc::not_a_conjugator,
             "internal error: pigeonhole shortening did not shorten");
      }
      return result;
    }
  }
  return std::nullopt;
}

RelativeWord shorten_to_fixpoint(const RelativeWord& x,
                                 const ConjugacyInstance& inst,
                                 std::vector<ShorteningStep>* steps) {
  RelativeWord current = x;
  if (!verify_conjugator(inst, current.evaluate())) {
    fail(Errc::not_a_conjugator, "shorten_to_fixpoint needs a conjugator");
  }
  for (;;) {
    if (steps != nullptr) {
      TupleTrace trace = tuple_trace(current, inst);
      bool found = false;
      const std::size_t entries = trace.entries.size();
      for (std::size_t s = 0; s + 1 < entries && !found; ++s) {
        for (std::size_t t = s + 1; t < entries && !found; ++t) {
          if (trace.entries[s] == trace.entries[t]) {
            steps->push_back({s, t});
            found = true;
          }
        }
      }
    }
    auto next = pigeonhole_shorten(current, inst);
    if (!next) return current;
    current = std::move(*next);
  }
}

std::pair<std::vector<Element>, std::vector<Element>> connectors(
    const RelativeWord& x, const ConjugacyInstance& inst,
    std::size_t position) {
  check_lists(inst);
  if (position >= x.length()) {
    fail(Errc::index_out_of_range, "connector position");
  }
  Element before = x.prefix(position);
  Element after = inst.handle->multiply(before, x.syllable_element(position));
  std::vector<Element> g_tuple, f_tuple;
  g_tuple.reserve(inst.a_list.size());
  f_tuple.reserve(inst.a_list.size());
  for (const auto& a : inst.a_list) {
    g_tuple.push_back(inst.handle->conjugate(a, before));
    f_tuple.push_back(inst.handle->conjugate(a, after));
  }
  return {std::move(g_tuple), std::move(f_tuple)};
}

RelativeWord compress_parabolic_components(
    const RelativeWord& x, const ConjugacyInstance& inst,
    const ParabolicOracleSet& oracles, const ConstantsProfile& profile,
    std::vector<CompressionStep>* log) {
  if (!verify_conjugator(inst, x.evaluate())) {
    fail(Errc::not_a_conjugator, "compress needs a conjugator");
  }
  RelativeWord current = x;
  std::size_t p = 0;
  while (p < current.length()) {
    const Syllable& syllable = current.syllables()[p];
    CompressionStep step;
    step.position = p;
    step.factor = syllable.factor;
    if (syllable.factor == kFreeLetter) {
      if (log != nullptr) log->push_back(step);
      ++p;
      continue;
    }
    auto [g_tuple, f_tuple] = connectors(current, inst, p);
    bool member = true;
    for (std::size_t i = 0; i < g_tuple.size() && member; ++i) {
      member = parabolic_membership(g_tuple[i]).contains(syllable.factor) &&
               parabolic_membership(f_tuple[i]).contains(syllable.factor);
    }
    if (!member) {
      if (log != nullptr) log->push_back(step);
      ++p;
      continue;
    }
    step.case2 = true;
    std::vector<Element> g_factor, f_factor;
    long long connector_mu = 0;
    for (std::size_t i = 0; i < g_tuple.size(); ++i) {
      g_factor.push_back(project_to_factor(g_tuple[i], syllable.factor));
      f_factor.push_back(project_to_factor(f_tuple[i], syllable.factor));
      connector_mu = std::max(connector_mu,
                              inst.handle->x_length(g_tuple[i]));
      connector_mu = std::max(connector_mu,
                              inst.handle->x_length(f_tuple[i]));
    }
    step.connector_mu = connector_mu;
    if (profile.has_theta(connector_mu)) {
      step.declared_theta = profile.theta(connector_mu);
    }
    const ParabolicOracle& oracle = oracles.factor_oracle(syllable.factor);
    auto witness = oracle.solve_gcp(g_factor, f_factor);
    if (!witness) {
      fail(Errc::oracle_failure,
           "parabolic oracle rejected connectors of a genuine conjugator");
    }
    long long witness_len = oracle.factor()->x_length(*witness);
    if (witness_len > oracle.theta_bound(connector_mu)) {
      fail(Errc::oracle_failure,
           "parabolic oracle witness exceeds its theta bound");
    }
    step.witness = *witness;
    step.replaced = true;
    step.deleted = witness->is_identity();
    if (log != nullptr) log->push_back(step);
    std::size_t previous_length = current.length();
    current = splice(current, p, *witness);
    if (current.length() > previous_length) {
      fail(Errc::oracle_failure, "internal error: splice grew the word");
    }
    if (current.length() == previous_length) {
      ++p;  // syllable replaced in place
    }
    // On deletion the word shrank; re-examine the same position.
  }
  if (!verify_conjugator(inst, current.evaluate())) {
    fail(Errc::oracle_failure,
         "internal error: compression broke the conjugation");
  }
  if (current.length() > x.length()) {
    fail(Errc::oracle_failure,
         "internal error: compression grew the relative length");
  }
  return current;
}

// ---------------------------------------------------------------------------
// Bounded search

namespace {

// Index of the first verifying candidate in the sphere, or npos.
std::size_t find_witness(const ConjugacyInstance& inst,
                         std::span<const Element> sphere, int workers,
                         std::uint64_t& checked) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  if (workers > 1 && sphere.size() >= 256) {
    const std::size_t stride = (sphere.size() + workers - 1) / workers;
    std::vector<std::size_t> local(workers, npos);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        const std::size_t lo = w * stride;
        const std::size_t hi = std::min(sphere.size(), lo + stride);
        for (std::size_t i = lo; i < hi; ++i) {
          if (verify_conjugator(inst, sphere[i])) {
            local[w] = i;
            return;
          }
        }
      });
    }
    for (auto& t : threads) t.join();
    checked += sphere.size();
    std::size_t best = npos;
    for (auto i : local) best = std::min(best, i);
    return best;
  }
  for (std::size_t i = 0; i < sphere.size(); ++i) {
    ++checked;
    if (verify_conjugator(inst, sphere[i])) return i;
  }
  return npos;
}

}  // namespace

Decision solve_bounded(const ConjugacyInstance& inst, const BigNat& radius,
                       const SearchConfig& config) {
  check_lists(inst);
  if (radius < 0) fail(Errc::index_out_of_range, "negative radius");
  const auto start = std::chrono::steady_clock::now();
  Decision decision;
  auto finish = [&](Decision d) {
    d.stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return d;
  };

  const long long effective_radius =
      radius > BigNat(std::numeric_limits<long long>::max())
          ? std::numeric_limits<long long>::max()
          : radius.convert_to<long long>();
  EnumLimits limits{config.max_elements, config.workers};
  BallEnumerator balls(inst.handle, effective_radius, limits);
  bool exhausted_ball = false;
  try {
    while (auto sphere = balls.next_sphere()) {
      decision.stats.elements_enumerated = balls.elements_seen();
      decision.stats.radius_reached = balls.radius_reached();
      std::size_t hit = find_witness(inst, *sphere, config.workers,
                                     decision.stats.candidates_checked);
      if (hit != static_cast<std::size_t>(-1)) {
        decision.status = Decision::Status::conjugate;
        decision.witness = (*sphere)[hit];
        if (!verify_conjugator(inst, decision.witness)) {
          fail(Errc::not_a_conjugator, "internal error: witness rejected");
        }
        return finish(std::move(decision));
      }
    }
    exhausted_ball = true;
  } catch (const Error& e) {
    if (e.code() != Errc::resource_limit) throw;
    decision.stats.elements_enumerated = balls.elements_seen();
    decision.stats.radius_reached = balls.radius_reached();
    decision.stats.resource_limited = true;
    decision.status = Decision::Status::inconclusive;
    decision.searched_radius = balls.radius_reached();
    return finish(std::move(decision));
  }

  decision.stats.elements_enumerated = balls.elements_seen();
  decision.stats.radius_reached =
      balls.exhausted() ? balls.radius_reached() : effective_radius;
  if (exhausted_ball && config.certified) {
    decision.status = Decision::Status::not_conjugate;
    decision.certified_radius = radius;
  } else {
    decision.status = Decision::Status::inconclusive;
    decision.searched_radius = decision.stats.radius_reached;
  }
  return finish(std::move(decision));
}

namespace {

Decision iterative_deepening(const ConjugacyInstance& inst,
                             const SearchConfig& config, const BigNat& cap) {
  Decision last;
  SearchStats totals;
  BigNat r = std::min(BigNat(1), cap);
  for (;;) {
    SearchConfig round = config;
    round.certified = false;
    last = solve_bounded(inst, r, round);
    totals.elements_enumerated += last.stats.elements_enumerated;
    totals.candidates_checked += last.stats.candidates_checked;
    totals.wall_time_s += last.stats.wall_time_s;
    totals.radius_reached = last.stats.radius_reached;
    totals.resource_limited |= last.stats.resource_limited;
    if (last.status == Decision::Status::conjugate) break;
    if (last.stats.resource_limited) break;  // deeper rounds hit it too
    if (r >= cap) break;
    r = std::min(BigNat(r * 2), cap);
  }
  last.stats = totals;
  if (last.status != Decision::Status::conjugate) {
    last.status = Decision::Status::inconclusive;
    last.searched_radius = totals.radius_reached;
  }
  return last;
}

}  // namespace

Decision solve(const ConjugacyInstance& inst, const ConstantsProfile& profile,
               const SearchConfig& config) {
  check_lists(inst);
  const long long alphabet_size = inst.handle->alphabet().size();
  BigNat big_radius = theorem4_bound(inst.mu, alphabet_size, profile);
  if (big_radius == 0 && !config.allow_degenerate_profile) {
    fail(Errc::degenerate_profile,
         "theorem-4 radius is zero; pass allow_degenerate to force");
  }
  if (config.certified) {
    if (!profile.certified()) {
      fail(Errc::missing_constant,
           "certified mode requires a certified constants profile");
    }
    return solve_bounded(inst, big_radius, config);
  }
  return iterative_deepening(inst, config,
                             std::min(big_radius, BigNat(config.max_radius)));
}

Decision solve_heuristic(const ConjugacyInstance& inst,
                         const SearchConfig& config) {
  check_lists(inst);
  return iterative_deepening(inst, config, BigNat(config.max_radius));
}

}  // namespace relconj
