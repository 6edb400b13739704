// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failing criteria. Expected runtime is a couple of minutes on a laptop.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "relconj/cli.hpp"
#include "relconj/io.hpp"
#include "relconj/oracles.hpp"
#include "support/testutil.hpp"

using namespace relconj;
using namespace relconj::testutil;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail,
            double seconds) {
  std::printf("%s — %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

const fs::path& workdir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "relconj_acceptance";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  fs::path p = workdir() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

struct RunResult {
  int exit_code = -1;
  json report;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("relconj");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  RunResult r;
  r.exit_code = relconj::cli::dispatch(static_cast<int>(argv.size()),
                                       argv.data(), out, err);
  std::string text = out.str();
  if (!text.empty() && text.front() == '{') r.report = json::parse(text);
  return r;
}

std::string instance_json(const GroupRef& g, const std::vector<Element>& a,
                          const std::vector<Element>& b) {
  json j;
  j["a"] = json::array();
  j["b"] = json::array();
  for (const auto& e : a) j["a"].push_back(print_word(g->canonical_word(e)));
  for (const auto& e : b) j["b"].push_back(print_word(g->canonical_word(e)));
  return j.dump();
}

const char* kZ2Z3Json = R"({
  "kind":"free_product",
  "factors":[
    {"kind":"finite","generators":["s"],"elements":["e","s"],
     "table":[[0,1],[1,0]],"generator_map":{"s":1}},
    {"kind":"finite","generators":["t"],"elements":["e","t","t2"],
     "table":[[0,1,2],[1,2,0],[2,0,1]],"generator_map":{"t":1}}
  ]})";

// Every m in {1,2} list over a ball, a-side deduplicated and
// consistency-filtered.
struct SweepHit {
  long long mu = 0;
  long long witness_relative_length = 0;
};

// Criterion 1 collects the minimal witnesses it saw so criterion 3 can check
// them against the calibrated Theorem-2 bound.
std::vector<SweepHit> sweep_hits;

bool criterion_oracle_equivalence() {
  Timer timer;
  auto g = make_z2z3();
  std::string group_file = write_file("z2z3.json", kZ2Z3Json);
  auto ball3 = enumerate_ball(g, 3);

  std::vector<std::vector<Element>> a_lists, b_lists;
  for (const auto& a1 : ball3) {
    a_lists.push_back({a1});
    b_lists.push_back({a1});
  }
  for (const auto& a1 : ball3) {
    for (const auto& a2 : ball3) {
      if (a1 == a2) continue;  // deduplicated a-side
      a_lists.push_back({a1, a2});
    }
  }
  for (const auto& b1 : ball3) {
    for (const auto& b2 : ball3) {
      b_lists.push_back({b1, b2});
    }
  }

  std::size_t checked = 0, positives = 0, mismatches = 0;
  for (const auto& a_list : a_lists) {
    for (const auto& b_list : b_lists) {
      if (a_list.size() != b_list.size()) continue;
      ++checked;
      ConjugacyInstance inst;
      inst.handle = g;
      inst.a_list = a_list;
      inst.b_list = b_list;
      inst.mu = 0;
      for (const auto& e : a_list) {
        inst.mu = std::max(inst.mu, g->x_length(e));
      }
      for (const auto& e : b_list) {
        inst.mu = std::max(inst.mu, g->x_length(e));
      }
      auto oracle_witness = bfs_conjugator_search(inst, 4);
      if (!oracle_witness) continue;
      ++positives;

      std::string inst_file = write_file(
          "sweep_instance.json", instance_json(g, a_list, b_list));
      auto solved = run_cli({"solve", group_file, inst_file, "--max-radius",
                             "4"});
      bool ok = solved.exit_code == 0 &&
                solved.report["decision"]["status"] == "conjugate";
      if (ok) {
        long long got = solved.report["decision"]["witness_x_length"];
        ok = got == g->x_length(*oracle_witness);
      }
      if (ok) {
        std::string witness = solved.report["decision"]["witness"];
        auto verified = run_cli({"verify", group_file, inst_file, witness});
        ok = verified.exit_code == 0;
        if (ok) {
          Element w = g->element_of(
              parse_word(witness, g->alphabet_ref()));
          sweep_hits.push_back({inst.mu, relative_length(w)});
        }
      }
      if (!ok) ++mismatches;
    }
  }

  std::ostringstream detail;
  detail << checked << " instances, " << positives << " conjugate, "
         << mismatches << " mismatches";
  report(mismatches == 0 && positives > 0, "oracle equivalence",
         detail.str(), timer.seconds());
  return mismatches == 0;
}

bool criterion_shortening_suite() {
  Timer timer;
  std::size_t fails = 0, trials_run = 0;
  SplitMix64 rng{424242};
  for (const auto& g : {make_zp_zq(), make_z2z3(), make_zu_z2()}) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::size_t m = 1 + rng.below(3);
      std::vector<Element> a_list, b_list;
      for (std::size_t i = 0; i < m; ++i) {
        a_list.push_back(
            g->element_of(random_word(rng, g->alphabet_ref(), 3)));
      }
      Element x = g->element_of(random_word(rng, g->alphabet_ref(), 6));
      for (const auto& a : a_list) b_list.push_back(g->conjugate(a, x));
      auto inst = make_instance_elements(g, a_list, b_list);
      ++trials_run;

      RelativeWord rel = relative_normal_form(x);
      RelativeWord fix = shorten_to_fixpoint(rel, inst);
      bool ok = verify_conjugator(inst, fix.evaluate()) &&
                fix.length() <= rel.length();
      TupleTrace trace = tuple_trace(fix, inst);
      for (std::size_t i = 0; i < trace.entries.size() && ok; ++i) {
        for (std::size_t j = 0; j < i && ok; ++j) {
          ok = trace.entries[i] != trace.entries[j];
        }
      }
      if (!ok) ++fails;
    }
  }
  std::ostringstream detail;
  detail << trials_run << " trials across 3 backends, " << fails
         << " failures";
  report(fails == 0, "shortening suite", detail.str(), timer.seconds());
  return fails == 0;
}

bool criterion_theorem2_bound() {
  Timer timer;
  auto g = make_z2z3();
  std::map<long long, long long> chi;
  for (long long k = 0; k <= 3; ++k) {
    chi[k] = calibrate_chi(g, k, 10'000, 20250810).chi_lower_estimate;
  }

  std::size_t raised = 0, violations = 0;
  for (int round = 0; round < 8; ++round) {
    violations = 0;
    auto profile = ConstantsProfile::from_maps(chi, {}, {}, false, true);
    for (const auto& hit : sweep_hits) {
      BigNat bound = relative_length_bound(hit.mu, 3, profile);
      if (BigNat(hit.witness_relative_length) > bound) {
        ++violations;
        chi[hit.mu] += 1;  // calibration deficiency: raise and re-check
        for (long long k = hit.mu + 1; k <= 3; ++k) {
          chi[k] = std::max(chi[k], chi[hit.mu]);
        }
        ++raised;
      }
    }
    if (violations == 0) break;
  }
  std::ostringstream detail;
  detail << sweep_hits.size() << " minimal witnesses, chi estimates {"
         << chi[0] << "," << chi[1] << "," << chi[2] << "," << chi[3]
         << "}, " << raised << " raises";
  report(violations == 0 && !sweep_hits.empty(),
         "theorem-2 bound consistency", detail.str(), timer.seconds());
  return violations == 0;
}

bool criterion_remark5() {
  Timer timer;
  std::size_t instances = 0, case2_positions = 0, fails = 0;
  for (const auto& g : {make_zu_zv(), make_zu_z2()}) {
    auto oracles = ParabolicOracleSet::for_handle(g);
    auto profile = ConstantsProfile::from_maps({{0, 0}}, {}, {}, false, true);
    auto ball2 = enumerate_ball(g, 2);
    auto ball4 = enumerate_ball(g, 4);

    std::vector<std::vector<Element>> a_lists;
    for (const auto& a1 : ball2) a_lists.push_back({a1});
    for (const auto& a1 : ball2) {
      for (const auto& a2 : ball2) {
        if (a1 == a2) continue;
        a_lists.push_back({a1, a2});
      }
    }

    for (const auto& a_list : a_lists) {
      // First conjugator in ball order per distinct b-list: the
      // shortlex-least minimal witness.
      std::map<std::string, std::pair<std::vector<Element>, Element>> found;
      for (const auto& x : ball4) {
        std::vector<Element> b_list;
        long long mu = 0;
        for (const auto& a : a_list) {
          mu = std::max(mu, g->x_length(a));
          b_list.push_back(g->conjugate(a, x));
        }
        bool small = true;
        for (const auto& b : b_list) {
          mu = std::max(mu, g->x_length(b));
          small = small && g->x_length(b) <= 2;
        }
        if (!small || mu > 2) continue;
        std::string key;
        for (const auto& b : b_list) {
          key += print_word(g->canonical_word(b));
          key += '|';
        }
        if (!found.contains(key)) found.emplace(key, std::make_pair(b_list, x));
      }

      for (const auto& [key, pair] : found) {
        const auto& [b_list, witness] = pair;
        ++instances;
        ConjugacyInstance inst;
        inst.handle = g;
        inst.a_list = a_list;
        inst.b_list = b_list;
        for (const auto& e : a_list) {
          inst.mu = std::max(inst.mu, g->x_length(e));
        }
        for (const auto& e : b_list) {
          inst.mu = std::max(inst.mu, g->x_length(e));
        }

        RelativeWord rel = relative_normal_form(witness);
        bool ok = true;
        for (std::size_t p = 0; p < rel.length(); ++p) {
          if (rel.syllables()[p].factor == kFreeLetter) continue;
          auto [g_tuple, f_tuple] = connectors(rel, inst, p);
          bool member = true;
          for (std::size_t i = 0; i < g_tuple.size() && member; ++i) {
            member =
                parabolic_membership(g_tuple[i])
                    .contains(rel.syllables()[p].factor) &&
                parabolic_membership(f_tuple[i])
                    .contains(rel.syllables()[p].factor);
          }
          if (!member) continue;
          ++case2_positions;
          ok = ok && g_tuple == f_tuple;
        }
        std::vector<CompressionStep> log;
        RelativeWord compressed =
            compress_parabolic_components(rel, inst, oracles, profile, &log);
        ok = ok && verify_conjugator(inst, compressed.evaluate());
        for (const auto& step : log) {
          if (step.case2) ok = ok && step.witness.is_identity() && step.deleted;
        }
        if (!ok) ++fails;
      }
    }
  }
  std::ostringstream detail;
  detail << instances << " minimal-witness instances, " << case2_positions
         << " case-2 positions, " << fails << " failures";
  report(fails == 0 && instances > 0, "remark-5 property", detail.str(),
         timer.seconds());
  return fails == 0;
}

bool criterion_compression_soundness() {
  Timer timer;
  std::size_t fails = 0, trials_run = 0;
  SplitMix64 rng{515151};
  for (const auto& g : {make_zp_zq(), make_z2z3(), make_zu_z2()}) {
    auto oracles = ParabolicOracleSet::for_handle(g);
    auto profile = ConstantsProfile::from_maps({{0, 0}}, {}, {}, false, true);
    for (int trial = 0; trial < 500; ++trial) {
      std::size_t m = 1 + rng.below(3);
      std::vector<Element> a_list, b_list;
      for (std::size_t i = 0; i < m; ++i) {
        a_list.push_back(
            g->element_of(random_word(rng, g->alphabet_ref(), 3)));
      }
      Element x = g->element_of(random_word(rng, g->alphabet_ref(), 6));
      for (const auto& a : a_list) b_list.push_back(g->conjugate(a, x));
      auto inst = make_instance_elements(g, a_list, b_list);
      ++trials_run;

      RelativeWord rel = relative_normal_form(x);
      std::vector<CompressionStep> log;
      RelativeWord out =
          compress_parabolic_components(rel, inst, oracles, profile, &log);
      bool ok = verify_conjugator(inst, out.evaluate()) &&
                out.length() <= rel.length();
      for (const auto& step : log) {
        if (!step.case2) continue;
        const auto& oracle = oracles.factor_oracle(step.factor);
        ok = ok && oracle.factor()->x_length(step.witness) <=
                       oracle.theta_bound(step.connector_mu);
      }
      if (!ok) ++fails;
    }
  }
  std::ostringstream detail;
  detail << trials_run << " trials across 3 backends, " << fails
         << " failures";
  report(fails == 0, "compression soundness", detail.str(), timer.seconds());
  return fails == 0;
}

bool criterion_bound_arithmetic() {
  Timer timer;
  std::size_t fails = 0;

  auto profile_with = [](long long chi, long long theta, long long eta) {
    std::map<long long, long long> chis, thetas;
    std::map<ConstantsProfile::EtaKey, long long> etas;
    for (long long k = 0; k <= 6; ++k) chis[k] = chi;
    for (long long k = 0; k <= 6; ++k) thetas[k] = theta;
    etas[{1, 0, chi}] = eta;
    return ConstantsProfile::from_maps(chis, etas, thetas, false, true);
  };

  // Pinned cases.
  if (relative_length_bound(1, 2, profile_with(1, 0, 0)) != 27) ++fails;
  if (relative_length_bound(0, 2, profile_with(0, 0, 0)) != 4) ++fails;
  if (relative_length_bound(1, 3, profile_with(2, 0, 0)) != 10000) ++fails;
  if (theorem4_bound(1, 2, profile_with(1, 2, 3)) != 81) ++fails;

  SplitMix64 rng{616161};
  for (int trial = 0; trial < 50; ++trial) {
    long long mu = static_cast<long long>(rng.below(5));
    long long size = 1 + static_cast<long long>(rng.below(6));
    long long chi = static_cast<long long>(rng.below(7));
    long long theta = static_cast<long long>(rng.below(5));
    long long eta = static_cast<long long>(rng.below(5));
    auto profile = profile_with(chi, theta, eta);

    std::string expected_l = decimal_bound(size, chi, mu);
    if (relative_length_bound(mu, size, profile).str() != expected_l) ++fails;

    Decimal multiplier = Decimal::from(
        static_cast<unsigned long long>(std::max(theta, eta)));
    Decimal l;
    {
      Decimal x = Decimal::from(size);
      Decimal base = Decimal::pow(x, chi).plus_one();
      unsigned long long exp = Decimal::pow(x, mu).plus_one().to_ull();
      l = Decimal::pow(base, exp);
    }
    std::string expected_r = l.times(multiplier).str();
    if (theorem4_bound(mu, size, profile).str() != expected_r) ++fails;
  }
  std::ostringstream detail;
  detail << "50 random triples + 4 pinned cases, " << fails << " mismatches";
  report(fails == 0, "bound arithmetic", detail.str(), timer.seconds());
  return fails == 0;
}

bool criterion_backend_algebra() {
  Timer timer;
  std::size_t fails = 0;
  SplitMix64 rng{717171};
  std::vector<GroupRef> backends = {
      GroupRef(make_free_pq()),
      make_z2z3(),
      make_zu_zv(),
      make_zu_z2(),
      make_s3(),
      GroupRef(AbelianGroup::make({"u", "c"}, 1, {4})),
  };
  for (const auto& g : backends) {
    for (int trial = 0; trial < 10'000; ++trial) {
      Element a = g->element_of(random_word(rng, g->alphabet_ref(), 5));
      Element b = g->element_of(random_word(rng, g->alphabet_ref(), 5));
      Element c = g->element_of(random_word(rng, g->alphabet_ref(), 5));
      bool ok = g->multiply(g->multiply(a, b), c) ==
                    g->multiply(a, g->multiply(b, c)) &&
                g->multiply(a, g->identity()) == a &&
                g->multiply(g->identity(), a) == a &&
                g->multiply(a, g->inverse(a)).is_identity();
      if (!ok) ++fails;
    }
  }

  auto serialize = [](const GroupRef& g, const std::vector<Element>& ball) {
    std::string s;
    for (const auto& e : ball) {
      s += print_word(g->canonical_word(e));
      s += '\n';
    }
    return s;
  };
  auto g = make_z2z3();
  std::string run1 = serialize(g, enumerate_ball(g, 10));
  std::string run2 = serialize(g, enumerate_ball(g, 10));
  if (run1 != run2) ++fails;
  EnumLimits parallel{.max_elements = 10'000'000, .workers = 4};
  std::string run_parallel = serialize(g, enumerate_ball(g, 10, parallel));
  if (run1 != run_parallel) ++fails;

  auto fpq = make_free_pq();
  std::string fr1 = serialize(fpq, enumerate_ball(fpq, 8));
  std::string fr2 = serialize(fpq, enumerate_ball(fpq, 8, parallel));
  if (fr1 != fr2) ++fails;

  long long count = 0, power = 1;
  BallEnumerator spheres(fpq, 8);
  while (auto sphere = spheres.next_sphere()) {
    count += static_cast<long long>(sphere->size());
    long long r = spheres.radius_reached();
    power = 1;
    for (long long i = 0; i < r; ++i) power *= 3;
    if (count != 2 * power - 1) ++fails;
  }

  std::ostringstream detail;
  detail << backends.size() << " backends x 10^4 triples, ball determinism, "
         << fails << " failures";
  report(fails == 0, "backend algebra", detail.str(), timer.seconds());
  return fails == 0;
}

bool criterion_negative_certification() {
  Timer timer;
  auto g = make_z2z3();
  std::string group_file = write_file("z2z3.json", kZ2Z3Json);
  auto ball3 = enumerate_ball(g, 3);

  std::size_t pairs = 0, disagreements = 0, false_positives = 0;
  for (const auto& a : ball3) {
    for (const auto& b : ball3) {
      ++pairs;
      ConjugacyInstance inst;
      inst.handle = g;
      inst.a_list = {a};
      inst.b_list = {b};
      inst.mu = std::max(g->x_length(a), g->x_length(b));

      bool criterion = free_product_conjugacy_single(a, b);
      bool found = bfs_conjugator_search(inst, 6).has_value();
      if (criterion != found) ++disagreements;

      if (!criterion) {
        std::string inst_file = write_file(
            "negative_instance.json", instance_json(g, {a}, {b}));
        auto solved = run_cli({"solve", group_file, inst_file, "--max-radius",
                               "6"});
        if (solved.exit_code == 0) ++false_positives;
      }
    }
  }
  std::ostringstream detail;
  detail << pairs << " pairs, " << disagreements << " oracle disagreements, "
         << false_positives << " false positives from cmd_solve";
  report(disagreements == 0 && false_positives == 0,
         "negative certification cross-check", detail.str(), timer.seconds());
  return disagreements == 0 && false_positives == 0;
}

}  // namespace

int main() {
  Timer total;
  criterion_oracle_equivalence();
  criterion_shortening_suite();
  criterion_theorem2_bound();
  criterion_remark5();
  criterion_compression_soundness();
  criterion_bound_arithmetic();
  criterion_backend_algebra();
  criterion_negative_certification();
  std::printf("%d criterion(s) failed; total %.1fs\n", failures,
              total.seconds());
  return failures;
}
