#include "relconj/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relconj/io.hpp"
#include "relconj/oracles.hpp"

namespace relconj::cli {

using nlohmann::json;

namespace {

constexpr int kExitConjugate = 0;
constexpr int kExitNotConjugate = 1;
constexpr int kExitInconclusive = 2;

struct CommonOptions {
  std::string group_path;
  std::string instance_path;
  std::string constants_path;
  std::string mode = "heuristic";
  long long max_radius = 16;
  std::uint64_t max_elements = 10'000'000;
  int workers = 1;
  std::uint64_t seed = 0;
  bool pretty = false;
  bool timings = false;
  bool allow_degenerate = false;
};

std::uint64_t default_max_elements() {
  if (const char* env = std::getenv("RELCONJ_MAX_ELEMENTS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 10'000'000;
}

void emit(const json& report, const CommonOptions& opts, std::ostream& out) {
  if (opts.pretty) {
    out << report.dump(2) << "\n";
  } else {
    out << report.dump() << "\n";
  }
}

json options_json(const CommonOptions& opts) {
  return json{{"mode", opts.mode},
              {"max_radius", opts.max_radius},
              {"max_elements", opts.max_elements},
              {"workers", opts.workers},
              {"seed", opts.seed}};
}

json stats_json(const SearchStats& stats, bool timings) {
  json j{{"elements_enumerated", stats.elements_enumerated},
         {"candidates_checked", stats.candidates_checked},
         {"radius_reached", stats.radius_reached},
         {"resource_limited", stats.resource_limited}};
  if (timings) j["wall_time_s"] = stats.wall_time_s;
  return j;
}

SearchConfig config_from(const CommonOptions& opts) {
  SearchConfig config;
  config.max_elements = opts.max_elements;
  config.max_radius = opts.max_radius;
  config.workers = opts.workers;
  config.certified = opts.mode == "certified";
  config.allow_degenerate_profile = opts.allow_degenerate;
  return config;
}

json decision_json(const Decision& decision, const Group& group) {
  switch (decision.status) {
    case Decision::Status::conjugate:
      return json{
          {"status", "conjugate"},
          {"witness", print_word(group.canonical_word(decision.witness))},
          {"witness_x_length", group.x_length(decision.witness)}};
    case Decision::Status::not_conjugate:
      return json{{"status", "not_conjugate"},
                  {"certified_radius", decision.certified_radius.str()}};
    case Decision::Status::inconclusive:
      return json{{"status", "inconclusive"},
                  {"searched_radius", decision.searched_radius}};
  }
  return json{};
}

int status_exit(const Decision& decision) {
  switch (decision.status) {
    case Decision::Status::conjugate: return kExitConjugate;
    case Decision::Status::not_conjugate: return kExitNotConjugate;
    case Decision::Status::inconclusive: return kExitInconclusive;
  }
  return 7;
}

json base_report(const char* command, const CommonOptions& opts) {
  json j{{"command", command}, {"version", std::string(kVersion)}};
  json inputs;
  if (!opts.group_path.empty()) inputs["group"] = opts.group_path;
  if (!opts.instance_path.empty()) inputs["instance"] = opts.instance_path;
  inputs["constants"] =
      opts.constants_path.empty() ? json() : json(opts.constants_path);
  j["inputs"] = inputs;
  j["options"] = options_json(opts);
  return j;
}

// ---------------------------------------------------------------------------

int run_solve(const CommonOptions& opts, std::ostream& out,
              std::ostream& err) {
  GroupRef group = load_group_file(opts.group_path);
  InstanceWords words =
      load_instance_file(opts.instance_path, group->alphabet_ref());

  std::optional<ConstantsProfile> profile;
  if (!opts.constants_path.empty()) {
    profile = load_profile_file(opts.constants_path);
  }
  if (opts.mode == "certified" && !profile) {
    fail(Errc::missing_constant, "certified mode requires a constants file");
  }

  json report = base_report("solve", opts);

  ConjugacyInstance inst;
  try {
    inst = make_instance(group, words.a, words.b);
  } catch (const Error& e) {
    if (e.code() != Errc::inconsistent_duplicates) throw;
    report["bounds"] = json();
    report["decision"] = json{{"status", "not_conjugate"},
                              {"reason", "inconsistent_duplicates"}};
    emit(report, opts, out);
    return kExitNotConjugate;
  }
  report["mu"] = inst.mu;

  SearchConfig config = config_from(opts);
  Decision decision;
  if (profile) {
    const long long alphabet_size = group->alphabet().size();
    BigNat bound_l = relative_length_bound(inst.mu, alphabet_size, *profile);
    BigNat radius = theorem4_bound(inst.mu, alphabet_size, *profile);
    report["bounds"] = json{{"relative_length_bound", bound_l.str()},
                            {"theorem4_radius", radius.str()}};
    decision = solve(inst, *profile, config);
  } else {
    report["bounds"] = json();
    decision = solve_heuristic(inst, config);
  }
  report["decision"] = decision_json(decision, *group);
  report["stats"] = stats_json(decision.stats, opts.timings);
  emit(report, opts, out);
  (void)err;
  return status_exit(decision);
}

int run_verify(const CommonOptions& opts, const std::string& witness_text,
               std::ostream& out, std::ostream& err) {
  GroupRef group = load_group_file(opts.group_path);
  InstanceWords words =
      load_instance_file(opts.instance_path, group->alphabet_ref());
  Element witness =
      group->element_of(parse_word(witness_text, group->alphabet_ref()));

  json report = base_report("verify", opts);
  report["witness"] = witness_text;

  bool ok = false;
  try {
    ConjugacyInstance inst = make_instance(group, words.a, words.b);
    ok = verify_conjugator(inst, witness);
  } catch (const Error& e) {
    if (e.code() != Errc::inconsistent_duplicates) throw;
    report["note"] = "inconsistent_duplicates";
    ok = false;
  }
  report["verified"] = ok;
  emit(report, opts, out);
  (void)err;
  return ok ? kExitConjugate : kExitNotConjugate;
}

json relative_json(const RelativeWord& rel) {
  const Group& group = *rel.handle();
  Element value = rel.evaluate();
  return json{{"word", print_word(group.canonical_word(value))},
              {"relative", print_relative(rel)},
              {"relative_length", rel.length()}};
}

int run_shorten(const CommonOptions& opts, const std::string& conjugator_text,
                std::ostream& out, std::ostream& err) {
  GroupRef group = load_group_file(opts.group_path);
  InstanceWords words =
      load_instance_file(opts.instance_path, group->alphabet_ref());
  Element x =
      group->element_of(parse_word(conjugator_text, group->alphabet_ref()));

  json report = base_report("shorten", opts);
  ConjugacyInstance inst;
  try {
    inst = make_instance(group, words.a, words.b);
  } catch (const Error& e) {
    if (e.code() != Errc::inconsistent_duplicates) throw;
    fail(Errc::not_a_conjugator, "instance admits no conjugator at all");
  }

  RelativeWord input = relative_normal_form(x);
  std::vector<ShorteningStep> steps;
  RelativeWord output = shorten_to_fixpoint(input, inst, &steps);

  report["input"] = relative_json(input);
  report["output"] = relative_json(output);
  json steps_json = json::array();
  for (const auto& s : steps) {
    steps_json.push_back(json{{"s", s.s}, {"t", s.t}});
  }
  report["steps"] = steps_json;
  emit(report, opts, out);
  (void)err;
  return 0;
}

int run_compress(const CommonOptions& opts, const std::string& conjugator_text,
                 std::ostream& out, std::ostream& err) {
  GroupRef group = load_group_file(opts.group_path);
  InstanceWords words =
      load_instance_file(opts.instance_path, group->alphabet_ref());
  Element x =
      group->element_of(parse_word(conjugator_text, group->alphabet_ref()));

  json report = base_report("compress", opts);
  ConjugacyInstance inst;
  try {
    inst = make_instance(group, words.a, words.b);
  } catch (const Error& e) {
    if (e.code() != Errc::inconsistent_duplicates) throw;
    fail(Errc::not_a_conjugator, "instance admits no conjugator at all");
  }

  ConstantsProfile profile =
      opts.constants_path.empty()
          ? ConstantsProfile::from_maps({}, {}, {}, false, false)
          : load_profile_file(opts.constants_path);

  ParabolicOracleSet oracles = ParabolicOracleSet::for_handle(group);
  RelativeWord input = relative_normal_form(x);
  std::vector<CompressionStep> log;
  RelativeWord output =
      compress_parabolic_components(input, inst, oracles, profile, &log);

  report["input"] = relative_json(input);
  report["output"] = relative_json(output);
  json steps = json::array();
  for (const auto& s : log) {
    json step{{"position", s.position},
              {"case", s.case2 ? "case2" : "case1"}};
    step["factor"] = s.factor == kFreeLetter
                         ? json("letter")
                         : json(factor_display_name(s.factor));
    if (s.case2) {
      const auto* product =
          static_cast<const FreeProductGroup*>(group.get());
      step["witness"] = print_word(
          product->factor(s.factor)->canonical_word(s.witness));
      step["deleted"] = s.deleted;
      step["connector_mu"] = s.connector_mu;
      if (s.declared_theta >= 0) step["declared_theta"] = s.declared_theta;
    }
    steps.push_back(std::move(step));
  }
  report["steps"] = steps;
  emit(report, opts, out);
  (void)err;
  return 0;
}

int run_bound(const CommonOptions& opts, long long mu, long long alphabet_size,
              std::ostream& out, std::ostream& err) {
  ConstantsProfile profile = load_profile_file(opts.constants_path);
  json report = base_report("bound", opts);
  report["mu"] = mu;
  report["alphabet_size"] = alphabet_size;
  BigNat bound_l = relative_length_bound(mu, alphabet_size, profile);
  report["relative_length_bound"] = bound_l.str();
  try {
    BigNat radius = theorem4_bound(mu, alphabet_size, profile);
    report["theorem4_radius"] = radius.str();
  } catch (const Error& e) {
    if (e.code() != Errc::missing_constant) throw;
    report["theorem4_radius"] = json();
  }
  emit(report, opts, out);
  (void)err;
  return 0;
}

int run_calibrate(const CommonOptions& opts, long long k, long long samples,
                  std::ostream& out, std::ostream& err) {
  GroupRef group = load_group_file(opts.group_path);
  CalibrationReport calibration = calibrate_chi(group, k, samples, opts.seed);
  json report = base_report("calibrate", opts);
  report["k"] = calibration.k;
  report["samples"] = calibration.samples;
  report["chi_lower_estimate"] = calibration.chi_lower_estimate;
  report["witness"] = json{{"a", print_word(calibration.witness_a)},
                           {"x", print_word(calibration.witness_x)}};
  emit(report, opts, out);
  (void)err;
  return 0;
}

int run_bench(const CommonOptions& opts, const std::string& suite_path,
              std::ostream& out, std::ostream& err) {
  GroupRef group = load_group_file(opts.group_path);
  BenchSuite suite = load_suite_file(suite_path);
  std::optional<ConstantsProfile> profile;
  if (!opts.constants_path.empty()) {
    profile = load_profile_file(opts.constants_path);
  }
  const auto suite_dir = std::filesystem::path(suite_path).parent_path();

  json rows = json::array();
  std::ostringstream table;
  table << std::left << std::setw(28) << "instance" << std::setw(14)
        << "decision" << std::setw(10) << "witness" << std::setw(12)
        << "elements" << std::setw(12) << "wall_s"
        << "rel_len/L" << "\n";

  SearchConfig config = config_from(opts);
  for (const auto& entry : suite.instances) {
    std::string path = entry.instance_path;
    if (!suite_dir.empty() && std::filesystem::path(path).is_relative()) {
      path = (suite_dir / path).string();
    }
    InstanceWords words = load_instance_file(path, group->alphabet_ref());
    json row{{"instance", entry.instance_path}, {"expect", entry.expect}};
    Decision decision;
    bool inconsistent = false;
    ConjugacyInstance inst;
    try {
      inst = make_instance(group, words.a, words.b);
    } catch (const Error& e) {
      if (e.code() != Errc::inconsistent_duplicates) throw;
      inconsistent = true;
    }
    std::string status;
    if (inconsistent) {
      status = "not_conjugate";
      row["decision"] = json{{"status", status},
                             {"reason", "inconsistent_duplicates"}};
    } else {
      decision = profile ? solve(inst, *profile, config)
                         : solve_heuristic(inst, config);
      row["decision"] = decision_json(decision, *group);
      status = row["decision"]["status"].get<std::string>();
      row["mu"] = inst.mu;
      row["elements_enumerated"] = decision.stats.elements_enumerated;
      row["wall_time_s"] = decision.stats.wall_time_s;
      if (decision.status == Decision::Status::conjugate) {
        long long rel_len = relative_length(decision.witness);
        row["witness_x_length"] = group->x_length(decision.witness);
        row["witness_relative_length"] = rel_len;
        if (profile) {
          BigNat bound_l = relative_length_bound(
              inst.mu, group->alphabet().size(), *profile);
          row["relative_length_bound"] = bound_l.str();
          row["bound_ratio"] =
              bound_l == 0 ? 0.0
                           : static_cast<double>(rel_len) /
                                 bound_l.convert_to<double>();
        }
      }
    }
    row["expect_met"] =
        entry.expect == "unknown" || status == entry.expect;
    table << std::left << std::setw(28) << entry.instance_path
          << std::setw(14) << status << std::setw(10)
          << (status == "conjugate"
                  ? std::to_string(
                        row.value("witness_x_length", 0LL))
                  : "-")
          << std::setw(12) << row.value("elements_enumerated", 0ULL)
          << std::setw(12) << std::setprecision(4)
          << row.value("wall_time_s", 0.0)
          << (row.contains("bound_ratio")
                  ? std::to_string(row["bound_ratio"].get<double>())
                  : "-")
          << "\n";
    rows.push_back(std::move(row));
  }

  json report = base_report("bench", opts);
  report["suite"] = suite_path;
  report["rows"] = rows;
  json summary{{"total", suite.instances.size()}};
  std::size_t met = 0;
  for (const auto& r : rows) {
    if (r["expect_met"].get<bool>()) ++met;
  }
  summary["expect_met"] = met;
  report["summary"] = summary;
  report["rendered"] = table.str();
  emit(report, opts, out);
  (void)err;
  return 0;
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::missing_constant:
    case Errc::degenerate_profile:
      return 4;
    case Errc::not_a_conjugator:
      return 5;
    case Errc::oracle_failure:
      return 6;
    case Errc::handle_mismatch:
      return 7;
    case Errc::unknown_symbol:
    case Errc::malformed_token:
    case Errc::alphabet_mismatch:
    case Errc::index_out_of_range:
    case Errc::factor_mismatch:
    case Errc::unsupported_backend:
    case Errc::length_mismatch:
    case Errc::inconsistent_duplicates:
    case Errc::oracle_unavailable:
    case Errc::bad_file:
      return 3;
    case Errc::resource_limit:
      return 7;
  }
  return 7;
}

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Generalized conjugacy search in free products of computable "
               "groups"};
  app.require_subcommand(1);

  CommonOptions opts;
  opts.max_elements = default_max_elements();
  std::string witness_text;
  std::string conjugator_text;
  std::string suite_path;
  long long mu = 0;
  long long alphabet_size = 0;
  long long k = 0;
  long long samples = 1000;

  auto add_search_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mode", opts.mode, "heuristic|certified")
        ->check(CLI::IsMember({"heuristic", "certified"}));
    cmd->add_option("--max-radius", opts.max_radius, "heuristic radius cap");
    cmd->add_option("--max-elements", opts.max_elements,
                    "ball enumeration element cap");
    cmd->add_option("--workers", opts.workers, "worker threads");
    cmd->add_option("--seed", opts.seed, "seed echoed into the report");
    cmd->add_flag("--allow-degenerate", opts.allow_degenerate,
                  "accept a profile whose theorem-4 radius is zero");
  };
  auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_flag("--pretty", opts.pretty, "indent the JSON report");
    cmd->add_flag("--timings", opts.timings, "include wall times");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "decide an instance");
  solve_cmd->add_option("group", opts.group_path, "group spec file")
      ->required();
  solve_cmd->add_option("instance", opts.instance_path, "instance file")
      ->required();
  solve_cmd->add_option("--constants", opts.constants_path,
                        "constants profile file");
  add_search_flags(solve_cmd);
  add_output_flags(solve_cmd);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "check a conjugator witness");
  verify_cmd->add_option("group", opts.group_path)->required();
  verify_cmd->add_option("instance", opts.instance_path)->required();
  verify_cmd->add_option("witness", witness_text, "witness word");
  add_output_flags(verify_cmd);

  CLI::App* shorten_cmd =
      app.add_subcommand("shorten", "pigeonhole-shorten a conjugator");
  shorten_cmd->add_option("group", opts.group_path)->required();
  shorten_cmd->add_option("instance", opts.instance_path)->required();
  shorten_cmd->add_option("conjugator", conjugator_text)->required();
  add_output_flags(shorten_cmd);

  CLI::App* compress_cmd = app.add_subcommand(
      "compress", "compress parabolic components of a conjugator");
  compress_cmd->add_option("group", opts.group_path)->required();
  compress_cmd->add_option("instance", opts.instance_path)->required();
  compress_cmd->add_option("conjugator", conjugator_text)->required();
  compress_cmd->add_option("--constants", opts.constants_path);
  add_output_flags(compress_cmd);

  CLI::App* bound_cmd =
      app.add_subcommand("bound", "evaluate the search-radius bounds");
  bound_cmd->add_option("constants", opts.constants_path)->required();
  bound_cmd->add_option("--mu", mu)->required();
  bound_cmd->add_option("--alphabet-size", alphabet_size)->required();
  add_output_flags(bound_cmd);

  CLI::App* calibrate_cmd =
      app.add_subcommand("calibrate", "sample a lower estimate for chi");
  calibrate_cmd->add_option("group", opts.group_path)->required();
  calibrate_cmd->add_option("--k", k)->required();
  calibrate_cmd->add_option("--samples", samples);
  calibrate_cmd->add_option("--seed", opts.seed);
  add_output_flags(calibrate_cmd);

  CLI::App* bench_cmd = app.add_subcommand("bench", "run an instance suite");
  bench_cmd->add_option("group", opts.group_path)->required();
  bench_cmd->add_option("suite", suite_path)->required();
  bench_cmd->add_option("--constants", opts.constants_path);
  add_search_flags(bench_cmd);
  add_output_flags(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(opts, out, err);
    if (verify_cmd->parsed()) return run_verify(opts, witness_text, out, err);
    if (shorten_cmd->parsed()) {
      return run_shorten(opts, conjugator_text, out, err);
    }
    if (compress_cmd->parsed()) {
      return run_compress(opts, conjugator_text, out, err);
    }
    if (bound_cmd->parsed()) {
      return run_bound(opts, mu, alphabet_size, out, err);
    }
    if (calibrate_cmd->parsed()) {
      return run_calibrate(opts, k, samples, out, err);
    }
    if (bench_cmd->parsed()) return run_bench(opts, suite_path, out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 7;
  }
  err << "no subcommand\n";
  return 3;
}

}  // namespace relconj::cli
