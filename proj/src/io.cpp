#include "relconj/io.hpp"

#include <fstream>

namespace relconj {

using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::bad_file, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::bad_file, "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

namespace {

std::vector<std::string> string_list(const json& j, const char* key,
                                     bool required) {
  if (!j.contains(key)) {
    if (required) fail(Errc::bad_file, std::string("missing key '") + key + "'");
    return {};
  }
  if (!j.at(key).is_array()) {
    fail(Errc::bad_file, std::string("'") + key + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_string()) {
      fail(Errc::bad_file, std::string("'") + key + "' entries must be strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

GroupRef parse_group(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    fail(Errc::bad_file, "group spec must be an object with a 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "free") {
    if (!string_list(j, "involutions", false).empty()) {
      fail(Errc::bad_file, "free groups admit no self-inverse generators");
    }
    return FreeGroup::make(string_list(j, "generators", true));
  }
  if (kind == "abelian") {
    if (!j.contains("rank") || !j.at("rank").is_number_integer()) {
      fail(Errc::bad_file, "abelian group needs an integer 'rank'");
    }
    std::vector<std::int64_t> torsion;
    if (j.contains("torsion")) {
      if (!j.at("torsion").is_array()) {
        fail(Errc::bad_file, "'torsion' must be an array");
      }
      for (const auto& m : j.at("torsion")) {
        if (!m.is_number_integer()) {
          fail(Errc::bad_file, "torsion moduli must be integers");
        }
        torsion.push_back(m.get<std::int64_t>());
      }
    }
    return AbelianGroup::make(string_list(j, "generators", true),
                              j.at("rank").get<int>(), std::move(torsion),
                              string_list(j, "involutions", false));
  }
  if (kind == "finite") {
    FiniteGroup::Spec spec;
    spec.generators = string_list(j, "generators", true);
    spec.element_names = string_list(j, "elements", true);
    if (!j.contains("table") || !j.at("table").is_array()) {
      fail(Errc::bad_file, "finite group needs a 'table'");
    }
    for (const auto& row : j.at("table")) {
      if (!row.is_array()) fail(Errc::bad_file, "table rows must be arrays");
      std::vector<int> r;
      for (const auto& v : row) {
        if (!v.is_number_integer()) {
          fail(Errc::bad_file, "table entries must be integers");
        }
        r.push_back(v.get<int>());
      }
      spec.table.push_back(std::move(r));
    }
    if (!j.contains("generator_map") || !j.at("generator_map").is_object()) {
      fail(Errc::bad_file, "finite group needs a 'generator_map'");
    }
    for (const auto& [name, v] : j.at("generator_map").items()) {
      if (!v.is_number_integer()) {
        fail(Errc::bad_file, "generator_map values must be integers");
      }
      spec.generator_map.emplace(name, v.get<int>());
    }
    spec.declared_involutions = string_list(j, "involutions", false);
    return FiniteGroup::make(std::move(spec));
  }
  if (kind == "free_product") {
    if (!j.contains("factors") || !j.at("factors").is_array() ||
        j.at("factors").empty()) {
      fail(Errc::bad_file, "free product needs a nonempty 'factors' array");
    }
    std::vector<GroupRef> factors;
    for (const auto& f : j.at("factors")) factors.push_back(parse_group(f));
    return FreeProductGroup::make(std::move(factors));
  }
  fail(Errc::bad_file, "unknown group kind '" + kind + "'");
}

GroupRef load_group_file(const std::string& path) {
  return parse_group(load_json_file(path));
}

InstanceWords parse_instance(const json& j, const AlphabetRef& alphabet) {
  if (!j.is_object()) fail(Errc::bad_file, "instance must be an object");
  InstanceWords out;
  for (const auto& text : string_list(j, "a", true)) {
    out.a.push_back(parse_word(text, alphabet));
  }
  for (const auto& text : string_list(j, "b", true)) {
    out.b.push_back(parse_word(text, alphabet));
  }
  return out;
}

InstanceWords load_instance_file(const std::string& path,
                                 const AlphabetRef& alphabet) {
  return parse_instance(load_json_file(path), alphabet);
}

namespace {

std::map<long long, long long> integer_map(const json& j, const char* key) {
  std::map<long long, long long> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_object()) {
    fail(Errc::bad_file, std::string("'") + key + "' must be an object");
  }
  for (const auto& [k, v] : j.at(key).items()) {
    if (!v.is_number_integer()) {
      fail(Errc::bad_file, std::string("'") + key + "' values must be integers");
    }
    try {
      out[std::stoll(k)] = v.get<long long>();
    } catch (const std::exception&) {
      fail(Errc::bad_file,
           std::string("'") + key + "' keys must be integers, got '" + k + "'");
    }
  }
  return out;
}

}  // namespace

ConstantsProfile parse_profile(const json& j) {
  if (!j.is_object()) fail(Errc::bad_file, "profile must be an object");
  std::map<ConstantsProfile::EtaKey, long long> eta;
  if (j.contains("eta")) {
    if (!j.at("eta").is_object()) fail(Errc::bad_file, "'eta' must be an object");
    for (const auto& [k, v] : j.at("eta").items()) {
      if (!v.is_number_integer()) {
        fail(Errc::bad_file, "'eta' values must be integers");
      }
      long long lambda = 0, c = 0, kk = 0;
      char comma1 = 0, comma2 = 0;
      std::istringstream in(k);
      if (!(in >> lambda >> comma1 >> c >> comma2 >> kk) || comma1 != ',' ||
          comma2 != ',' || !(in >> std::ws).eof()) {
        fail(Errc::bad_file, "'eta' keys must look like 'lambda,c,k'");
      }
      eta[{lambda, c, kk}] = v.get<long long>();
    }
  }
  bool certified = false;
  if (j.contains("certified")) {
    if (!j.at("certified").is_boolean()) {
      fail(Errc::bad_file, "'certified' must be a boolean");
    }
    certified = j.at("certified").get<bool>();
  }
  bool monotone_extend = false;
  if (j.contains("monotone_extend")) {
    if (!j.at("monotone_extend").is_boolean()) {
      fail(Errc::bad_file, "'monotone_extend' must be a boolean");
    }
    monotone_extend = j.at("monotone_extend").get<bool>();
  }
  return ConstantsProfile::from_maps(integer_map(j, "chi"), std::move(eta),
                                     integer_map(j, "theta"), certified,
                                     monotone_extend);
}

ConstantsProfile load_profile_file(const std::string& path) {
  return parse_profile(load_json_file(path));
}

BenchSuite parse_suite(const json& j) {
  if (!j.is_object() || !j.contains("instances") ||
      !j.at("instances").is_array()) {
    fail(Errc::bad_file, "suite needs an 'instances' array");
  }
  BenchSuite suite;
  for (const auto& e : j.at("instances")) {
    if (!e.is_object() || !e.contains("instance") ||
        !e.at("instance").is_string()) {
      fail(Errc::bad_file, "suite entries need an 'instance' path");
    }
    BenchSuite::Entry entry;
    entry.instance_path = e.at("instance").get<std::string>();
    entry.expect = e.value("expect", std::string("unknown"));
    if (entry.expect != "conjugate" && entry.expect != "unknown") {
      fail(Errc::bad_file, "suite 'expect' must be 'conjugate' or 'unknown'");
    }
    suite.instances.push_back(std::move(entry));
  }
  return suite;
}

BenchSuite load_suite_file(const std::string& path) {
  return parse_suite(load_json_file(path));
}

}  // namespace relconj
