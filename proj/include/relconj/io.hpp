#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "relconj/gcp.hpp"

namespace relconj {

// Group spec files:
//   {"kind":"free","generators":["p","q"]}
//   {"kind":"abelian","generators":["u","v"],"rank":2,"torsion":[]}
//   {"kind":"finite","generators":["s"],"elements":["e","s"],
//    "table":[[0,1],[1,0]],"generator_map":{"s":1}}
//   {"kind":"free_product","factors":[...]}
// Optional "involutions":["s"] declares self-inverse generators.
GroupRef parse_group(const nlohmann::json& j);
GroupRef load_group_file(const std::string& path);

// Instance files: {"a":["p p q^-1","q"],"b":["...","..."]}
struct InstanceWords {
  std::vector<Word> a;
  std::vector<Word> b;
};
InstanceWords parse_instance(const nlohmann::json& j,
                             const AlphabetRef& alphabet);
InstanceWords load_instance_file(const std::string& path,
                                 const AlphabetRef& alphabet);

// Constants profile files:
//   {"chi":{"0":0,"1":2},"eta":{"1,0,2":5},"theta":{"1":3},
//    "certified":false,"monotone_extend":true}
ConstantsProfile parse_profile(const nlohmann::json& j);
ConstantsProfile load_profile_file(const std::string& path);

// Suite files: {"instances":[{"instance":"path","expect":"conjugate"}]}
struct BenchSuite {
  struct Entry {
    std::string instance_path;
    std::string expect;  // "conjugate" | "unknown"
  };
  std::vector<Entry> instances;
};
BenchSuite parse_suite(const nlohmann::json& j);
BenchSuite load_suite_file(const std::string& path);

nlohmann::json load_json_file(const std::string& path);

}  // namespace relconj
