#pragma once

#include <json.hpp>

#include "core/causal.hpp"
#include "core/count.hpp"

namespace fairflow {

using Json = nlohmann::ordered_json;

// A fully resolved analysis request. Built from a config JSON document plus
// CLI overrides; file references are resolved against `base_dir`.
struct AnalysisConfig {
  std::string analysis; // check-ni | check-restricted | check-conditional | parity |
                        // vulnerability | spread | counterfactual | path-specific |
                        // crosscheck | reproduce
  std::string program_path;
  Json space_json;      // space document (inline or loaded), empty when absent
  std::string space_origin; // path echo for reports ("<inline>" when embedded)
  std::string model_path;
  std::string restriction_path;
  std::string condition_path;
  std::string cond_path; // parity conditioning program
  std::vector<std::string> paths;
  std::string backend = "enum"; // enum | count | both
  std::string format = "text";  // text | json
  std::int64_t favorable = 1;
  std::map<std::string, std::int64_t> defines;
  std::string tol = "0";
  int jobs = 1;
  bool no_timings = false;
  std::string emit_cnf;
  std::int64_t space_cap = kDefaultSpaceCap;
  std::int64_t conflict_budget = 1000000;
  Json cpt_json; // CPT document (inline or loaded), empty when absent
  std::string corpus_dir = "corpus";
  std::string base_dir = ".";

  EnumerationOptions enumeration_options() const { return EnumerationOptions{space_cap}; }
  engine::EngineOptions engine_options() const {
    return engine::EngineOptions{conflict_budget, EnumerationOptions{space_cap}};
  }
  std::string resolve(const std::string& path) const;
};

AnalysisConfig parse_config(const std::string& json_text, const std::string& base_dir);

std::string read_file(const std::string& path);

// {"schema":1, "inputs":[{"name","role","domain","dist"}...]}; domain is
// [lo, hi] or {"set":[...]}; dist is "uniform" or {"pmf": {"value": "3/20"}}.
InputSpace space_from_json(const Json& doc);

Json space_to_json(const InputSpace& space);

struct CptDocument {
  OutcomeTable table;
  std::vector<Rational> dist_g;
  std::vector<Rational> dist_u;
  std::vector<std::string> u_names;
};

// {"groups":[...], "g_dist":..., "u_names":[...], "u_points":[[..]..],
//  "u_dist":"uniform"|{"weights":[...]}, "outcomes":[...],
//  "rows":[{"g":..,"u":[..],"p":{"outcome":"prob"}}...]}
CptDocument cpt_from_json(const Json& doc);

// Shared .dp loading: parse with defines, then typecheck.
dsl::ValidatedProgram load_program(const std::string& path,
                                   const std::map<std::string, std::int64_t>& defines);

CausalModel load_model(const std::string& path);

} // namespace fairflow
