// Command-line front end. Builds a config JSON document from flags (or an
// explicit --config file) and drives everything through the shared-library C
// API; no direct linkage against the analysis core.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "fairflow/fairflow.h"

namespace {

using Json = nlohmann::ordered_json;

struct CommonFlags {
  std::string config_file;
  std::string program, space, model, restriction, condition, cond, cpt;
  std::vector<std::string> paths;
  std::vector<std::string> defines;
  std::string backend, format, tol, emit_cnf, corpus;
  std::int64_t favorable = 1;
  bool favorable_set = false;
  int jobs = 0;
  bool no_timings = false;
  std::int64_t space_cap = 0;
  std::int64_t conflict_budget = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_file, "config JSON file (flags override its fields)");
  cmd->add_option("--program", flags.program, "decision program (.dp)");
  cmd->add_option("--space", flags.space, "input-space JSON document");
  cmd->add_option("--model", flags.model, "causal model (.scm)");
  cmd->add_option("--restriction", flags.restriction, "restricted classification program (.dp)");
  cmd->add_option("--condition", flags.condition, "declassification predicate program (.dp)");
  cmd->add_option("--cond", flags.cond, "parity conditioning program (.dp)");
  cmd->add_option("--cpt", flags.cpt, "conditional-probability-table JSON document");
  cmd->add_option("--paths", flags.paths, "path-clamped model variables")->delimiter(',');
  cmd->add_option("--define", flags.defines, "integer define NAME=VALUE (repeatable)");
  cmd->add_option("--backend", flags.backend, "enum | count | both");
  cmd->add_option("--format", flags.format, "text | json");
  cmd->add_option("--favorable", flags.favorable, "favorable outcome value (default 1)")
      ->each([&flags](const std::string&) { flags.favorable_set = true; });
  cmd->add_option("--tol", flags.tol, "parity tolerance, exact rational (default 0)");
  cmd->add_option("--jobs", flags.jobs, "worker cap for enumeration");
  cmd->add_flag("--no-timings", flags.no_timings, "omit timings from the report");
  cmd->add_option("--emit-cnf", flags.emit_cnf, "write the counting formula as DIMACS CNF");
  cmd->add_option("--space-cap", flags.space_cap, "enumeration point cap");
  cmd->add_option("--conflict-budget", flags.conflict_budget, "SAT conflict budget");
  cmd->add_option("--corpus", flags.corpus, "corpus directory (reproduce)");
}

std::string read_file_or_die(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) {
    std::fprintf(stderr, "error: cannot open '%s'\n", path.c_str());
    std::exit(2);
  }
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

std::string dirname_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

int run_subcommand(const std::string& analysis, const CommonFlags& flags) {
  Json config = Json::object();
  std::string base_dir = ".";
  if (!flags.config_file.empty()) {
    try {
      config = Json::parse(read_file_or_die(flags.config_file));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
      return 2;
    }
    base_dir = dirname_of(flags.config_file);
  }
  config["analysis"] = analysis;

  auto set_if = [&](const char* key, const std::string& value) {
    if (!value.empty()) config[key] = value;
  };
  set_if("program", flags.program);
  set_if("space", flags.space);
  set_if("model", flags.model);
  set_if("restriction", flags.restriction);
  set_if("condition", flags.condition);
  set_if("cond", flags.cond);
  set_if("cpt", flags.cpt);
  set_if("backend", flags.backend);
  set_if("format", flags.format);
  set_if("tol", flags.tol);
  set_if("emit_cnf", flags.emit_cnf);
  set_if("corpus", flags.corpus);
  if (!flags.paths.empty()) config["paths"] = flags.paths;
  if (flags.favorable_set) config["favorable"] = flags.favorable;
  if (flags.jobs > 0) config["jobs"] = flags.jobs;
  if (flags.no_timings) config["no_timings"] = true;
  if (flags.space_cap > 0) config["space_cap"] = flags.space_cap;
  if (flags.conflict_budget > 0) config["conflict_budget"] = flags.conflict_budget;
  if (!flags.defines.empty()) {
    Json defines = config.contains("defines") ? config["defines"] : Json::object();
    for (const std::string& d : flags.defines) {
      auto eq = d.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "error: --define expects NAME=VALUE, got '%s'\n", d.c_str());
        return 2;
      }
      try {
        defines[d.substr(0, eq)] = std::stoll(d.substr(eq + 1));
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: --define value in '%s' is not an integer\n", d.c_str());
        return 2;
      }
    }
    config["defines"] = defines;
  }

  ff_analysis* analysis_handle = nullptr;
  ff_status status = ff_analyze(config.dump().c_str(), base_dir.c_str(), &analysis_handle);
  if (status != FF_OK) {
    std::fprintf(stderr, "error [%d]: %s\n", ff_last_error_code(), ff_last_error_message());
    return status == FF_ERR_BACKEND_MISMATCH ? 3 : 2;
  }

  char* rendered = nullptr;
  std::string format = flags.format;
  if (format.empty() && config.contains("format")) format = config["format"].get<std::string>();
  if (format == "json") {
    status = ff_analysis_report_json(analysis_handle, flags.no_timings ? 0 : 1, &rendered);
  } else {
    status = ff_analysis_report_text(analysis_handle, &rendered);
  }
  if (status != FF_OK) {
    std::fprintf(stderr, "error [%d]: %s\n", ff_last_error_code(), ff_last_error_message());
    ff_analysis_free(analysis_handle);
    return 2;
  }
  std::fputs(rendered, stdout);
  ff_string_free(rendered);

  int exit_code = ff_analysis_exit_code(analysis_handle);
  ff_analysis_free(analysis_handle);
  return exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("fairflow ") + ff_version() +
               " — exact information-flow and fairness analysis of decision programs"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"check-ni", "check unconditional noninterference"},
      {"check-restricted", "check restricted information flow for a classification"},
      {"check-conditional", "check conditional information flow for a predicate"},
      {"parity", "compute (conditional) demographic parity tables"},
      {"vulnerability", "compute conditional vulnerability"},
      {"spread", "compute fairness spread"},
      {"counterfactual", "counterfactual fairness over a causal model"},
      {"path-specific", "path-specific spread over a causal model"},
      {"crosscheck", "compare enumeration and counting backends"},
      {"reproduce", "run the shipped golden corpus and print a pass/fail matrix"},
  };

  std::vector<std::unique_ptr<CommonFlags>> flag_sets;
  for (const auto& [name, description] : subcommands) {
    CLI::App* cmd = app.add_subcommand(name, description);
    flag_sets.push_back(std::make_unique<CommonFlags>());
    add_common_flags(cmd, *flag_sets.back());
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < subcommands.size(); ++i) {
    if (app.get_subcommand(subcommands[i].first)->parsed()) {
      return run_subcommand(subcommands[i].first, *flag_sets[i]);
    }
  }
  std::fprintf(stderr, "error: no subcommand\n");
  return 2;
}
