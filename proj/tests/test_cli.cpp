#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>

#ifndef FF_CLI_PATH
#define FF_CLI_PATH "fairflow"
#endif
#ifndef FF_CORPUS_DIR
#define FF_CORPUS_DIR "corpus"
#endif

using Json = nlohmann::ordered_json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string command = std::string(FF_CLI_PATH) + " " + args + " 2>&1";
  std::FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  std::array<char, 4096> buffer{};
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), n);
  }
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string corpus(const std::string& name) {
  return std::string(FF_CORPUS_DIR) + "/" + name;
}

} // namespace

TEST_CASE("exit codes: 0 holds, 1 violated, 2 usage error") {
  CHECK(run_cli("check-ni --program " + corpus("c2.dp") + " --space " +
                corpus("uniform_scores.json"))
            .exit_code == 0);
  CHECK(run_cli("check-ni --program " + corpus("c1.dp") + " --space " +
                corpus("uniform_scores.json"))
            .exit_code == 1);
  CHECK(run_cli("check-ni --program " + corpus("c1.dp")).exit_code == 2); // no space
  CHECK(run_cli("no-such-command").exit_code != 0);
  CHECK(run_cli("spread --program " + corpus("no_such.dp") + " --space " +
                corpus("uniform_scores.json"))
            .exit_code == 2);
}

TEST_CASE("spread subcommand reports S = 1/5 for the mixed decision") {
  CliResult result = run_cli("spread --program " + corpus("c3.dp") + " --space " +
                             corpus("uniform_scores.json") + " --format json --no-timings");
  REQUIRE(result.exit_code == 0);
  Json report = Json::parse(result.output);
  CHECK(report.at("results").at("S").at("exact") == "1/5");
  CHECK(report.at("results").at("S").at("decimal") == "0.200000");
}

TEST_CASE("json reports are byte-identical across runs with --no-timings") {
  std::string args = "parity --program " + corpus("c2.dp") + " --space " +
                     corpus("uniform_scores.json") + " --format json --no-timings";
  CliResult a = run_cli(args);
  CliResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(Json::parse(a.output).at("results").at("holds") == true);
}

TEST_CASE("defines drive the credit threshold sweep") {
  CliResult peak = run_cli("spread --program " + corpus("credit.dp") + " --space " +
                           corpus("credit_space.json") +
                           " --define T=5 --format json --no-timings");
  REQUIRE(peak.exit_code == 0);
  CHECK(Json::parse(peak.output).at("results").at("S").at("exact") == "1");

  CliResult off = run_cli("spread --program " + corpus("credit.dp") + " --space " +
                          corpus("credit_space.json") +
                          " --define T=10 --format json --no-timings");
  CHECK(Json::parse(off.output).at("results").at("S").at("exact") == "0");
}

TEST_CASE("counterfactual subcommand is a verdict with metrics") {
  CliResult fair = run_cli("counterfactual --program " + corpus("premium_with_gender.dp") +
                           " --model " + corpus("insurance_model.scm") +
                           " --format json --no-timings");
  REQUIRE(fair.exit_code == 0);
  Json fair_report = Json::parse(fair.output);
  CHECK(fair_report.at("results").at("S").at("exact") == "0");
  CHECK(fair_report.at("results").at("diff_probability").at("exact") == "0");

  CliResult biased = run_cli("counterfactual --program " + corpus("premium_engine_only.dp") +
                             " --model " + corpus("insurance_model.scm") +
                             " --format json --no-timings");
  CHECK(biased.exit_code == 1);
  CHECK(Json::parse(biased.output).at("results").at("S").at("exact") == "37/101");
}

TEST_CASE("path-specific subcommand accepts a clamp list") {
  CliResult result = run_cli("path-specific --program " + corpus("c3.dp") + " --model " +
                             corpus("score_model.scm") +
                             " --paths zipCode --format json --no-timings");
  REQUIRE(result.exit_code == 0);
  CHECK(Json::parse(result.output).at("results").at("S").at("exact") == "67/350");
}

TEST_CASE("crosscheck prints both counts and exits cleanly") {
  CliResult result = run_cli("crosscheck --program " + corpus("c3.dp") + " --space " +
                             corpus("uniform_scores.json") + " --format json --no-timings");
  REQUIRE(result.exit_code == 0);
  Json report = Json::parse(result.output);
  CHECK(report.at("results").at("enumeration_count") == 12);
  CHECK(report.at("results").at("counting_count") == 12);
  CHECK(report.at("results").at("match") == true);
}

TEST_CASE("emit-cnf writes a DIMACS file") {
  std::string out = "/tmp/fairflow_test_emit.cnf";
  std::remove(out.c_str());
  CliResult result = run_cli("vulnerability --program " + corpus("c2.dp") + " --space " +
                             corpus("uniform_scores.json") + " --backend count --emit-cnf " +
                             out + " --format json --no-timings");
  REQUIRE(result.exit_code == 0);
  std::FILE* f = std::fopen(out.c_str(), "r");
  REQUIRE(f != nullptr);
  char line[256] = {0};
  bool has_header = false;
  while (std::fgets(line, sizeof line, f)) {
    if (std::string(line).rfind("p cnf ", 0) == 0) has_header = true;
  }
  std::fclose(f);
  CHECK(has_header);
  std::remove(out.c_str());
}

TEST_CASE("config files merge with flag overrides") {
  std::string cfg_path = "/tmp/fairflow_test_cfg.json";
  Json cfg = {
      {"analysis", "spread"},
      {"program", "c3.dp"},
      {"space", "uniform_scores.json"},
      {"no_timings", true},
      {"format", "json"},
  };
  {
    std::FILE* f = std::fopen(cfg_path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::string text = cfg.dump();
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  // config resolves relative paths against its own directory, so copy corpus
  // references as absolute ones instead
  cfg["program"] = corpus("c3.dp");
  cfg["space"] = corpus("uniform_scores.json");
  {
    std::FILE* f = std::fopen(cfg_path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::string text = cfg.dump();
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  CliResult from_config = run_cli("spread --config " + cfg_path + " --no-timings");
  REQUIRE(from_config.exit_code == 0);
  CHECK(Json::parse(from_config.output).at("results").at("S").at("exact") == "1/5");

  // flags win over config fields
  CliResult overridden =
      run_cli("spread --config " + cfg_path + " --program " + corpus("c1.dp") + " --no-timings");
  CHECK(Json::parse(overridden.output).at("results").at("S").at("exact") == "1");
  std::remove(cfg_path.c_str());
}

TEST_CASE("probability tables run through --cpt") {
  CliResult result = run_cli("vulnerability --cpt " + corpus("password_cpt.json") +
                             " --format json --no-timings");
  REQUIRE(result.exit_code == 0);
  CHECK(Json::parse(result.output).at("results").at("V").at("exact") == "2/3");
}

TEST_CASE("parity accepts a conditioning program") {
  CliResult result = run_cli("parity --program " + corpus("restricted_no_parity.dp") +
                             " --cond " + corpus("restricted_no_parity_cond.dp") + " --space " +
                             corpus("restricted_no_parity_space.json") +
                             " --format json --no-timings");
  CHECK(result.exit_code == 1); // conditional parity is violated
  Json report = Json::parse(result.output);
  CHECK(report.at("results").at("parity").at("max_gap").at("exact") == "1");
}

TEST_CASE("check-ni agrees across backends") {
  CliResult result = run_cli("check-ni --program " + corpus("c3.dp") + " --space " +
                             corpus("uniform_scores.json") +
                             " --backend both --format json --no-timings");
  CHECK(result.exit_code == 1);
  Json report = Json::parse(result.output);
  CHECK(report.at("results").at("count") == 12);
  CHECK(report.at("results").at("holds") == false);
  CHECK(report.at("results").at("witness").at("u").at("score") == 6);
}

TEST_CASE("reproduce runs the golden corpus") {
  CliResult result = run_cli("reproduce --corpus " + std::string(FF_CORPUS_DIR) +
                             " --format json --no-timings");
  REQUIRE(result.exit_code == 0);
  Json report = Json::parse(result.output);
  CHECK(report.at("results").at("failed") == 0);
  CHECK(report.at("results").at("ok") == true);
  CHECK(report.at("results").at("passed").get<int>() >= 19);
}
