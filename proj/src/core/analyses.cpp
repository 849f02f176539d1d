#include "core/analyses.hpp"

#include <chrono>
#include <fstream>
#include <functional>

#include "core/version.hpp"

namespace fairflow {

namespace {

using dsl::ValidatedProgram;

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json config_echo(const AnalysisConfig& cfg) {
  Json echo = Json::object();
  echo["analysis"] = cfg.analysis;
  if (!cfg.program_path.empty()) echo["program"] = cfg.program_path;
  if (!cfg.space_origin.empty()) echo["space"] = cfg.space_origin;
  if (!cfg.model_path.empty()) echo["model"] = cfg.model_path;
  if (!cfg.restriction_path.empty()) echo["restriction"] = cfg.restriction_path;
  if (!cfg.condition_path.empty()) echo["condition"] = cfg.condition_path;
  if (!cfg.cond_path.empty()) echo["cond"] = cfg.cond_path;
  if (!cfg.paths.empty()) echo["paths"] = cfg.paths;
  echo["backend"] = cfg.backend;
  echo["favorable"] = cfg.favorable;
  if (!cfg.defines.empty()) {
    Json defines = Json::object();
    for (const auto& [k, v] : cfg.defines) defines[k] = v;
    echo["defines"] = defines;
  }
  if (cfg.tol != "0") echo["tol"] = cfg.tol;
  return echo;
}

Json base_report(const AnalysisConfig& cfg) {
  Json report = Json::object();
  report["tool"] = kToolName;
  report["version"] = kToolVersion;
  report["schema"] = kReportSchemaVersion;
  report["analysis"] = cfg.analysis;
  report["config"] = config_echo(cfg);
  report["results"] = Json::object();
  return report;
}

ValidatedProgram require_program(const AnalysisConfig& cfg) {
  if (cfg.program_path.empty()) fail(ErrorCode::Config, "analysis needs --program");
  return load_program(cfg.resolve(cfg.program_path), cfg.defines);
}

InputSpace require_space(const AnalysisConfig& cfg) {
  if (cfg.space_json.is_null() || cfg.space_json.empty()) {
    fail(ErrorCode::Config, "analysis needs --space");
  }
  return space_from_json(cfg.space_json);
}

CausalModel require_model(const AnalysisConfig& cfg) {
  if (cfg.model_path.empty()) fail(ErrorCode::Config, "analysis needs --model");
  return load_model(cfg.resolve(cfg.model_path));
}

bool want_enum(const AnalysisConfig& cfg) { return cfg.backend != "count"; }
bool want_count(const AnalysisConfig& cfg) {
  if (cfg.backend == "count" || cfg.backend == "both") return true;
  if (cfg.backend == "enum") return false;
  fail(ErrorCode::Config, "backend must be enum, count or both");
}

void maybe_emit_cnf(const AnalysisConfig& cfg, const ValidatedProgram& p,
                    const InputSpace& space) {
  if (cfg.emit_cnf.empty()) return;
  engine::Circuit circuit = engine::bitblast(p);
  engine::CnfFormula formula = engine::to_cnf(circuit, SpaceBinding::bind(p, space), space);
  std::ofstream out(cfg.resolve(cfg.emit_cnf));
  if (!out) fail(ErrorCode::Io, "cannot write '" + cfg.emit_cnf + "'");
  engine::write_dimacs(formula, out);
}

Json wrap_note(const UniformWrapResult& wrapped) {
  Json notes = Json::array();
  for (const auto& w : wrapped.wrapped) {
    notes.push_back(Json{{"input", w.original}, {"selector", w.selector}, {"size", w.size}});
  }
  return notes;
}

// --- check-ni ------------------------------------------------------------

// Derives the noninterference verdict from the reachable (u, d) set: the
// program is interference-free iff every u admits exactly one decision.
Verdict ni_verdict_from_set(const ValidatedProgram& p, const InputSpace& space,
                            const engine::ProjectedCountResult& set) {
  const std::vector<engine::ReachablePoint>& pts = set.points;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].u_values != pts[i + 1].u_values) continue;
    // lexicographically first multi-decision u (points are sorted)
    SpaceBinding binding = SpaceBinding::bind(p, space);
    const Domain& gdom = space.protected_input.domain;
    std::vector<std::int64_t> args(static_cast<size_t>(p.param_count()), 0);
    for (std::int64_t i1 = 0; i1 < gdom.size(); ++i1) {
      for (std::int64_t i2 = 0; i2 < gdom.size(); ++i2) {
        if (i1 == i2) continue;
        binding.fill_args(gdom.value_at(i1), pts[i].u_values, args);
        std::int64_t d1 = dsl::evaluate_ordered(p, args.data());
        binding.fill_args(gdom.value_at(i2), pts[i].u_values, args);
        std::int64_t d2 = dsl::evaluate_ordered(p, args.data());
        if (d1 == d2) continue;
        Counterexample cx;
        cx.g1 = gdom.value_at(i1);
        cx.g2 = gdom.value_at(i2);
        cx.d1 = d1;
        cx.d2 = d2;
        for (size_t k = 0; k < space.unprotected.size(); ++k) {
          cx.u.emplace_back(space.unprotected[k].name, pts[i].u_values[k]);
        }
        return Verdict{false, cx};
      }
    }
  }
  return Verdict{true, std::nullopt};
}

AnalysisOutcome run_check_ni(const AnalysisConfig& cfg) {
  ValidatedProgram p = require_program(cfg);
  InputSpace space = require_space(cfg);
  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json& results = outcome.report["results"];
  results["property"] = "unconditional-noninterference";

  std::optional<Verdict> enum_verdict, count_verdict;
  if (want_enum(cfg)) {
    Stopwatch sw;
    CheckOptions opts{cfg.enumeration_options(), cfg.jobs};
    enum_verdict = check_unconditional_ni(p, space, opts);
    outcome.report["timings"]["enumeration_ms"] = sw.ms();
  }
  if (want_count(cfg)) {
    Stopwatch sw;
    engine::Circuit circuit = engine::bitblast(p);
    engine::CnfFormula formula =
        engine::to_cnf(circuit, SpaceBinding::bind(p, space), space);
    engine::ProjectedCountResult counted =
        engine::projected_count(formula, cfg.engine_options());
    count_verdict = ni_verdict_from_set(p, space, counted);
    outcome.report["timings"]["counting_ms"] = sw.ms();
    results["count"] = counted.count;
    results["u_size"] = space.u_point_count();
    maybe_emit_cnf(cfg, p, space);
  }
  if (enum_verdict && count_verdict && enum_verdict->holds != count_verdict->holds) {
    fail(ErrorCode::BackendMismatch,
         "noninterference verdict differs between enumeration and counting backends");
  }
  const Verdict& verdict = enum_verdict ? *enum_verdict : *count_verdict;
  results["holds"] = verdict.holds;
  results["witness"] =
      verdict.witness ? counterexample_to_json(*verdict.witness) : Json(nullptr);
  outcome.exit_code = verdict.holds ? 0 : 1;
  return outcome;
}

// --- check-restricted / check-conditional ---------------------------------

AnalysisOutcome run_flow_check(const AnalysisConfig& cfg, bool restricted) {
  ValidatedProgram p = require_program(cfg);
  InputSpace space = require_space(cfg);
  const std::string& aux_path = restricted ? cfg.restriction_path : cfg.condition_path;
  if (aux_path.empty()) {
    fail(ErrorCode::Config, restricted ? "check-restricted needs --restriction"
                                       : "check-conditional needs --condition");
  }
  ValidatedProgram aux = load_program(cfg.resolve(aux_path), cfg.defines);

  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json& results = outcome.report["results"];
  results["property"] =
      restricted ? "restricted-information-flow" : "conditional-information-flow";

  Stopwatch sw;
  CheckOptions opts{cfg.enumeration_options(), cfg.jobs};
  Verdict verdict = restricted ? check_restricted_if(p, aux, space, opts)
                               : check_conditional_if(p, aux, space, opts);
  outcome.report["timings"]["enumeration_ms"] = sw.ms();

  results["holds"] = verdict.holds;
  results["witness"] =
      verdict.witness ? counterexample_to_json(*verdict.witness) : Json(nullptr);
  results["caveat"] = kFlowVerdictCaveat;
  outcome.exit_code = verdict.holds ? 0 : 1;
  return outcome;
}

// --- parity ----------------------------------------------------------------

AnalysisOutcome run_parity(const AnalysisConfig& cfg) {
  ValidatedProgram p = require_program(cfg);
  InputSpace space = require_space(cfg);
  Rational tol = Rational::parse(cfg.tol);

  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json& results = outcome.report["results"];

  Stopwatch sw;
  CheckOptions opts{cfg.enumeration_options(), cfg.jobs};
  ParityResult parity;
  if (cfg.cond_path.empty()) {
    results["property"] = "demographic-parity";
    parity = demographic_parity(p, space, tol, opts);
  } else {
    results["property"] = "conditional-demographic-parity";
    ValidatedProgram cond = load_program(cfg.resolve(cfg.cond_path), cfg.defines);
    parity = conditional_demographic_parity(p, cond, space, tol, opts);
  }
  outcome.report["timings"]["enumeration_ms"] = sw.ms();
  results["parity"] = parity_to_json(parity, tol);
  results["holds"] = parity.holds;
  outcome.exit_code = parity.holds ? 0 : 1;
  return outcome;
}

// --- vulnerability ----------------------------------------------------------

AnalysisOutcome run_vulnerability(const AnalysisConfig& cfg) {
  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json& results = outcome.report["results"];

  if (!cfg.cpt_json.is_null() && !cfg.cpt_json.empty()) {
    CptDocument cpt = cpt_from_json(cfg.cpt_json);
    Stopwatch sw;
    MetricValue v = conditional_vulnerability(cpt.table, cpt.dist_g, cpt.dist_u);
    outcome.report["timings"]["cpt_ms"] = sw.ms();
    results["V"] = metric_to_json(v);
    return outcome;
  }

  ValidatedProgram p = require_program(cfg);
  InputSpace space = require_space(cfg);

  std::optional<MetricValue> enum_v, count_v;
  if (want_enum(cfg)) {
    Stopwatch sw;
    enum_v = conditional_vulnerability(p, space, cfg.enumeration_options());
    outcome.report["timings"]["enumeration_ms"] = sw.ms();
  }
  if (want_count(cfg)) {
    Stopwatch sw;
    UniformWrapResult wrapped = wrap_to_uniform(p, space);
    engine::CountingVulnerability cv =
        engine::vulnerability_by_counting(wrapped.program, wrapped.space, cfg.engine_options());
    outcome.report["timings"]["counting_ms"] = sw.ms();
    count_v = cv.value;
    results["count"] = cv.count;
    results["u_size"] = cv.u_size;
    results["g_size"] = cv.g_size;
    if (wrapped.changed) results["wrapped"] = wrap_note(wrapped);
    maybe_emit_cnf(cfg, wrapped.program, wrapped.space);
  }
  if (enum_v && count_v && enum_v->exact != count_v->exact) {
    fail(ErrorCode::BackendMismatch, "V differs between backends: " + enum_v->exact.to_string() +
                                         " vs " + count_v->exact.to_string());
  }
  results["V"] = metric_to_json(enum_v ? *enum_v : *count_v);
  if (enum_v && count_v) results["backends_agree"] = true;
  return outcome;
}

// --- spread ------------------------------------------------------------------

AnalysisOutcome run_spread(const AnalysisConfig& cfg) {
  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json& results = outcome.report["results"];

  if (!cfg.cpt_json.is_null() && !cfg.cpt_json.empty()) {
    CptDocument cpt = cpt_from_json(cfg.cpt_json);
    Stopwatch sw;
    SpreadResult s = fairness_spread(cpt.table, cpt.dist_u, cfg.favorable);
    outcome.report["timings"]["cpt_ms"] = sw.ms();
    results["S"] = metric_to_json(s.value);
    return outcome;
  }

  ValidatedProgram p = require_program(cfg);
  InputSpace space = require_space(cfg);

  std::optional<SpreadResult> enum_s;
  std::optional<engine::CountingSpread> count_s;
  if (want_enum(cfg)) {
    Stopwatch sw;
    enum_s = fairness_spread(p, space, cfg.favorable, cfg.enumeration_options(), cfg.jobs);
    MetricValue via_v =
        fairness_spread_via_vulnerability(p, space, cfg.favorable, cfg.enumeration_options());
    outcome.report["timings"]["enumeration_ms"] = sw.ms();
    if (via_v.exact != enum_s->value.exact) {
      fail(ErrorCode::BackendMismatch,
           "spread and |G|*V-1 disagree on the enumeration backend: " +
               enum_s->value.exact.to_string() + " vs " + via_v.exact.to_string());
    }
    results["V"] = metric_to_json(MetricValue::of(
        (via_v.exact + Rational(1)) / Rational::from_int64(space.group_count()),
        Backend::Enumeration));
  }
  if (want_count(cfg)) {
    Stopwatch sw;
    UniformWrapResult wrapped = wrap_to_uniform(p, space);
    count_s = engine::spread_by_counting(wrapped.program, wrapped.space, cfg.favorable,
                                         cfg.engine_options());
    outcome.report["timings"]["counting_ms"] = sw.ms();
    results["count"] = count_s->count;
    results["u_size"] = wrapped.space.u_point_count();
    if (wrapped.changed) results["wrapped"] = wrap_note(wrapped);
    maybe_emit_cnf(cfg, wrapped.program, wrapped.space);
  }
  if (enum_s && count_s && enum_s->value.exact != count_s->value.exact) {
    fail(ErrorCode::BackendMismatch,
         "S differs between backends: " + enum_s->value.exact.to_string() + " vs " +
             count_s->value.exact.to_string());
  }
  results["S"] = metric_to_json(enum_s ? enum_s->value : count_s->value);
  if (enum_s) results["perU"] = per_u_to_json(space, enum_s->per_u);
  if (enum_s && count_s) results["backends_agree"] = true;
  return outcome;
}

// --- causal analyses -----------------------------------------------------------

AnalysisOutcome run_counterfactual(const AnalysisConfig& cfg) {
  ValidatedProgram p = require_program(cfg);
  CausalModel model = require_model(cfg);
  CausalOptions opts{cfg.enumeration_options(), cfg.jobs, cfg.favorable};

  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json& results = outcome.report["results"];
  results["property"] = "counterfactual-fairness";

  Stopwatch sw;
  SpreadResult spread = spread_over_background(p, model, opts);
  Verdict verdict = check_counterfactual_fairness(p, model, opts);
  MetricValue diff = prob_deviating_counterfactual(p, model, opts);
  outcome.report["timings"]["enumeration_ms"] = sw.ms();

  if (verdict.holds != spread.value.exact.is_zero()) {
    fail(ErrorCode::Internal, "counterfactual verdict and spread disagree");
  }

  if (want_count(cfg)) {
    Stopwatch sw2;
    CausalFrame frame = build_causal_frame(p, model);
    UniformWrapResult wrapped = wrap_to_uniform(frame.symbolic, frame.symbolic_space);
    engine::CountingSpread cs = engine::spread_by_counting(wrapped.program, wrapped.space,
                                                           cfg.favorable, cfg.engine_options());
    outcome.report["timings"]["counting_ms"] = sw2.ms();
    if (cs.value.exact != spread.value.exact) {
      fail(ErrorCode::BackendMismatch,
           "background spread differs between backends: " + spread.value.exact.to_string() +
               " vs " + cs.value.exact.to_string());
    }
    results["count"] = cs.count;
    results["backends_agree"] = true;
  }

  results["holds"] = verdict.holds;
  results["witness"] =
      verdict.witness ? counterexample_to_json(*verdict.witness) : Json(nullptr);
  results["S"] = metric_to_json(spread.value);
  results["diff_probability"] = metric_to_json(diff);
  outcome.exit_code = verdict.holds ? 0 : 1;
  return outcome;
}

AnalysisOutcome run_path_specific(const AnalysisConfig& cfg) {
  ValidatedProgram p = require_program(cfg);
  CausalModel model = require_model(cfg);
  if (cfg.paths.empty()) fail(ErrorCode::Config, "path-specific analysis needs --paths");
  CausalOptions opts{cfg.enumeration_options(), cfg.jobs, cfg.favorable};

  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json& results = outcome.report["results"];

  Stopwatch sw;
  SpreadResult spread = path_specific_spread(p, model, cfg.paths, opts);
  outcome.report["timings"]["enumeration_ms"] = sw.ms();

  if (want_count(cfg)) {
    Stopwatch sw2;
    CausalFrame frame = build_causal_frame(p, model, cfg.paths);
    UniformWrapResult wrapped = wrap_to_uniform(frame.symbolic, frame.symbolic_space);
    engine::CountingSpread cs = engine::spread_by_counting(wrapped.program, wrapped.space,
                                                           cfg.favorable, cfg.engine_options());
    outcome.report["timings"]["counting_ms"] = sw2.ms();
    if (cs.value.exact != spread.value.exact) {
      fail(ErrorCode::BackendMismatch,
           "path-specific spread differs between backends: " + spread.value.exact.to_string() +
               " vs " + cs.value.exact.to_string());
    }
    results["count"] = cs.count;
    results["backends_agree"] = true;
  }

  results["paths"] = cfg.paths;
  results["S"] = metric_to_json(spread.value);
  return outcome;
}

// --- crosscheck -------------------------------------------------------------------

AnalysisOutcome run_crosscheck(const AnalysisConfig& cfg) {
  ValidatedProgram p = require_program(cfg);
  InputSpace space = require_space(cfg);

  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json& results = outcome.report["results"];

  UniformWrapResult wrapped = wrap_to_uniform(p, space);
  engine::CrossCheckResult cc =
      engine::cross_check(wrapped.program, wrapped.space, cfg.engine_options());
  if (wrapped.changed) results["wrapped"] = wrap_note(wrapped);
  results["match"] = true;
  results["enumeration_count"] = cc.enumeration_count;
  results["counting_count"] = cc.counting_count;
  outcome.report["timings"]["enumeration_ms"] = cc.enumeration_ms;
  outcome.report["timings"]["counting_ms"] = cc.counting_ms;
  maybe_emit_cnf(cfg, wrapped.program, wrapped.space);
  return outcome;
}

// --- reproduce ----------------------------------------------------------------------

struct GoldenCase {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

class GoldenRunner {
 public:
  explicit GoldenRunner(const AnalysisConfig& cfg) : cfg_(cfg) {
    corpus_ = cfg.resolve(cfg.corpus_dir);
  }

  void check(const std::string& name, const std::string& expected,
             const std::function<std::string()>& compute) {
    GoldenCase c;
    c.name = name;
    c.expected = expected;
    try {
      c.actual = compute();
      c.pass = c.actual == expected;
    } catch (const AnalysisError& e) {
      c.actual = std::string("error: ") + e.what();
      c.pass = false;
    }
    cases_.push_back(std::move(c));
  }

  std::string path(const std::string& name) const { return corpus_ + "/" + name; }

  ValidatedProgram program(const std::string& name,
                           const std::map<std::string, std::int64_t>& defines = {}) const {
    return load_program(path(name), defines);
  }

  InputSpace space(const std::string& name) const {
    return space_from_json(Json::parse(read_file(path(name))));
  }

  CausalModel model(const std::string& name) const { return load_model(path(name)); }

  const std::vector<GoldenCase>& cases() const { return cases_; }

 private:
  const AnalysisConfig& cfg_;
  std::string corpus_;
  std::vector<GoldenCase> cases_;
};

std::string verdict_str(bool holds) { return holds ? "holds" : "violated"; }

AnalysisOutcome run_reproduce(const AnalysisConfig& cfg) {
  GoldenRunner run(cfg);
  EnumerationOptions eopts = cfg.enumeration_options();
  engine::EngineOptions engopts = cfg.engine_options();

  // quantitative table: count / V / S on the uniform-score setting, both backends
  struct Row {
    const char* program;
    const char* count;
    const char* v;
    const char* s;
  };
  for (const Row& row : {Row{"c1.dp", "20", "1/5", "1"}, Row{"c2.dp", "10", "1/10", "0"},
                         Row{"c3.dp", "12", "3/25", "1/5"}}) {
    run.check(std::string(row.program) + " count/V/S (both backends)",
              std::string(row.count) + " " + row.v + " " + row.s, [&] {
                ValidatedProgram p = run.program(row.program);
                InputSpace space = run.space("uniform_scores.json");
                engine::CrossCheckResult cc = engine::cross_check(p, space, engopts);
                MetricValue v = conditional_vulnerability(p, space, eopts);
                SpreadResult s = fairness_spread(p, space, 1, eopts);
                MetricValue s2 = fairness_spread_via_vulnerability(p, space, 1, eopts);
                engine::CountingVulnerability cv =
                    engine::vulnerability_by_counting(p, space, engopts);
                if (cc.enumeration_count != cc.counting_count) return std::string("count mismatch");
                if (s2.exact != s.value.exact) return std::string("identity violated");
                if (cv.value.exact != v.exact) return std::string("V mismatch");
                return std::to_string(cc.counting_count) + " " + v.exact.to_string() + " " +
                       s.value.exact.to_string();
              });
  }

  run.check("c3 skewed scores via uniform wrapper (|U|,count,V,S)", "100 130 13/100 3/10", [&] {
    ValidatedProgram p = run.program("c3.dp");
    InputSpace space = run.space("skewed_scores.json");
    UniformWrapResult wrapped = wrap_to_uniform(p, space);
    engine::CountingVulnerability cv =
        engine::vulnerability_by_counting(wrapped.program, wrapped.space, engopts);
    engine::CrossCheckResult cc = engine::cross_check(wrapped.program, wrapped.space, engopts);
    SpreadResult native = fairness_spread(p, space, 1, eopts);
    engine::CountingSpread cs =
        engine::spread_by_counting(wrapped.program, wrapped.space, 1, engopts);
    if (cc.enumeration_count != cc.counting_count) return std::string("count mismatch");
    if (cs.value.exact != native.value.exact) return std::string("wrapper changed S");
    return std::to_string(wrapped.space.u_point_count()) + " " + std::to_string(cv.count) + " " +
           cv.value.exact.to_string() + " " + native.value.exact.to_string();
  });

  run.check("score model: background spread of c2 (2dp)", "131/490 0.27", [&] {
    SpreadResult s =
        spread_over_background(run.program("c2.dp"), run.model("score_model.scm"),
                               CausalOptions{eopts, cfg.jobs, 1});
    return s.value.exact.to_string() + " " + s.value.exact.to_decimal(2);
  });
  run.check("score model: background spread of c3 (2dp)", "8/35 0.23", [&] {
    SpreadResult s =
        spread_over_background(run.program("c3.dp"), run.model("score_model.scm"),
                               CausalOptions{eopts, cfg.jobs, 1});
    return s.value.exact.to_string() + " " + s.value.exact.to_decimal(2);
  });
  run.check("score model: deviation probability bounded by spread", "ok", [&] {
    CausalOptions copts{eopts, cfg.jobs, 1};
    for (const char* prog : {"c2.dp", "c3.dp"}) {
      MetricValue diff =
          prob_deviating_counterfactual(run.program(prog), run.model("score_model.scm"), copts);
      SpreadResult s =
          spread_over_background(run.program(prog), run.model("score_model.scm"), copts);
      if (diff.exact > s.value.exact) return std::string("bound violated for ") + prog;
    }
    return std::string("ok");
  });

  run.check("path-specific (zipCode): c2 spread", "0", [&] {
    SpreadResult s = path_specific_spread(run.program("c2.dp"), run.model("score_model.scm"),
                                          {"zipCode"}, CausalOptions{eopts, cfg.jobs, 1});
    return s.value.exact.to_string();
  });
  run.check("path-specific (zipCode): c3 spread (2dp)", "67/350 0.19", [&] {
    SpreadResult s = path_specific_spread(run.program("c3.dp"), run.model("score_model.scm"),
                                          {"zipCode"}, CausalOptions{eopts, cfg.jobs, 1});
    return s.value.exact.to_string() + " " + s.value.exact.to_decimal(2);
  });

  run.check("insurance: gender+engine classifier is counterfactually fair", "holds 0", [&] {
    CausalOptions copts{eopts, cfg.jobs, 1};
    Verdict v = check_counterfactual_fairness(run.program("premium_with_gender.dp"),
                                              run.model("insurance_model.scm"), copts);
    SpreadResult s = spread_over_background(run.program("premium_with_gender.dp"),
                                            run.model("insurance_model.scm"), copts);
    return verdict_str(v.holds) + " " + s.value.exact.to_string();
  });
  run.check("insurance: engine-only classifier spread = 37/101 (0.36 +/- 0.02)", "37/101 ok",
            [&] {
              SpreadResult s = spread_over_background(run.program("premium_engine_only.dp"),
                                                      run.model("insurance_model.scm"),
                                                      CausalOptions{eopts, cfg.jobs, 1});
              Rational err = (s.value.exact - Rational::parse("36/100")).abs();
              bool close = err <= Rational::parse("2/100");
              return s.value.exact.to_string() + (close ? " ok" : " out-of-tolerance");
            });
  run.check("insurance: deviation probability equals spread (two groups)", "ok", [&] {
    CausalOptions copts{eopts, cfg.jobs, 1};
    for (const char* prog : {"premium_engine_only.dp", "premium_with_gender.dp"}) {
      MetricValue diff = prob_deviating_counterfactual(run.program(prog),
                                                       run.model("insurance_model.scm"), copts);
      SpreadResult s =
          spread_over_background(run.program(prog), run.model("insurance_model.scm"), copts);
      if (diff.exact != s.value.exact) return std::string("not equal for ") + prog;
    }
    return std::string("ok");
  });

  run.check("credit threshold sweep: S(T) = min(2T, 20-2T)/10 for T in 0..10", "ok", [&] {
    InputSpace space = run.space("credit_space.json");
    for (std::int64_t t = 0; t <= 10; ++t) {
      ValidatedProgram p = run.program("credit.dp", {{"T", t}});
      SpreadResult s = fairness_spread(p, space, 1, eopts);
      Rational expected = Rational::from_int64(std::min(2 * t, 20 - 2 * t)) / Rational(10);
      if (s.value.exact != expected) {
        return "S(" + std::to_string(t) + ") = " + s.value.exact.to_string();
      }
    }
    return std::string("ok");
  });
  run.check("credit T=5: demographic parity holds yet spread = 1", "holds 1", [&] {
    ValidatedProgram p = run.program("credit.dp", {{"T", 5}});
    InputSpace space = run.space("credit_space.json");
    ParityResult parity = demographic_parity(p, space, Rational(0), {eopts, cfg.jobs});
    SpreadResult s = fairness_spread(p, space, 1, eopts);
    return verdict_str(parity.holds) + " " + s.value.exact.to_string();
  });

  run.check("restricted flow without conditional parity (regression)",
            "restricted=holds parity=violated A=1 B=0", [&] {
              ValidatedProgram p = run.program("restricted_no_parity.dp");
              ValidatedProgram r = run.program("restricted_no_parity_classes.dp");
              ValidatedProgram cond = run.program("restricted_no_parity_cond.dp");
              InputSpace space = run.space("restricted_no_parity_space.json");
              Verdict rif = check_restricted_if(p, r, space, {eopts, cfg.jobs});
              ParityResult parity =
                  conditional_demographic_parity(p, cond, space, Rational(0), {eopts, cfg.jobs});
              int one = parity.table.outcomes.size() == 2 ? 1 : 0;
              return "restricted=" + verdict_str(rif.holds) +
                     " parity=" + verdict_str(parity.holds) +
                     " A=" + parity.table.rows[0][static_cast<size_t>(one)].to_string() +
                     " B=" + parity.table.rows[1][static_cast<size_t>(one)].to_string();
            });

  run.check("parity without noninterference", "parity=holds ni=violated", [&] {
    ValidatedProgram p = run.program("parity_no_ni.dp");
    InputSpace space = run.space("parity_no_ni_space.json");
    ParityResult parity = demographic_parity(p, space, Rational(0), {eopts, cfg.jobs});
    Verdict ni = check_unconditional_ni(p, space, {eopts, cfg.jobs});
    return "parity=" + verdict_str(parity.holds) + " ni=" + verdict_str(ni.holds);
  });

  run.check("flow verdicts: restricted and conditional checks on c3 and the group>=8 variant",
            "c3+R=holds c3v+R=violated c3+psi=holds c3v+psi=holds", [&] {
              InputSpace space = run.space("uniform_scores.json");
              ValidatedProgram c3 = run.program("c3.dp");
              ValidatedProgram c3v = run.program("c3_group8.dp");
              ValidatedProgram r = run.program("c3_restriction.dp");
              ValidatedProgram psi = run.program("c3_declass.dp");
              CheckOptions opts{eopts, cfg.jobs};
              return "c3+R=" + verdict_str(check_restricted_if(c3, r, space, opts).holds) +
                     " c3v+R=" + verdict_str(check_restricted_if(c3v, r, space, opts).holds) +
                     " c3+psi=" + verdict_str(check_conditional_if(c3, psi, space, opts).holds) +
                     " c3v+psi=" + verdict_str(check_conditional_if(c3v, psi, space, opts).holds);
            });

  run.check("password checker: conditional vulnerability (cpt and program)", "2/3 2/3", [&] {
    CptDocument cpt = cpt_from_json(Json::parse(read_file(run.path("password_cpt.json"))));
    MetricValue v1 = conditional_vulnerability(cpt.table, cpt.dist_g, cpt.dist_u);
    MetricValue v2 = conditional_vulnerability(run.program("password.dp"),
                                               run.space("password_space.json"), eopts);
    return v1.exact.to_string() + " " + v2.exact.to_string();
  });

  run.check("skewed two-group setting: equal V, different S", "V 49/50 49/50 S 1/2 0", [&] {
    CptDocument a = cpt_from_json(Json::parse(read_file(run.path("skewed_groups_cpt_a.json"))));
    CptDocument b = cpt_from_json(Json::parse(read_file(run.path("skewed_groups_cpt_b.json"))));
    MetricValue va = conditional_vulnerability(a.table, a.dist_g, a.dist_u);
    MetricValue vb = conditional_vulnerability(b.table, b.dist_g, b.dist_u);
    SpreadResult sa = fairness_spread(a.table, a.dist_u, 1);
    SpreadResult sb = fairness_spread(b.table, b.dist_u, 1);
    return "V " + va.exact.to_string() + " " + vb.exact.to_string() + " S " +
           sa.value.exact.to_string() + " " + sb.value.exact.to_string();
  });

  AnalysisOutcome outcome;
  outcome.report = base_report(cfg);
  Json cases = Json::array();
  int passed = 0, failed = 0;
  for (const auto& c : run.cases()) {
    cases.push_back(Json{{"name", c.name},
                         {"expected", c.expected},
                         {"actual", c.actual},
                         {"pass", c.pass}});
    (c.pass ? passed : failed)++;
  }
  outcome.report["results"]["cases"] = cases;
  outcome.report["results"]["passed"] = passed;
  outcome.report["results"]["failed"] = failed;
  outcome.report["results"]["ok"] = failed == 0;
  outcome.exit_code = failed == 0 ? 0 : 1;
  return outcome;
}

} // namespace

Json report_without_timings(Json report) {
  report.erase("timings");
  return report;
}

AnalysisOutcome run_analysis(const AnalysisConfig& cfg) {
  Stopwatch total;
  AnalysisOutcome outcome;
  if (cfg.analysis == "check-ni") {
    outcome = run_check_ni(cfg);
  } else if (cfg.analysis == "check-restricted") {
    outcome = run_flow_check(cfg, /*restricted=*/true);
  } else if (cfg.analysis == "check-conditional") {
    outcome = run_flow_check(cfg, /*restricted=*/false);
  } else if (cfg.analysis == "parity") {
    outcome = run_parity(cfg);
  } else if (cfg.analysis == "vulnerability") {
    outcome = run_vulnerability(cfg);
  } else if (cfg.analysis == "spread") {
    outcome = run_spread(cfg);
  } else if (cfg.analysis == "counterfactual") {
    outcome = run_counterfactual(cfg);
  } else if (cfg.analysis == "path-specific") {
    outcome = run_path_specific(cfg);
  } else if (cfg.analysis == "crosscheck") {
    outcome = run_crosscheck(cfg);
  } else if (cfg.analysis == "reproduce") {
    outcome = run_reproduce(cfg);
  } else {
    fail(ErrorCode::Config, "unknown analysis '" + cfg.analysis + "'");
  }
  outcome.report["timings"]["total_ms"] = total.ms();
  if (cfg.no_timings) outcome.report = report_without_timings(std::move(outcome.report));
  return outcome;
}

} // namespace fairflow
