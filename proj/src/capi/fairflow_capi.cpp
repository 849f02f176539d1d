#include "fairflow/fairflow.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/analyses.hpp"
#include "core/parser.hpp"
#include "core/version.hpp"

namespace {

using fairflow::AnalysisError;
using fairflow::ErrorCode;

struct ErrorState {
  std::string message;
  int code = 0;
  int line = 0;
  int col = 0;
};

thread_local ErrorState g_error;

void clear_error() {
  g_error = ErrorState{};
}

ff_status set_error(const AnalysisError& e) {
  g_error.message = e.what();
  g_error.code = static_cast<int>(e.code());
  g_error.line = e.pos().line;
  g_error.col = e.pos().col;
  return static_cast<ff_status>(g_error.code);
}

ff_status set_error(ErrorCode code, const std::string& message) {
  g_error.message = message;
  g_error.code = static_cast<int>(code);
  g_error.line = 0;
  g_error.col = 0;
  return static_cast<ff_status>(g_error.code);
}

template <typename Fn>
ff_status guarded(Fn fn) {
  clear_error();
  try {
    return fn();
  } catch (const AnalysisError& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error(ErrorCode::Internal, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::map<std::string, std::int64_t> parse_defines(const char* defines_json) {
  std::map<std::string, std::int64_t> defines;
  if (!defines_json || !*defines_json) return defines;
  fairflow::Json doc;
  try {
    doc = fairflow::Json::parse(defines_json);
  } catch (const std::exception& e) {
    fairflow::fail(ErrorCode::Config, std::string("defines is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fairflow::fail(ErrorCode::Config, "defines must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number_integer()) {
      fairflow::fail(ErrorCode::Config, "define '" + key + "' must be an integer");
    }
    defines[key] = value.get<std::int64_t>();
  }
  return defines;
}

} // namespace

struct ff_program {
  fairflow::dsl::ValidatedProgram validated;
};

struct ff_analysis {
  fairflow::AnalysisOutcome outcome;
};

extern "C" {

const char* ff_version(void) {
  return fairflow::kToolVersion;
}

const char* ff_last_error_message(void) {
  return g_error.message.c_str();
}

int ff_last_error_code(void) {
  return g_error.code;
}

int ff_last_error_line(void) {
  return g_error.line;
}

int ff_last_error_col(void) {
  return g_error.col;
}

void ff_string_free(char* s) {
  std::free(s);
}

ff_status ff_program_parse(const char* source, const char* origin, const char* defines_json,
                           ff_program** out) {
  return guarded([&]() -> ff_status {
    if (!source || !out) return set_error(ErrorCode::Config, "null argument");
    fairflow::dsl::SourceProgram src;
    src.text = source;
    src.origin = origin && *origin ? origin : "<inline>";
    auto defines = parse_defines(defines_json);
    auto program = std::make_unique<ff_program>();
    program->validated = fairflow::dsl::typecheck(fairflow::dsl::parse_program(src, defines));
    *out = program.release();
    return FF_OK;
  });
}

ff_status ff_program_parse_file(const char* path, const char* defines_json, ff_program** out) {
  return guarded([&]() -> ff_status {
    if (!path || !out) return set_error(ErrorCode::Config, "null argument");
    auto defines = parse_defines(defines_json);
    auto program = std::make_unique<ff_program>();
    program->validated = fairflow::load_program(path, defines);
    *out = program.release();
    return FF_OK;
  });
}

void ff_program_free(ff_program* program) {
  delete program;
}

ff_status ff_program_pretty(const ff_program* program, char** out) {
  return guarded([&]() -> ff_status {
    if (!program || !out) return set_error(ErrorCode::Config, "null argument");
    *out = dup_string(fairflow::dsl::pretty_print(program->validated.program()));
    return FF_OK;
  });
}

ff_status ff_program_param_count(const ff_program* program, int32_t* out) {
  return guarded([&]() -> ff_status {
    if (!program || !out) return set_error(ErrorCode::Config, "null argument");
    *out = static_cast<int32_t>(program->validated.program().params.size());
    return FF_OK;
  });
}

ff_status ff_program_param_name(const ff_program* program, int32_t index, char** out) {
  return guarded([&]() -> ff_status {
    if (!program || !out) return set_error(ErrorCode::Config, "null argument");
    const auto& params = program->validated.program().params;
    if (index < 0 || static_cast<size_t>(index) >= params.size()) {
      return set_error(ErrorCode::Config, "parameter index out of range");
    }
    *out = dup_string(params[static_cast<size_t>(index)].name);
    return FF_OK;
  });
}

ff_status ff_program_evaluate(const ff_program* program, const char* assignment_json,
                              int64_t* out_decision) {
  return guarded([&]() -> ff_status {
    if (!program || !assignment_json || !out_decision) {
      return set_error(ErrorCode::Config, "null argument");
    }
    fairflow::Json doc;
    try {
      doc = fairflow::Json::parse(assignment_json);
    } catch (const std::exception& e) {
      return set_error(ErrorCode::Config, std::string("assignment is not valid JSON: ") + e.what());
    }
    fairflow::dsl::Assignment assignment;
    for (const auto& [key, value] : doc.items()) {
      if (!value.is_number_integer()) {
        return set_error(ErrorCode::Config, "assignment values must be integers");
      }
      assignment.values.emplace_back(key, value.get<std::int64_t>());
    }
    *out_decision = fairflow::dsl::evaluate(program->validated, assignment);
    return FF_OK;
  });
}

ff_status ff_analyze(const char* config_json, const char* base_dir, ff_analysis** out) {
  return guarded([&]() -> ff_status {
    if (!config_json || !out) return set_error(ErrorCode::Config, "null argument");
    fairflow::AnalysisConfig cfg =
        fairflow::parse_config(config_json, base_dir && *base_dir ? base_dir : ".");
    auto analysis = std::make_unique<ff_analysis>();
    analysis->outcome = fairflow::run_analysis(cfg);
    *out = analysis.release();
    return FF_OK;
  });
}

void ff_analysis_free(ff_analysis* analysis) {
  delete analysis;
}

ff_status ff_analysis_report_json(const ff_analysis* analysis, int include_timings, char** out) {
  return guarded([&]() -> ff_status {
    if (!analysis || !out) return set_error(ErrorCode::Config, "null argument");
    fairflow::Json report = include_timings
                                ? analysis->outcome.report
                                : fairflow::report_without_timings(analysis->outcome.report);
    *out = dup_string(report.dump(2) + "\n");
    return FF_OK;
  });
}

ff_status ff_analysis_report_text(const ff_analysis* analysis, char** out) {
  return guarded([&]() -> ff_status {
    if (!analysis || !out) return set_error(ErrorCode::Config, "null argument");
    *out = dup_string(fairflow::render_text(analysis->outcome.report));
    return FF_OK;
  });
}

int ff_analysis_exit_code(const ff_analysis* analysis) {
  return analysis ? analysis->outcome.exit_code : 2;
}

} // extern "C"
