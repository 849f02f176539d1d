/*
 * fairflow C API — exact information-flow and fairness analysis of small
 * decision programs.
 *
 * All functions return ff_status (FF_OK on success). On failure the
 * thread-local error state carries a code, a message and, for parse errors, a
 * source position. Handles are opaque; release each parse/analyze result with
 * the matching free function. Strings returned through char** are
 * heap-allocated and must be released with ff_string_free.
 *
 * A property that is checked and found violated is NOT an error: the call
 * returns FF_OK and the verdict is carried by the analysis result
 * (ff_analysis_exit_code returns 1).
 */
#ifndef FAIRFLOW_H
#define FAIRFLOW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t ff_status;

enum {
  FF_OK = 0,
  FF_ERR_SYNTAX = 1,
  FF_ERR_UNBOUND_VARIABLE = 2,
  FF_ERR_MISSING_RETURN = 3,
  FF_ERR_DOMAIN_MISMATCH = 4,
  FF_ERR_WIDTH_OVERFLOW_RISK = 5,
  FF_ERR_SPACE_TOO_LARGE = 6,
  FF_ERR_ZERO_MASS_GROUP = 7,
  FF_ERR_ZERO_MASS_CONDITION = 8,
  FF_ERR_NON_BINARY_OUTCOME = 9,
  FF_ERR_NON_UNIFORM_DISTRIBUTION = 10,
  FF_ERR_INCOMPLETE_TABLE = 11,
  FF_ERR_EXPOSURE_MISMATCH = 12,
  FF_ERR_PROTECTED_VARIABLE_CLAMPED = 13,
  FF_ERR_SOLVER_BUDGET_EXCEEDED = 14,
  FF_ERR_BACKEND_MISMATCH = 15,
  FF_ERR_DUPLICATE_DEFINITION = 16,
  FF_ERR_CONFIG = 17,
  FF_ERR_IO = 18,
  FF_ERR_INTERNAL = 19
};

/* library identification */
const char* ff_version(void);

/* thread-local error state (valid until the next API call on this thread) */
const char* ff_last_error_message(void);
int ff_last_error_code(void);
int ff_last_error_line(void); /* 0 when unknown */
int ff_last_error_col(void);

void ff_string_free(char* s);

/* ---- decision programs -------------------------------------------------- */

typedef struct ff_program ff_program;

/*
 * Parses and typechecks a `.dp` program. `defines_json` is an optional JSON
 * object mapping identifiers to integers (e.g. "{\"T\": 5}") substituted for
 * free identifiers; pass NULL for none. `origin` labels diagnostics.
 */
ff_status ff_program_parse(const char* source, const char* origin, const char* defines_json,
                           ff_program** out);
ff_status ff_program_parse_file(const char* path, const char* defines_json, ff_program** out);
void ff_program_free(ff_program* program);

/* canonical pretty-printed source (parses back to an identical AST) */
ff_status ff_program_pretty(const ff_program* program, char** out);

/* number of parameters, and the name/domain of one parameter */
ff_status ff_program_param_count(const ff_program* program, int32_t* out);
ff_status ff_program_param_name(const ff_program* program, int32_t index, char** out);

/*
 * Deterministic evaluation. `assignment_json` binds every parameter to an
 * in-domain integer, e.g. "{\"group\": 0, \"score\": 5}".
 */
ff_status ff_program_evaluate(const ff_program* program, const char* assignment_json,
                              int64_t* out_decision);

/* ---- analyses ------------------------------------------------------------ */

typedef struct ff_analysis ff_analysis;

/*
 * Runs one analysis described by a config JSON document (see the README for
 * the schema; the CLI builds exactly these documents). Relative file
 * references resolve against `base_dir` (NULL for the working directory).
 */
ff_status ff_analyze(const char* config_json, const char* base_dir, ff_analysis** out);

void ff_analysis_free(ff_analysis* analysis);

/* full report; include_timings=0 yields byte-stable output */
ff_status ff_analysis_report_json(const ff_analysis* analysis, int include_timings, char** out);
ff_status ff_analysis_report_text(const ff_analysis* analysis, char** out);

/* 0 = success / property holds, 1 = property violated */
int ff_analysis_exit_code(const ff_analysis* analysis);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FAIRFLOW_H */
