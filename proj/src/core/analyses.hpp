#pragma once

#include "core/report.hpp"

namespace fairflow {

struct AnalysisOutcome {
  Json report;
  int exit_code = 0; // 0 success/holds, 1 property violated (errors are thrown)
};

// Executes one analysis request end to end: loads artifacts, runs the
// requested operation on the requested backend(s), and assembles the report.
// Throws AnalysisError on configuration or analysis failure; BackendMismatch
// when two backends disagree.
AnalysisOutcome run_analysis(const AnalysisConfig& config);

// Strips the timing section (used for byte-stable report comparison).
Json report_without_timings(Json report);

} // namespace fairflow
