#pragma once

namespace fairflow {

inline constexpr const char* kToolName = "fairflow";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

} // namespace fairflow
