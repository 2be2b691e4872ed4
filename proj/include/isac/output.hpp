#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "isac/harness.hpp"

namespace isac {

/// Version of the CSV column layout and JSON document layout. Bump when columns
/// change.
inline constexpr const char* kOutputFormatVersion = "1";
inline constexpr const char* kToolVersion = "1.0.0";

/// Header row of the sweep CSV.
std::string sweep_csv_header();

/// CSV with a mandatory header; absent values are empty fields.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

struct OutputMeta {
  std::string command;
  std::uint64_t seed = 0;
  std::string resolved_config;  ///< JSON text
  std::string scale;            ///< "configured" or "desk"
};

/// One JSON object {"meta": …, "rows": […]}, newline terminated.
void write_sweep_json(const SweepResult& result, const OutputMeta& meta, std::ostream& out);

/// One JSON object {"meta": …, "result": …}, newline terminated.
void write_estimate_json(const EstimateReport& report, const OutputMeta& meta, std::ostream& out);

}  // namespace isac
