#pragma once

// Config files, trace/metrics serialization and the run manifest.
//
// Traces are CSV with the header `t,x,x_ref,s,u,v,layer,k1,k2,d,phi`; every
// double is written in shortest round-trip form so re-parsing is bit-exact.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlsta/experiments.hpp"
#include "mlsta/scenario_params.hpp"

namespace mlsta {

inline constexpr std::string_view kVersion = "0.3.1";
inline constexpr std::string_view kTraceHeader = "t,x,x_ref,s,u,v,layer,k1,k2,d,phi";

/// Thrown on filesystem failures; the message carries the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All keys optional; unknown keys are rejected. Throws ConfigError.
ScenarioParams params_from_json(const nlohmann::json& doc);

/// Reads a JSON config. An empty file means "all defaults". Throws IoError or ConfigError.
ScenarioParams parse_config(const std::filesystem::path& path);

/// Every resolved parameter, including the derived defaults.
nlohmann::json resolved_config_json(const ScenarioParams& params);

std::string format_double(double value);

void write_trace(std::ostream& os, std::span<const StepRecord> trace, int decimation = 1);
void emit_trace(std::span<const StepRecord> trace, const std::filesystem::path& path,
                int decimation = 1);
std::vector<StepRecord> read_trace(const std::filesystem::path& path);

nlohmann::json metrics_json(const RunMetrics& metrics);
void emit_metrics(const RunMetrics& metrics, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path);

void emit_sweep(std::span<const SweepRow> rows, const std::filesystem::path& json_path,
                const std::filesystem::path& csv_path);

void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace mlsta
