#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlsta/plant.hpp"
#include "mlsta/scenario_params.hpp"

namespace mlsta {

/// Aggregates over the trailing `window_fraction` of a trace, except
/// `switch_count`, which counts layer changes over the whole run.
struct RunMetrics {
    double max_s_ss = 0.0;          // max |s| in the window
    double rms_tracking_ss = 0.0;   // rms of s in the window
    double s_peak_to_peak_ss = 0.0; // max s - min s in the window
    double inner_fraction = 0.0;    // fraction of window samples with |s| <= eps_1
    std::vector<double> occupancy;  // A0, A1 ... AN over the window
    long long switch_count = 0;
    double chatter_index = 0.0;     // sum |u_{k+1} - u_k| / window duration
    double window_fraction = 0.5;
    long long samples = 0;
    long long window_samples = 0;

    double innermost_occupancy() const { return occupancy.at(1); }
    double outermost_occupancy() const { return occupancy.back(); }
};

/// Throws std::invalid_argument on an empty trace or a window fraction outside (0, 1].
RunMetrics compute_metrics(std::span<const StepRecord> trace, const BarrierLadder& ladder,
                           double window_fraction = 0.5);

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

enum class SweepMode { OneAtATime, Cartesian };

struct SweepGrid {
    ScenarioParams base;
    std::vector<SweepAxis> axes;
    SweepMode mode = SweepMode::OneAtATime;
};

struct SweepPoint {
    std::size_t index = 0;
    std::vector<std::pair<std::string, double>> assignments;
    ScenarioParams params;
};

struct SweepRow {
    SweepPoint point;
    std::optional<RunMetrics> metrics;
    std::string error;  // non-empty if the point was rejected or diverged
};

/// Grid points in deterministic order. One-at-a-time varies each axis alone around the
/// base; cartesian enumerates the product with the last axis fastest.
/// Throws ConfigError on an empty axis or unknown parameter name.
std::vector<SweepPoint> expand_grid(const SweepGrid& grid);

struct SweepOptions {
    unsigned workers = 0;  // 0: MLSTA_WORKERS or hardware concurrency
    /// Called from worker threads with each point's trace; must be thread-safe
    /// across distinct points.
    std::function<void(const SweepPoint&, std::span<const StepRecord>)> on_trace;
};

unsigned resolve_workers(unsigned requested);

std::vector<SweepRow> run_sweep(const SweepGrid& grid, Scheme scheme,
                                const SweepOptions& options = {});

/// Runs one resolved scenario and returns its metrics (trace discarded).
RunMetrics run_and_measure(const ScenarioParams& params, Scheme scheme);

}  // namespace mlsta
