#pragma once

// Unresolved scenario parameters as they appear in a config file. Anything left
// unset resolves to the default tuning (alpha = 1/2, eps- = 1e-4,
// eps+ = min{1e-1, 1e3 eps-}, Ts = 1e-5) when `resolve` builds a Scenario.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlsta/plant.hpp"

namespace mlsta {

struct ScenarioParams {
    double alpha = 0.5;
    double eps_minus = 1e-4;
    std::optional<double> eps_plus;            // default min{1e-1, 1e3 eps_minus}
    int barriers = 2;                          // N
    Spacing spacing = Spacing::Linear;
    std::optional<std::vector<double>> widths; // explicit ladder, overrides the range
    double ts = 1e-5;
    std::optional<int> substeps;               // default: default_substeps(ts)
    double duration = 10.0;
    double x0 = 0.0;
    DisturbanceSpec disturbance;
    ReferenceSpec reference;
    std::optional<double> k1_cap;              // default max(25000^alpha, 5)
    std::optional<double> k2_cap;              // default k1_cap^2
    double gain_floor = 1e-6;
    std::optional<double> s_floor;             // default 1e-12 max(1, eps_1)
    double d_floor = 1e-9;
    double k1_init = 1.0;
    double k2_init = 1.0;
    std::optional<double> u_max;
    double window_fraction = 0.5;
    std::optional<int> decimation;             // default 1, or 10 above 2e6 rows
    Scheme scheme = Scheme::Matching;
};

double default_eps_plus(double eps_minus);

/// Builds the ladder, controller config and scenario. Throws ConfigError.
Scenario resolve(const ScenarioParams& params);

/// Soft diagnostics that do not block a run (e.g. alpha outside (0, 1]).
std::vector<std::string> warnings(const ScenarioParams& params);

int resolved_decimation(const ScenarioParams& params, long long samples);

/// Names accepted by `set_param`: alpha, eps_minus, eps_plus, Ts, N, amplitude,
/// omega, bias, x0, duration.
const std::vector<std::string>& sweepable_params();

/// Throws ConfigError for unknown names or non-integral N.
void set_param(ScenarioParams& params, std::string_view name, double value);

/// Named presets: "nominal" and "reduced_amplitude" (disturbance amplitude 1e1).
ScenarioParams preset(std::string_view name);

}  // namespace mlsta
