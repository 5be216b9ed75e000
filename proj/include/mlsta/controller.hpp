#pragma once

// One sample of the discrete multi-layer super-twisting controller:
//
//   u_k     = ((u1 - 1) / Ts) s_k + v_k
//   v_{k+1} = v_k + u2 s_k
//
// with (u1, u2) from the eigenvalue-matched (or forward-Euler) discretization of
// the frozen closed loop at the gains of the selected layer.

#include <optional>
#include <string_view>

#include "mlsta/barrier.hpp"
#include "mlsta/discretization.hpp"
#include "mlsta/layers.hpp"

namespace mlsta {

enum class Scheme { Matching, Euler };

std::string_view to_string(Scheme scheme) noexcept;
/// Throws ConfigError for anything other than "matching" or "euler".
Scheme scheme_from_string(std::string_view name);

struct ControllerConfig {
    double alpha;
    BarrierLadder ladder;
    double ts;
    AdaptationLimits limits;
    GainPair initial_gains{1.0, 1.0};  // dynamic gains (k1d, k2d) after reset
    std::optional<double> u_max;  // symmetric saturation; off by default

    /// Default limits for alpha, s_floor = 1e-12 max(1, eps_1). Validates.
    ControllerConfig(BarrierLadder ladder, double ts);

    /// Throws ConfigError naming the violated constraint.
    void validate() const;
};

struct ControllerState {
    double v = 0.0;
    LayerId a = kAdaptiveMode;
    AdaptiveGainState adapt;
    long long sample_index = 0;
};

struct StepDiagnostics {
    LayerId layer;
    GainPair gains;
    DiscreteCoeffs coeffs;
    std::optional<EigenPair> eigenvalues;  // empty on the singular branch
    bool singular = false;
    double v_applied = 0.0;
};

struct StepResult {
    double u;
    ControllerState state;
    StepDiagnostics diag;
};

ControllerState reset(const ControllerConfig& cfg);

/// Throws DivergenceError if s_k is not finite.
StepResult control_step(double s_k, const ControllerState& state, const ControllerConfig& cfg,
                        Scheme scheme = Scheme::Matching);

}  // namespace mlsta
