#include "mlsta/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlsta/errors.hpp"

namespace mlsta {

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::Matching ? "matching" : "euler";
}

Scheme scheme_from_string(std::string_view name) {
    if (name == "matching") {
        return Scheme::Matching;
    }
    if (name == "euler") {
        return Scheme::Euler;
    }
    throw ConfigError("scheme", "expected 'matching' or 'euler', got '" + std::string(name) + "'");
}

ControllerConfig::ControllerConfig(BarrierLadder ladder_in, double ts_in)
    : alpha(ladder_in.alpha()),
      ladder(std::move(ladder_in)),
      ts(ts_in),
      limits(AdaptationLimits::defaults_for(alpha)) {
    limits.s_floor = 1e-12 * std::max(1.0, ladder.inner());
    validate();
}

void ControllerConfig::validate() const {
    if (!(ts > 0.0) || !std::isfinite(ts)) {
        throw ConfigError("Ts", "sampling period must be positive and finite");
    }
    if (alpha != ladder.alpha()) {
        throw ConfigError("alpha", "ladder was validated against a different alpha");
    }
    if (!(limits.s_floor > 0.0) || limits.s_floor > 1e-3 * ladder.inner()) {
        throw ConfigError("s_floor", "must lie in (0, 1e-3 * eps_1]");
    }
    if (!(limits.d_floor > 0.0)) {
        throw ConfigError("d_floor", "must be positive");
    }
    if (!(limits.gain_floor > 0.0) || !(limits.gain_floor <= limits.k1_cap) ||
        !(limits.gain_floor <= limits.k2_cap)) {
        throw ConfigError("gain_floor", "must be positive and below both gain caps");
    }
    if (!std::isfinite(limits.k1_cap) || !std::isfinite(limits.k2_cap)) {
        throw ConfigError("k1_cap", "gain caps must be finite");
    }
    if (u_max && !(*u_max > 0.0)) {
        throw ConfigError("u_max", "must be positive when set");
    }
}

ControllerState reset(const ControllerConfig& cfg) {
    ControllerState state;
    state.adapt.k1d = cfg.initial_gains.k1;
    state.adapt.k2d = cfg.initial_gains.k2;
    return state;
}

StepResult control_step(double s_k, const ControllerState& state, const ControllerConfig& cfg,
                        Scheme scheme) {
    if (!std::isfinite(s_k)) {
        throw DivergenceError(state.sample_index, "sliding variable is not finite");
    }
    const double s_abs = std::fabs(s_k);

    StepResult out{0.0, state, {}};
    StepDiagnostics& diag = out.diag;
    diag.layer = select_layer(s_abs, cfg.ladder, state.a);

    auto [gains, adapt] =
        diag.layer.is_adaptive()
            ? a0_update(state.adapt, s_k, cfg.ts, cfg.alpha, cfg.limits)
            : ai_update(state.adapt, s_k, diag.layer, cfg.ladder, cfg.ts, cfg.limits);
    diag.gains = gains;

    if (s_abs <= cfg.limits.s_floor) {
        // lim |s| -> 0 of the matched coefficients.
        diag.singular = true;
        diag.coeffs = DiscreteCoeffs{1.0, 0.0};
    } else if (scheme == Scheme::Matching) {
        const EigenPair eig = continuous_eigenvalues(gains.k1, gains.k2, s_abs, cfg.alpha);
        diag.eigenvalues = eig;
        diag.coeffs = discrete_coeffs(match_eigenvalues(eig, cfg.ts), cfg.ts);
    } else {
        diag.eigenvalues = continuous_eigenvalues(gains.k1, gains.k2, s_abs, cfg.alpha);
        diag.coeffs = euler_coeffs(gains.k1, gains.k2, s_abs, cfg.alpha, cfg.ts);
    }

    double u = ((diag.coeffs.u1_tilde - 1.0) / cfg.ts) * s_k + state.v;
    if (cfg.u_max) {
        u = std::clamp(u, -*cfg.u_max, *cfg.u_max);
    }
    diag.v_applied = state.v;

    out.u = u;
    out.state.v = state.v + diag.coeffs.u2_tilde * s_k;
    out.state.a = diag.layer;
    out.state.adapt = adapt;
    out.state.sample_index = state.sample_index + 1;
    return out;
}

}  // namespace mlsta
