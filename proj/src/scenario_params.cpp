#include "mlsta/scenario_params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlsta/errors.hpp"

namespace mlsta {

double default_eps_plus(double eps_minus) { return std::min(1e-1, 1e3 * eps_minus); }

namespace {

void require_positive(double value, const char* key) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(key, "must be positive and finite");
    }
}

void require_finite(double value, const char* key) {
    if (!std::isfinite(value)) {
        throw ConfigError(key, "must be finite");
    }
}

BarrierLadder build_ladder(const ScenarioParams& p) {
    if (p.widths) {
        return validate_ladder(*p.widths, p.alpha);
    }
    require_positive(p.eps_minus, "eps_minus");
    const double eps_plus = p.eps_plus.value_or(default_eps_plus(p.eps_minus));
    if (p.barriers < 1) {
        throw ConfigError("N", "number of barriers must be at least 1");
    }
    if (p.barriers == 1) {
        return validate_ladder({p.eps_minus}, p.alpha);
    }
    return ladder_from_range(p.eps_minus, eps_plus, p.barriers, p.spacing, p.alpha);
}

}  // namespace

Scenario resolve(const ScenarioParams& p) {
    require_positive(p.alpha, "alpha");
    require_positive(p.ts, "Ts");
    require_positive(p.duration, "duration");
    require_finite(p.x0, "x0");
    require_finite(p.disturbance.amplitude, "disturbance.amplitude");
    require_finite(p.disturbance.omega, "disturbance.omega");
    require_finite(p.disturbance.bias, "disturbance.bias");
    require_finite(p.reference.amplitude, "reference.amplitude");
    require_finite(p.reference.omega, "reference.omega");
    require_positive(p.k1_init, "k1_init");
    require_positive(p.k2_init, "k2_init");
    if (!(p.window_fraction > 0.0 && p.window_fraction <= 1.0)) {
        throw ConfigError("window_fraction", "must lie in (0, 1]");
    }
    if (p.substeps && *p.substeps < 1) {
        throw ConfigError("substeps", "must be at least 1");
    }
    if (p.decimation && *p.decimation < 1) {
        throw ConfigError("decimation", "must be at least 1");
    }

    ControllerConfig cfg(build_ladder(p), p.ts);
    if (p.k1_cap) {
        require_positive(*p.k1_cap, "k1_cap");
        cfg.limits.k1_cap = *p.k1_cap;
        cfg.limits.k2_cap = *p.k1_cap * *p.k1_cap;
    }
    if (p.k2_cap) {
        require_positive(*p.k2_cap, "k2_cap");
        cfg.limits.k2_cap = *p.k2_cap;
    }
    cfg.limits.gain_floor = p.gain_floor;
    cfg.limits.d_floor = p.d_floor;
    if (p.s_floor) {
        cfg.limits.s_floor = *p.s_floor;
    }
    cfg.initial_gains = {p.k1_init, p.k2_init};
    cfg.u_max = p.u_max;
    cfg.validate();

    Scenario scn{std::move(cfg)};
    scn.duration = p.duration;
    scn.disturbance = p.disturbance;
    scn.reference = p.reference;
    scn.substeps = p.substeps.value_or(default_substeps(p.ts));
    scn.x0 = p.x0;
    return scn;
}

std::vector<std::string> warnings(const ScenarioParams& p) {
    std::vector<std::string> out;
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
        std::ostringstream os;
        os << "alpha = " << p.alpha << " lies outside (0, 1]; behaviour there is unexplored";
        out.push_back(os.str());
    }
    return out;
}

int resolved_decimation(const ScenarioParams& params, long long samples) {
    if (params.decimation) {
        return *params.decimation;
    }
    return samples > 2'000'000 ? 10 : 1;
}

const std::vector<std::string>& sweepable_params() {
    static const std::vector<std::string> names{"alpha", "eps_minus", "eps_plus", "Ts",
                                                "N",     "amplitude", "omega",    "bias",
                                                "x0",    "duration"};
    return names;
}

void set_param(ScenarioParams& p, std::string_view name, double value) {
    if (name == "alpha") {
        p.alpha = value;
    } else if (name == "eps_minus") {
        p.eps_minus = value;
    } else if (name == "eps_plus") {
        p.eps_plus = value;
    } else if (name == "Ts") {
        p.ts = value;
    } else if (name == "N") {
        if (value != std::floor(value) || value < 1.0) {
            throw ConfigError("N", "must be a positive integer");
        }
        p.barriers = static_cast<int>(value);
    } else if (name == "amplitude") {
        p.disturbance.amplitude = value;
    } else if (name == "omega") {
        p.disturbance.omega = value;
    } else if (name == "bias") {
        p.disturbance.bias = value;
    } else if (name == "x0") {
        p.x0 = value;
    } else if (name == "duration") {
        p.duration = value;
    } else {
        throw ConfigError(std::string(name), "not a sweepable parameter");
    }
}

ScenarioParams preset(std::string_view name) {
    ScenarioParams p;
    if (name == "nominal") {
        return p;
    }
    if (name == "reduced_amplitude") {
        p.disturbance.amplitude = 1e1;
        return p;
    }
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

}  // namespace mlsta
