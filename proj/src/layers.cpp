#include "mlsta/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlsta {

AdaptationLimits AdaptationLimits::defaults_for(double alpha) {
    AdaptationLimits limits;
    limits.k1_cap = std::max(std::pow(25000.0, alpha), 5.0);
    limits.k2_cap = limits.k1_cap * limits.k1_cap;
    return limits;
}

LayerId select_layer(double s_abs, const BarrierLadder& ladder, LayerId previous) {
    const auto widths = ladder.widths();
    if (s_abs < widths.front()) {
        return LayerId{1};
    }
    if (s_abs >= widths.back() || previous.is_adaptive()) {
        return kAdaptiveMode;
    }
    // First width strictly above s_abs: eps_{i-1} <= s_abs < eps_i.
    const auto it = std::upper_bound(widths.begin(), widths.end(), s_abs);
    return LayerId{static_cast<std::size_t>(it - widths.begin()) + 1};
}

namespace {

double clamp_gain(double value, double floor, double cap) {
    return std::clamp(value, floor, cap);
}

}  // namespace

std::pair<GainPair, AdaptiveGainState> a0_update(const AdaptiveGainState& state, double s,
                                                 double ts, double alpha,
                                                 const AdaptationLimits& limits) {
    const double s_dot = state.have_prev ? (s - state.s_prev) / ts : 0.0;
    const double s_dot_abs = std::max(std::fabs(s_dot), limits.d_floor);
    const double s_abs = std::max(std::fabs(s), limits.s_floor);

    AdaptiveGainState next = state;
    next.k1d = clamp_gain(state.k1d + ts * state.k1d / s_dot_abs, limits.gain_floor,
                          limits.k1_cap);
    next.k2d = clamp_gain(state.k2d + ts * state.k2d / (2.0 * std::pow(s_abs, 1.0 - alpha)),
                          limits.gain_floor, limits.k2_cap);
    next.s_prev = s;
    next.have_prev = true;
    return {GainPair{next.k1d, next.k2d}, next};
}

std::pair<GainPair, AdaptiveGainState> ai_update(const AdaptiveGainState& state, double s,
                                                 LayerId layer, const BarrierLadder& ladder,
                                                 double ts, const AdaptationLimits& limits) {
    if (layer.is_adaptive() || layer.value > ladder.size()) {
        throw std::out_of_range("ai_update: layer must be a barrier layer of the ladder");
    }
    AdaptiveGainState next = state;
    const double decay = 1.0 - ts;
    next.k1d = clamp_gain(state.k1d * decay, limits.gain_floor, limits.k1_cap);
    next.k2d = clamp_gain(state.k2d * decay, limits.gain_floor, limits.k2_cap);
    next.s_prev = s;
    next.have_prev = true;
    return {barrier_gains(std::fabs(s), ladder.width(layer.value), ladder.alpha()), next};
}

}  // namespace mlsta
