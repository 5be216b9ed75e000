#pragma once

// Nested layer selection with one-step memory, and the two gain modulation
// modes: A0 (dynamic adaptation) and A_i (barrier of width eps_i).

#include <compare>
#include <cstddef>
#include <utility>

#include "mlsta/barrier.hpp"

namespace mlsta {

/// 0 is the dynamic-adaptation mode A0; i >= 1 is barrier layer A_i.
struct LayerId {
    std::size_t value = 0;

    constexpr bool is_adaptive() const noexcept { return value == 0; }
    friend constexpr auto operator<=>(LayerId, LayerId) = default;
};

inline constexpr LayerId kAdaptiveMode{0};

/// Caps and floors that keep the dynamic gains finite.
struct AdaptationLimits {
    double k1_cap = 5.0;
    double k2_cap = 25.0;
    double gain_floor = 1e-6;
    double s_floor = 1e-12;    // lower bound on |s| in the k2d growth rate
    double d_floor = 1e-9;     // lower bound on the |ds/dt| estimate

    /// Default caps: k1 cap = max(25000^alpha, 5), k2 cap = its square.
    static AdaptationLimits defaults_for(double alpha);
};

struct AdaptiveGainState {
    double k1d = 1.0;
    double k2d = 1.0;
    double s_prev = 0.0;
    bool have_prev = false;
};

/// Total function. Intervals are left-closed/right-open; A0 is sticky on [eps_1, eps_N].
LayerId select_layer(double s_abs, const BarrierLadder& ladder, LayerId previous);

/// One forward-Euler step of the A0 adaptation law. The applied gains are the updated
/// dynamic gains.
std::pair<GainPair, AdaptiveGainState> a0_update(const AdaptiveGainState& state, double s,
                                                 double ts, double alpha,
                                                 const AdaptationLimits& limits);

/// Decays the dynamic gains (dk/dt = -k) and returns the barrier gains of layer `layer`.
std::pair<GainPair, AdaptiveGainState> ai_update(const AdaptiveGainState& state, double s,
                                                 LayerId layer, const BarrierLadder& ladder,
                                                 double ts, const AdaptationLimits& limits);

}  // namespace mlsta
