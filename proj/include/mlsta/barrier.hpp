#pragma once

// Barrier gain functions and the nested barrier ladder.
//
//   k1(s) = |s| / (eps - |s|)^(alpha + 1),   k2(s) = k1(s)^2
//
// Both vanish at s = 0 and blow up as |s| -> eps.

#include <cstddef>
#include <span>
#include <vector>

namespace mlsta {

struct GainPair {
    double k1 = 0.0;
    double k2 = 0.0;
};

enum class Spacing { Linear, Logarithmic };

/// Relative distance from a barrier below which |s| is clamped before evaluating the gains.
inline constexpr double kBarrierClampRel = 1e-9;

/// Upper bound on admissible barrier widths, 4^(1/(2 alpha - 1)).
/// Returns +inf for alpha == 1/2, where every positive width is admissible.
double admissibility_bound(double alpha);

/// Ordered barrier widths eps_1 < ... < eps_N, validated against alpha at construction.
class BarrierLadder {
public:
    /// Throws ConfigError (key "widths[i]") on an empty list, non-positive or
    /// non-increasing width, or a width at or above the admissibility bound.
    BarrierLadder(std::vector<double> widths, double alpha);

    std::size_t size() const noexcept { return widths_.size(); }
    double width(std::size_t layer) const { return widths_.at(layer - 1); }  // 1-based
    double inner() const noexcept { return widths_.front(); }
    double outer() const noexcept { return widths_.back(); }
    double alpha() const noexcept { return alpha_; }
    std::span<const double> widths() const noexcept { return widths_; }

private:
    std::vector<double> widths_;
    double alpha_;
};

/// Throws DomainError unless 0 <= s_abs < eps.
double barrier_k1(double s_abs, double eps, double alpha);

inline double barrier_k2(double k1) { return k1 * k1; }

/// Clamps s_abs into [0, (1 - kBarrierClampRel) eps] and evaluates both gains.
GainPair barrier_gains(double s_abs, double eps, double alpha);

BarrierLadder validate_ladder(std::vector<double> widths, double alpha);

/// Builds N >= 2 widths from eps_minus to eps_plus with uniform (linear or geometric) spacing.
BarrierLadder ladder_from_range(double eps_minus, double eps_plus, int count,
                                Spacing spacing, double alpha);

}  // namespace mlsta
