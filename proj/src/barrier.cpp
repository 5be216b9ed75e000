#include "mlsta/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mlsta/errors.hpp"

namespace mlsta {

double admissibility_bound(double alpha) {
    const double expo = 2.0 * alpha - 1.0;
    if (expo == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::pow(4.0, 1.0 / expo);
}

BarrierLadder::BarrierLadder(std::vector<double> widths, double alpha)
    : widths_(std::move(widths)), alpha_(alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("alpha", "must be a positive finite number");
    }
    if (widths_.empty()) {
        throw ConfigError("widths", "at least one barrier width is required");
    }
    const double bound = admissibility_bound(alpha);
    for (std::size_t i = 0; i < widths_.size(); ++i) {
        const std::string key = "widths[" + std::to_string(i) + "]";
        const double w = widths_[i];
        if (!std::isfinite(w) || !(w > 0.0)) {
            throw ConfigError(key, "barrier width must be positive and finite");
        }
        if (i > 0 && !(w > widths_[i - 1])) {
            throw ConfigError(key, "barrier widths must be strictly increasing (non-monotone list)");
        }
        if (!(w < bound)) {
            std::ostringstream os;
            os.precision(17);
            os << "width " << w << " violates admissibility bound 4^(1/(2*alpha-1)) = " << bound
               << " for alpha = " << alpha;
            throw ConfigError(key, os.str());
        }
    }
}

double barrier_k1(double s_abs, double eps, double alpha) {
    if (!(s_abs >= 0.0) || !(s_abs < eps)) {
        throw DomainError("barrier_k1: |s| must satisfy 0 <= |s| < eps");
    }
    return s_abs / std::pow(eps - s_abs, alpha + 1.0);
}

GainPair barrier_gains(double s_abs, double eps, double alpha) {
    const double limit = (1.0 - kBarrierClampRel) * eps;
    const double k1 = barrier_k1(std::min(std::fabs(s_abs), limit), eps, alpha);
    return {k1, barrier_k2(k1)};
}

BarrierLadder validate_ladder(std::vector<double> widths, double alpha) {
    return BarrierLadder(std::move(widths), alpha);
}

BarrierLadder ladder_from_range(double eps_minus, double eps_plus, int count,
                                Spacing spacing, double alpha) {
    if (count < 2) {
        throw ConfigError("N", "a ladder built from a range needs at least 2 barriers");
    }
    if (!(eps_minus > 0.0)) {
        throw ConfigError("eps_minus", "must be positive");
    }
    if (!(eps_minus < eps_plus)) {
        throw ConfigError("eps_plus", "must exceed eps_minus");
    }
    std::vector<double> widths(static_cast<std::size_t>(count));
    const double last = static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        const double frac = static_cast<double>(i) / last;
        if (spacing == Spacing::Linear) {
            widths[i] = eps_minus + frac * (eps_plus - eps_minus);
        } else {
            widths[i] = eps_minus * std::pow(eps_plus / eps_minus, frac);
        }
    }
    // Pin the endpoints exactly.
    widths.front() = eps_minus;
    widths.back() = eps_plus;
    return BarrierLadder(std::move(widths), alpha);
}

}  // namespace mlsta
