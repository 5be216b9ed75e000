#pragma once

// Perturbed integrator x' = u0 + d(t) under zero-order hold, tracking x_ref(t).
// The sampled sliding variable is s_k = x(k Ts) - x_ref(k Ts); the held plant input
// is u0 = u_k + x_ref'(k Ts).

#include <functional>
#include <utility>
#include <vector>

#include "mlsta/controller.hpp"

namespace mlsta {

/// d(t) = bias + amplitude sin(omega t).
struct DisturbanceSpec {
    double amplitude = 1e3;
    double omega = 15.0;
    double bias = 0.0;

    double value(double t) const;
    /// delta(t) = d'(t)
    double rate(double t) const;
    /// Bound on |delta|.
    double rate_bound() const;
};

/// x_ref(t) = amplitude sin(omega t).
struct ReferenceSpec {
    double amplitude = 0.1;
    double omega = 5.0;

    double value(double t) const;
    double rate(double t) const;
};

struct Scenario {
    explicit Scenario(ControllerConfig config) : cfg(std::move(config)) {}

    ControllerConfig cfg;
    double duration = 10.0;
    DisturbanceSpec disturbance;
    ReferenceSpec reference;
    int substeps = 10;
    double x0 = 0.0;

    /// Number of controller samples, floor(duration / Ts) + 1.
    long long sample_count() const;
};

struct StepRecord {
    double t;
    double x;
    double x_ref;
    double s;
    double u;
    double v;
    int layer;
    double k1;
    double k2;
    double d;
    double phi;  // v + d
};

/// 100 substeps per interval for Ts >= 1e-4, else 10.
int default_substeps(double ts);

/// Advances x' = u_hold + d(t) over [t0, t0 + ts] with `substeps` classical RK4 steps.
double integrate_interval(double x, double u_hold, double t0, double ts, int substeps,
                          const DisturbanceSpec& dist);

using RecordSink = std::function<void(const StepRecord&)>;

/// Streams one record per controller sample to `sink`. Throws DivergenceError on a
/// non-finite state.
void run_closed_loop(const Scenario& scn, Scheme scheme, const RecordSink& sink);

std::vector<StepRecord> run_closed_loop(const Scenario& scn, Scheme scheme = Scheme::Matching);

}  // namespace mlsta
