#include "mlsta/plant.hpp"

#include <cmath>

#include "mlsta/errors.hpp"

namespace mlsta {

double DisturbanceSpec::value(double t) const { return bias + amplitude * std::sin(omega * t); }

double DisturbanceSpec::rate(double t) const { return amplitude * omega * std::cos(omega * t); }

double DisturbanceSpec::rate_bound() const { return std::fabs(amplitude * omega); }

double ReferenceSpec::value(double t) const { return amplitude * std::sin(omega * t); }

double ReferenceSpec::rate(double t) const { return amplitude * omega * std::cos(omega * t); }

long long Scenario::sample_count() const {
    return static_cast<long long>(std::floor(duration / cfg.ts + 1e-9)) + 1;
}

int default_substeps(double ts) { return ts >= 1e-4 * (1.0 - 1e-12) ? 100 : 10; }

double integrate_interval(double x, double u_hold, double t0, double ts, int substeps,
                          const DisturbanceSpec& dist) {
    const double h = ts / substeps;
    // The right-hand side does not depend on x, so the two midpoint stages coincide.
    for (int j = 0; j < substeps; ++j) {
        const double t = t0 + j * h;
        const double f0 = u_hold + dist.value(t);
        const double fm = u_hold + dist.value(t + 0.5 * h);
        const double f1 = u_hold + dist.value(t + h);
        x += h / 6.0 * (f0 + 4.0 * fm + f1);
    }
    return x;
}

void run_closed_loop(const Scenario& scn, Scheme scheme, const RecordSink& sink) {
    const ControllerConfig& cfg = scn.cfg;
    const long long samples = scn.sample_count();
    ControllerState state = reset(cfg);
    double x = scn.x0;

    for (long long k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) * cfg.ts;
        const double x_ref = scn.reference.value(t);
        const double s = x - x_ref;
        if (!std::isfinite(x)) {
            throw DivergenceError(k, "plant state is not finite");
        }
        const StepResult step = control_step(s, state, cfg, scheme);
        const double d = scn.disturbance.value(t);

        sink(StepRecord{t, x, x_ref, s, step.u, step.diag.v_applied,
                        static_cast<int>(step.diag.layer.value), step.diag.gains.k1,
                        step.diag.gains.k2, d, step.diag.v_applied + d});

        const double u0 = step.u + scn.reference.rate(t);
        x = integrate_interval(x, u0, t, cfg.ts, scn.substeps, scn.disturbance);
        state = step.state;
    }
}

std::vector<StepRecord> run_closed_loop(const Scenario& scn, Scheme scheme) {
    std::vector<StepRecord> trace;
    trace.reserve(static_cast<std::size_t>(scn.sample_count()));
    run_closed_loop(scn, scheme, [&trace](const StepRecord& r) { trace.push_back(r); });
    return trace;
}

}  // namespace mlsta
