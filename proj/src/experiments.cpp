#include "mlsta/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "mlsta/errors.hpp"

namespace mlsta {

RunMetrics compute_metrics(std::span<const StepRecord> trace, const BarrierLadder& ladder,
                           double window_fraction) {
    if (trace.empty()) {
        throw std::invalid_argument("compute_metrics: empty trace");
    }
    if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
        throw std::invalid_argument("compute_metrics: window fraction must lie in (0, 1]");
    }
    const std::size_t n = trace.size();
    const auto window = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(window_fraction * static_cast<double>(n))), 1, n);
    const std::size_t start = n - window;

    RunMetrics m;
    m.window_fraction = window_fraction;
    m.samples = static_cast<long long>(n);
    m.window_samples = static_cast<long long>(window);
    m.occupancy.assign(ladder.size() + 1, 0.0);

    for (std::size_t k = 1; k < n; ++k) {
        if (trace[k].layer != trace[k - 1].layer) {
            ++m.switch_count;
        }
    }

    std::vector<long long> counts(ladder.size() + 1, 0);
    double sum_sq = 0.0;
    double s_min = trace[start].s;
    double s_max = trace[start].s;
    long long inner = 0;
    double total_variation = 0.0;
    for (std::size_t k = start; k < n; ++k) {
        const StepRecord& r = trace[k];
        const double s_abs = std::fabs(r.s);
        m.max_s_ss = std::max(m.max_s_ss, s_abs);
        sum_sq += r.s * r.s;
        s_min = std::min(s_min, r.s);
        s_max = std::max(s_max, r.s);
        inner += s_abs <= ladder.inner() ? 1 : 0;
        counts.at(static_cast<std::size_t>(r.layer)) += 1;
        if (k > start) {
            total_variation += std::fabs(r.u - trace[k - 1].u);
        }
    }
    const auto w = static_cast<double>(window);
    m.rms_tracking_ss = std::sqrt(sum_sq / w);
    m.s_peak_to_peak_ss = s_max - s_min;
    m.inner_fraction = static_cast<double>(inner) / w;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        m.occupancy[i] = static_cast<double>(counts[i]) / w;
    }
    const double span_t = trace[n - 1].t - trace[start].t;
    m.chatter_index = span_t > 0.0 ? total_variation / span_t : 0.0;
    return m;
}

std::vector<SweepPoint> expand_grid(const SweepGrid& grid) {
    if (grid.axes.empty()) {
        throw ConfigError("axis", "a sweep needs at least one axis");
    }
    const auto& known = sweepable_params();
    for (const SweepAxis& axis : grid.axes) {
        if (axis.values.empty()) {
            throw ConfigError(axis.name, "sweep axis has no values");
        }
        if (std::find(known.begin(), known.end(), axis.name) == known.end()) {
            throw ConfigError(axis.name, "not a sweepable parameter");
        }
    }

    std::vector<SweepPoint> points;
    if (grid.mode == SweepMode::OneAtATime) {
        for (const SweepAxis& axis : grid.axes) {
            for (double value : axis.values) {
                SweepPoint p;
                p.index = points.size();
                p.assignments = {{axis.name, value}};
                points.push_back(std::move(p));
            }
        }
    } else {
        std::vector<std::size_t> odometer(grid.axes.size(), 0);
        while (true) {
            SweepPoint p;
            p.index = points.size();
            for (std::size_t a = 0; a < grid.axes.size(); ++a) {
                p.assignments.emplace_back(grid.axes[a].name, grid.axes[a].values[odometer[a]]);
            }
            points.push_back(std::move(p));
            std::size_t a = grid.axes.size();
            while (a > 0) {
                --a;
                if (++odometer[a] < grid.axes[a].values.size()) {
                    break;
                }
                odometer[a] = 0;
                if (a == 0) {
                    return points;
                }
            }
        }
    }
    return points;
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("MLSTA_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RunMetrics run_and_measure(const ScenarioParams& params, Scheme scheme) {
    const Scenario scn = resolve(params);
    const auto trace = run_closed_loop(scn, scheme);
    return compute_metrics(trace, scn.cfg.ladder, params.window_fraction);
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, Scheme scheme,
                                const SweepOptions& options) {
    std::vector<SweepPoint> points = expand_grid(grid);
    std::vector<SweepRow> rows(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        rows[i].point = std::move(points[i]);
        rows[i].point.params = grid.base;
    }

    auto evaluate = [&](SweepRow& row) {
        try {
            for (const auto& [name, value] : row.point.assignments) {
                set_param(row.point.params, name, value);
            }
            const Scenario scn = resolve(row.point.params);
            const auto trace = run_closed_loop(scn, scheme);
            row.metrics = compute_metrics(trace, scn.cfg.ladder, row.point.params.window_fraction);
            if (options.on_trace) {
                options.on_trace(row.point, trace);
            }
        } catch (const std::exception& e) {
            row.metrics.reset();
            row.error = e.what();
        }
    };

    const unsigned workers =
        std::min<unsigned>(resolve_workers(options.workers), static_cast<unsigned>(rows.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            evaluate(rows[i]);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    return rows;
}

}  // namespace mlsta
