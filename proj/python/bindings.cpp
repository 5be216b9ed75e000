#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "mlsta/discretization.hpp"
#include "mlsta/errors.hpp"
#include "mlsta/experiments.hpp"
#include "mlsta/io.hpp"
#include "mlsta/layers.hpp"

namespace py = pybind11;
using namespace mlsta;

namespace {

ScenarioParams params_from(const std::string& config_json) {
    return params_from_json(config_json.empty() ? nlohmann::json() : nlohmann::json::parse(config_json));
}

py::dict metrics_dict(const RunMetrics& m) {
    return py::module_::import("json").attr("loads")(metrics_json(m).dump());
}

py::dict simulate(const std::string& config_json, const std::string& scheme) {
    const ScenarioParams params = params_from(config_json);
    const Scenario scn = resolve(params);
    std::vector<StepRecord> trace;
    {
        py::gil_scoped_release release;
        trace = run_closed_loop(scn, scheme_from_string(scheme));
    }
    const auto n = static_cast<py::ssize_t>(trace.size());
    py::dict out;
    auto column = [&](const char* name, auto field) {
        py::array_t<double> a(n);
        auto view = a.mutable_unchecked<1>();
        for (py::ssize_t k = 0; k < n; ++k) {
            view(k) = static_cast<double>(trace[static_cast<std::size_t>(k)].*field);
        }
        out[name] = a;
    };
    column("t", &StepRecord::t);
    column("x", &StepRecord::x);
    column("x_ref", &StepRecord::x_ref);
    column("s", &StepRecord::s);
    column("u", &StepRecord::u);
    column("v", &StepRecord::v);
    column("k1", &StepRecord::k1);
    column("k2", &StepRecord::k2);
    column("d", &StepRecord::d);
    column("phi", &StepRecord::phi);
    py::array_t<int> layer(n);
    auto lv = layer.mutable_unchecked<1>();
    for (py::ssize_t k = 0; k < n; ++k) {
        lv(k) = trace[static_cast<std::size_t>(k)].layer;
    }
    out["layer"] = layer;
    out["metrics"] = metrics_dict(compute_metrics(trace, scn.cfg.ladder, params.window_fraction));
    return out;
}

py::list sweep(const std::string& config_json, const std::vector<std::pair<std::string, std::vector<double>>>& axes,
               bool cartesian, const std::string& scheme, unsigned workers) {
    SweepGrid grid;
    grid.base = params_from(config_json);
    grid.mode = cartesian ? SweepMode::Cartesian : SweepMode::OneAtATime;
    for (const auto& [name, values] : axes) {
        grid.axes.push_back({name, values});
    }
    std::vector<SweepRow> rows;
    {
        py::gil_scoped_release release;
        rows = run_sweep(grid, scheme_from_string(scheme), {.workers = workers, .on_trace = {}});
    }
    py::list out;
    for (const SweepRow& row : rows) {
        py::dict entry;
        entry["index"] = row.point.index;
        entry["params"] = row.point.assignments;
        if (row.metrics) {
            entry["metrics"] = metrics_dict(*row.metrics);
        } else {
            entry["error"] = row.error;
        }
        out.append(entry);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_mlsta, m) {
    m.doc() = "Multi-layer barrier super-twisting controller core";
    m.attr("__version__") = std::string(kVersion);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

    m.def("admissibility_bound", &admissibility_bound, py::arg("alpha"));
    m.def(
        "barrier_gains",
        [](double s_abs, double eps, double alpha) {
            const GainPair g = barrier_gains(s_abs, eps, alpha);
            return std::make_pair(g.k1, g.k2);
        },
        py::arg("s_abs"), py::arg("eps"), py::arg("alpha"));
    m.def(
        "ladder",
        [](double eps_minus, double eps_plus, int count, const std::string& spacing, double alpha) {
            if (spacing != "linear" && spacing != "logarithmic") {
                throw ConfigError("spacing", "expected 'linear' or 'logarithmic'");
            }
            const BarrierLadder l = ladder_from_range(
                eps_minus, eps_plus, count, spacing == "linear" ? Spacing::Linear : Spacing::Logarithmic,
                alpha);
            return std::vector<double>(l.widths().begin(), l.widths().end());
        },
        py::arg("eps_minus"), py::arg("eps_plus"), py::arg("count"), py::arg("spacing") = "linear",
        py::arg("alpha") = 0.5);
    m.def(
        "select_layer",
        [](double s_abs, std::vector<double> widths, std::size_t previous, double alpha) {
            return select_layer(s_abs, BarrierLadder(std::move(widths), alpha), LayerId{previous}).value;
        },
        py::arg("s_abs"), py::arg("widths"), py::arg("previous"), py::arg("alpha") = 0.5);
    m.def(
        "continuous_eigenvalues",
        [](double k1, double k2, double s_abs, double alpha) {
            const EigenPair e = continuous_eigenvalues(k1, k2, s_abs, alpha);
            return std::make_pair(e.lambda1, e.lambda2);
        },
        py::arg("k1"), py::arg("k2"), py::arg("s_abs"), py::arg("alpha"));
    m.def(
        "matched_coeffs",
        [](double k1, double k2, double s_abs, double alpha, double ts) {
            const DiscreteCoeffs c =
                discrete_coeffs(match_eigenvalues(continuous_eigenvalues(k1, k2, s_abs, alpha), ts), ts);
            return std::make_pair(c.u1_tilde, c.u2_tilde);
        },
        py::arg("k1"), py::arg("k2"), py::arg("s_abs"), py::arg("alpha"), py::arg("ts"));
    m.def(
        "euler_coeffs",
        [](double k1, double k2, double s_abs, double alpha, double ts) {
            const DiscreteCoeffs c = euler_coeffs(k1, k2, s_abs, alpha, ts);
            return std::make_pair(c.u1_tilde, c.u2_tilde);
        },
        py::arg("k1"), py::arg("k2"), py::arg("s_abs"), py::arg("alpha"), py::arg("ts"));
    m.def(
        "resolved_config",
        [](const std::string& config_json) { return resolved_config_json(params_from(config_json)).dump(); },
        py::arg("config_json") = "");
    m.def("simulate", &simulate, py::arg("config_json") = "", py::arg("scheme") = "matching");
    m.def("sweep", &sweep, py::arg("config_json"), py::arg("axes"), py::arg("cartesian") = false,
          py::arg("scheme") = "matching", py::arg("workers") = 0u);
}
