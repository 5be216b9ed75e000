// mlsta: run single scenarios and parameter sweeps of the discrete multi-layer
// barrier super-twisting controller.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlsta/errors.hpp"
#include "mlsta/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

mlsta::ScenarioParams load(const std::string& config_path) {
    return config_path.empty() ? mlsta::ScenarioParams{} : mlsta::parse_config(config_path);
}

mlsta::SweepAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        throw mlsta::ConfigError("axis", "expected <name>=<v1,v2,...>, got '" + spec + "'");
    }
    mlsta::SweepAxis axis{spec.substr(0, eq), {}};
    std::stringstream values(spec.substr(eq + 1));
    std::string item;
    while (std::getline(values, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw mlsta::ConfigError(axis.name, "cannot parse axis value '" + item + "'");
        }
        axis.values.push_back(v);
    }
    return axis;
}

void warn_all(const mlsta::ScenarioParams& params) {
    for (const auto& w : mlsta::warnings(params)) {
        std::cerr << "warning: " << w << '\n';
    }
}

int cmd_validate(const std::string& config_path, bool quiet) {
    const auto params = load(config_path);
    warn_all(params);
    if (!quiet) {
        std::cout << mlsta::resolved_config_json(params).dump(2) << '\n';
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& scheme_name,
                 const fs::path& out, int decimation_override, bool quiet) {
    auto params = load(config_path);
    if (!scheme_name.empty()) {
        params.scheme = mlsta::scheme_from_string(scheme_name);
    }
    if (decimation_override > 0) {
        params.decimation = decimation_override;
    }
    warn_all(params);
    const auto scn = mlsta::resolve(params);
    const auto started = std::chrono::steady_clock::now();
    if (!quiet) {
        std::cerr << "simulating " << scn.sample_count() << " samples (" << to_string(params.scheme)
                  << ")\n";
    }
    const auto trace = mlsta::run_closed_loop(scn, params.scheme);
    const auto metrics = mlsta::compute_metrics(trace, scn.cfg.ladder, params.window_fraction);
    const int decimation = mlsta::resolved_decimation(params, scn.sample_count());

    mlsta::emit_trace(trace, out / "trace.csv", decimation);
    mlsta::emit_metrics(metrics, out / "metrics.json", out / "metrics.csv");
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest{{"version", std::string(mlsta::kVersion)},
                  {"command", "simulate"},
                  {"scheme", std::string(to_string(params.scheme))},
                  {"config_path", config_path},
                  {"config", mlsta::resolved_config_json(params)},
                  {"warnings", mlsta::warnings(params)},
                  {"outputs",
                   {{"trace", "trace.csv"}, {"metrics_json", "metrics.json"},
                    {"metrics_csv", "metrics.csv"}}},
                  {"wall_clock_seconds", wall}};
    mlsta::write_json(manifest, out / "manifest.json");
    if (!quiet) {
        std::cerr << "max |s| (steady state) = " << metrics.max_s_ss
                  << ", innermost occupancy = " << metrics.innermost_occupancy() << '\n';
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& axis_specs,
              const std::string& mode, const std::string& scheme_name, const fs::path& out,
              unsigned workers, bool traces, bool quiet) {
    mlsta::SweepGrid grid;
    grid.base = load(config_path);
    if (!scheme_name.empty()) {
        grid.base.scheme = mlsta::scheme_from_string(scheme_name);
    }
    grid.mode = mode == "cartesian" ? mlsta::SweepMode::Cartesian : mlsta::SweepMode::OneAtATime;
    for (const auto& spec : axis_specs) {
        grid.axes.push_back(parse_axis(spec));
    }
    warn_all(grid.base);
    const auto points = mlsta::expand_grid(grid);
    if (!quiet) {
        std::cerr << "sweeping " << points.size() << " points\n";
    }

    const auto started = std::chrono::steady_clock::now();
    mlsta::SweepOptions options;
    options.workers = workers;
    std::mutex log_mutex;
    options.on_trace = [&](const mlsta::SweepPoint& point, std::span<const mlsta::StepRecord> tr) {
        if (traces) {
            const int decimation =
                mlsta::resolved_decimation(point.params, static_cast<long long>(tr.size()));
            char dir[32];
            std::snprintf(dir, sizeof dir, "point_%03zu", point.index);
            mlsta::emit_trace(tr, out / dir / "trace.csv", decimation);
        }
        if (!quiet) {
            std::lock_guard lock(log_mutex);
            std::cerr << "  point " << point.index << " done\n";
        }
    };
    const auto rows = mlsta::run_sweep(grid, grid.base.scheme, options);
    mlsta::emit_sweep(rows, out / "sweep.json", out / "sweep.csv");

    json axes = json::object();
    for (const auto& axis : grid.axes) {
        axes[axis.name] = axis.values;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest{{"version", std::string(mlsta::kVersion)},
                  {"command", "sweep"},
                  {"scheme", std::string(to_string(grid.base.scheme))},
                  {"mode", grid.mode == mlsta::SweepMode::Cartesian ? "cartesian" : "oat"},
                  {"axes", axes},
                  {"config_path", config_path},
                  {"base_config", mlsta::resolved_config_json(grid.base)},
                  {"warnings", mlsta::warnings(grid.base)},
                  {"workers", mlsta::resolve_workers(workers)},
                  {"outputs", {{"sweep_json", "sweep.json"}, {"sweep_csv", "sweep.csv"}}},
                  {"wall_clock_seconds", wall}};
    mlsta::write_json(manifest, out / "manifest.json");

    int failed = 0;
    for (const auto& row : rows) {
        if (!row.metrics) {
            ++failed;
            std::cerr << "point " << row.point.index << " rejected: " << row.error << '\n';
        }
    }
    return failed == 0 ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete multi-layer barrier super-twisting controller: simulation and sweeps"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet,-q", quiet, "Suppress progress output");

    std::string config_path;
    std::string scheme;
    std::string out_dir = "out";

    auto* validate = app.add_subcommand("validate", "Resolve and check a config");
    validate->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    validate->add_flag("--quiet,-q", quiet, "Suppress progress output");

    int decimation = 0;
    auto* simulate = app.add_subcommand("simulate", "Run one closed-loop scenario");
    simulate->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    simulate->add_option("--scheme", scheme, "Discretization scheme")
        ->check(CLI::IsMember({"matching", "euler"}));
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--decimation", decimation, "Write every n-th trace row")
        ->check(CLI::PositiveNumber);
    simulate->add_flag("--quiet,-q", quiet, "Suppress progress output");

    std::vector<std::string> axes;
    std::string mode = "oat";
    unsigned workers = 0;
    bool traces = false;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sweep->add_option("--axis", axes, "Sweep axis <name>=<v1,v2,...>")->required();
    sweep->add_option("--mode", mode, "oat (one-at-a-time) or cartesian")
        ->check(CLI::IsMember({"oat", "cartesian"}));
    sweep->add_option("--scheme", scheme, "Discretization scheme")
        ->check(CLI::IsMember({"matching", "euler"}));
    sweep->add_option("--out", out_dir, "Output directory")->required();
    sweep->add_option("--workers", workers, "Worker threads (0: MLSTA_WORKERS or all cores)");
    sweep->add_flag("--traces", traces, "Also write per-point traces");
    sweep->add_flag("--quiet,-q", quiet, "Suppress progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        if (*validate) {
            return cmd_validate(config_path, quiet);
        }
        if (*simulate) {
            return cmd_simulate(config_path, scheme, out_dir, decimation, quiet);
        }
        return cmd_sweep(config_path, axes, mode, scheme, out_dir, workers, traces, quiet);
    } catch (const mlsta::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitFailure;
}
