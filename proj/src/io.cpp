#include "mlsta/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "mlsta/errors.hpp"

namespace mlsta {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double get_number(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number()) {
        throw ConfigError(key, "expected a number");
    }
    return v.get<double>();
}

int get_int(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(key, "expected an integer");
    }
    return v.get<int>();
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& scope) {
    for (const auto& item : obj.items()) {
        if (!known.contains(item.key())) {
            throw ConfigError(scope + item.key(), "unknown key");
        }
    }
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return os;
}

void finish(std::ofstream& os, const fs::path& path) {
    os.flush();
    if (!os) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

std::string spacing_name(Spacing s) { return s == Spacing::Linear ? "linear" : "logarithmic"; }

}  // namespace

ScenarioParams params_from_json(const json& doc) {
    if (doc.is_null()) {
        return {};
    }
    if (!doc.is_object()) {
        throw ConfigError("<root>", "config must be a JSON object");
    }
    static const std::set<std::string> known{
        "alpha",  "eps_minus",  "eps_plus",  "N",         "spacing",    "widths",
        "Ts",     "substeps",   "duration",  "x0",        "disturbance", "reference",
        "k1_cap", "k2_cap",     "gain_floor", "s_floor",  "d_floor",    "k1_init",
        "k2_init", "u_max",     "window_fraction", "decimation", "scheme"};
    reject_unknown(doc, known, "");

    ScenarioParams p;
    if (doc.contains("alpha")) p.alpha = get_number(doc, "alpha");
    if (doc.contains("eps_minus")) p.eps_minus = get_number(doc, "eps_minus");
    if (doc.contains("eps_plus")) p.eps_plus = get_number(doc, "eps_plus");
    if (doc.contains("N")) p.barriers = get_int(doc, "N");
    if (doc.contains("spacing")) {
        const json& v = doc.at("spacing");
        if (v == "linear") {
            p.spacing = Spacing::Linear;
        } else if (v == "logarithmic") {
            p.spacing = Spacing::Logarithmic;
        } else {
            throw ConfigError("spacing", "expected 'linear' or 'logarithmic'");
        }
    }
    if (doc.contains("widths")) {
        const json& v = doc.at("widths");
        if (!v.is_array()) {
            throw ConfigError("widths", "expected an array of numbers");
        }
        std::vector<double> widths;
        for (const json& w : v) {
            if (!w.is_number()) {
                throw ConfigError("widths", "expected an array of numbers");
            }
            widths.push_back(w.get<double>());
        }
        p.widths = std::move(widths);
    }
    if (doc.contains("Ts")) p.ts = get_number(doc, "Ts");
    if (doc.contains("substeps")) p.substeps = get_int(doc, "substeps");
    if (doc.contains("duration")) p.duration = get_number(doc, "duration");
    if (doc.contains("x0")) p.x0 = get_number(doc, "x0");
    if (doc.contains("disturbance")) {
        const json& d = doc.at("disturbance");
        if (!d.is_object()) {
            throw ConfigError("disturbance", "expected an object");
        }
        reject_unknown(d, {"amplitude", "omega", "bias"}, "disturbance.");
        if (d.contains("amplitude")) p.disturbance.amplitude = get_number(d, "amplitude");
        if (d.contains("omega")) p.disturbance.omega = get_number(d, "omega");
        if (d.contains("bias")) p.disturbance.bias = get_number(d, "bias");
    }
    if (doc.contains("reference")) {
        const json& r = doc.at("reference");
        if (!r.is_object()) {
            throw ConfigError("reference", "expected an object");
        }
        reject_unknown(r, {"amplitude", "omega"}, "reference.");
        if (r.contains("amplitude")) p.reference.amplitude = get_number(r, "amplitude");
        if (r.contains("omega")) p.reference.omega = get_number(r, "omega");
    }
    if (doc.contains("k1_cap")) p.k1_cap = get_number(doc, "k1_cap");
    if (doc.contains("k2_cap")) p.k2_cap = get_number(doc, "k2_cap");
    if (doc.contains("gain_floor")) p.gain_floor = get_number(doc, "gain_floor");
    if (doc.contains("s_floor")) p.s_floor = get_number(doc, "s_floor");
    if (doc.contains("d_floor")) p.d_floor = get_number(doc, "d_floor");
    if (doc.contains("k1_init")) p.k1_init = get_number(doc, "k1_init");
    if (doc.contains("k2_init")) p.k2_init = get_number(doc, "k2_init");
    if (doc.contains("u_max")) p.u_max = get_number(doc, "u_max");
    if (doc.contains("window_fraction")) p.window_fraction = get_number(doc, "window_fraction");
    if (doc.contains("decimation")) p.decimation = get_int(doc, "decimation");
    if (doc.contains("scheme")) {
        const json& v = doc.at("scheme");
        if (!v.is_string()) {
            throw ConfigError("scheme", "expected a string");
        }
        p.scheme = scheme_from_string(v.get<std::string>());
    }
    // Resolve once so constraint violations surface at parse time.
    resolve(p);
    return p;
}

ScenarioParams parse_config(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        return params_from_json(json());
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", "malformed config '" + path.string() + "': " + e.what());
    }
    return params_from_json(doc);
}

json resolved_config_json(const ScenarioParams& p) {
    const Scenario scn = resolve(p);
    const ControllerConfig& cfg = scn.cfg;
    json widths = json::array();
    for (double w : cfg.ladder.widths()) {
        widths.push_back(w);
    }
    json out{
        {"alpha", cfg.alpha},
        {"eps_minus", cfg.ladder.inner()},
        {"eps_plus", cfg.ladder.outer()},
        {"N", cfg.ladder.size()},
        {"spacing", p.widths ? "explicit" : spacing_name(p.spacing)},
        {"widths", widths},
        {"Ts", cfg.ts},
        {"substeps", scn.substeps},
        {"duration", scn.duration},
        {"samples", scn.sample_count()},
        {"x0", scn.x0},
        {"disturbance",
         {{"amplitude", scn.disturbance.amplitude},
          {"omega", scn.disturbance.omega},
          {"bias", scn.disturbance.bias},
          {"rate_bound", scn.disturbance.rate_bound()}}},
        {"reference", {{"amplitude", scn.reference.amplitude}, {"omega", scn.reference.omega}}},
        {"k1_cap", cfg.limits.k1_cap},
        {"k2_cap", cfg.limits.k2_cap},
        {"gain_floor", cfg.limits.gain_floor},
        {"s_floor", cfg.limits.s_floor},
        {"d_floor", cfg.limits.d_floor},
        {"k1_init", cfg.initial_gains.k1},
        {"k2_init", cfg.initial_gains.k2},
        {"u_max", cfg.u_max ? json(*cfg.u_max) : json(nullptr)},
        {"window_fraction", p.window_fraction},
        {"decimation", resolved_decimation(p, scn.sample_count())},
        {"scheme", std::string(to_string(p.scheme))},
    };
    return out;
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

void write_trace(std::ostream& os, std::span<const StepRecord> trace, int decimation) {
    if (decimation < 1) {
        throw std::invalid_argument("write_trace: decimation must be at least 1");
    }
    std::array<char, 32> buf{};
    auto put = [&](double v, char sep) {
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        os.write(buf.data(), res.ptr - buf.data());
        os.put(sep);
    };
    os << kTraceHeader << '\n';
    for (std::size_t k = 0; k < trace.size(); k += static_cast<std::size_t>(decimation)) {
        const StepRecord& r = trace[k];
        put(r.t, ',');
        put(r.x, ',');
        put(r.x_ref, ',');
        put(r.s, ',');
        put(r.u, ',');
        put(r.v, ',');
        os << r.layer << ',';
        put(r.k1, ',');
        put(r.k2, ',');
        put(r.d, ',');
        put(r.phi, '\n');
    }
}

void emit_trace(std::span<const StepRecord> trace, const fs::path& path, int decimation) {
    std::ofstream os = open_out(path);
    write_trace(os, trace, decimation);
    finish(os, path);
}

std::vector<StepRecord> read_trace(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open trace '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(is, line) || line != kTraceHeader) {
        throw IoError("'" + path.string() + "' does not start with the trace header");
    }
    std::vector<StepRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::array<double, 11> fields{};
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto res = std::from_chars(p, end, fields[i]);
            const bool last = i + 1 == fields.size();
            if (res.ec != std::errc() || (last ? res.ptr != end : (res.ptr == end || *res.ptr != ','))) {
                throw IoError("'" + path.string() + "' line " + std::to_string(lineno) +
                              ": malformed trace row");
            }
            p = res.ptr + 1;
        }
        out.push_back(StepRecord{fields[0], fields[1], fields[2], fields[3], fields[4], fields[5],
                                 static_cast<int>(fields[6]), fields[7], fields[8], fields[9],
                                 fields[10]});
    }
    return out;
}

json metrics_json(const RunMetrics& m) {
    return json{{"max_s_ss", m.max_s_ss},
                {"rms_tracking_ss", m.rms_tracking_ss},
                {"s_peak_to_peak_ss", m.s_peak_to_peak_ss},
                {"inner_fraction", m.inner_fraction},
                {"occupancy", m.occupancy},
                {"switch_count", m.switch_count},
                {"chatter_index", m.chatter_index},
                {"window_fraction", m.window_fraction},
                {"samples", m.samples},
                {"window_samples", m.window_samples}};
}

void write_json(const json& doc, const fs::path& path) {
    std::ofstream os = open_out(path);
    os << doc.dump(2) << '\n';
    finish(os, path);
}

namespace {

constexpr std::string_view kMetricsCsvHeader =
    "max_s_ss,rms_tracking_ss,s_peak_to_peak_ss,inner_fraction,innermost_occupancy,"
    "outermost_occupancy,a0_occupancy,switch_count,chatter_index,window_fraction,samples";

void write_metrics_fields(std::ostream& os, const RunMetrics& m) {
    os << format_double(m.max_s_ss) << ',' << format_double(m.rms_tracking_ss) << ','
       << format_double(m.s_peak_to_peak_ss) << ',' << format_double(m.inner_fraction) << ','
       << format_double(m.innermost_occupancy()) << ',' << format_double(m.outermost_occupancy())
       << ',' << format_double(m.occupancy.front()) << ',' << m.switch_count << ','
       << format_double(m.chatter_index) << ',' << format_double(m.window_fraction) << ','
       << m.samples;
}

}  // namespace

void emit_metrics(const RunMetrics& m, const fs::path& json_path, const fs::path& csv_path) {
    write_json(metrics_json(m), json_path);
    std::ofstream os = open_out(csv_path);
    os << kMetricsCsvHeader << '\n';
    write_metrics_fields(os, m);
    os << '\n';
    finish(os, csv_path);
}

void emit_sweep(std::span<const SweepRow> rows, const fs::path& json_path,
                const fs::path& csv_path) {
    json doc = json::array();
    for (const SweepRow& row : rows) {
        json params = json::object();
        for (const auto& [name, value] : row.point.assignments) {
            params[name] = value;
        }
        json entry{{"index", row.point.index}, {"params", params}};
        if (row.metrics) {
            entry["metrics"] = metrics_json(*row.metrics);
        } else {
            entry["error"] = row.error;
        }
        doc.push_back(std::move(entry));
    }
    write_json(doc, json_path);

    std::ofstream os = open_out(csv_path);
    os << "index,params," << kMetricsCsvHeader << ",error\n";
    for (const SweepRow& row : rows) {
        std::string params;
        for (const auto& [name, value] : row.point.assignments) {
            if (!params.empty()) {
                params += ';';
            }
            params += name + "=" + format_double(value);
        }
        os << row.point.index << ',' << params << ',';
        if (row.metrics) {
            write_metrics_fields(os, *row.metrics);
            os << ",\n";
        } else {
            std::string err = row.error;
            for (char& c : err) {
                if (c == ',' || c == '\n' || c == '"') c = ' ';
            }
            os << ",,,,,,,,,,," << err << '\n';
        }
    }
    finish(os, csv_path);
}

}  // namespace mlsta
