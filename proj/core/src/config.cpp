#include "qbm/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

#include "qbm/errors.hpp"
#include "qbm/normal_modes.hpp"

namespace qbm {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    if (!obj.is_object()) {
        throw ConfigError(where + " must be a table/object");
    }
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!keys.contains(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double number(const json& v, const std::string& name) {
    if (!v.is_number()) throw ConfigError("'" + name + "' must be a number");
    return v.get<double>();
}

std::size_t count(const json& v, const std::string& name) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ConfigError("'" + name + "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(v.get<std::int64_t>());
}

std::string text(const json& v, const std::string& name) {
    if (!v.is_string()) throw ConfigError("'" + name + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& name) {
    if (!v.is_array()) throw ConfigError("'" + name + "' must be an array of numbers");
    std::vector<double> out;
    for (const json& x : v) out.push_back(number(x, name));
    return out;
}

AxisGrid axis_from_json(const json& v, const std::string& name) {
    if (v.is_array()) {
        return AxisGrid{numbers(v, name)};
    }
    reject_unknown(v, {"min", "max", "count", "spacing"}, name);
    if (!v.contains("min") || !v.contains("max") || !v.contains("count")) {
        throw ConfigError(name + " needs min, max and count");
    }
    const double lo = number(v["min"], name + ".min");
    const double hi = number(v["max"], name + ".max");
    const std::size_t n = count(v["count"], name + ".count");
    const std::string spacing = v.contains("spacing") ? text(v["spacing"], name + ".spacing") : "linear";
    if (spacing == "linear") return AxisGrid::linear(lo, hi, n);
    if (spacing == "log") return AxisGrid::logarithmic(lo, hi, n);
    throw ConfigError(name + ".spacing must be 'linear' or 'log'");
}

void check_values(const std::vector<double>& values, const std::string& name, bool allow_zero) {
    if (values.empty()) throw ConfigError(name + " grid is empty");
    for (double x : values) {
        if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0)) {
            throw ConfigError(name + " values must be finite and " +
                              (allow_zero ? "non-negative" : "positive"));
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- RunConfig

ModelSpec RunConfig::resolved_model() const {
    ModelSpec m = model;
    if (drive_duration && !(*drive_duration > 0.0 && std::isfinite(*drive_duration))) {
        throw ConfigError("drive.t_f must be positive and finite");
    }
    const double t_f = drive_duration.value_or(0.5 * recurrence_time(m));
    m.drive.envelope_frequency = std::numbers::pi / t_f;
    m.validate();
    return m;
}

double RunConfig::resolved_t_end() const {
    return t_end.value_or(recurrence_time(model));
}

std::vector<double> RunConfig::time_grid() const {
    return uniform_time_grid(resolved_t_end(), n_points);
}

SystemHamiltonianSpec RunConfig::system_hamiltonian() const {
    const ModelSpec m = resolved_model();
    SystemHamiltonianSpec h = SystemHamiltonianSpec::for_model(m);
    if (gibbs_frequency == "omega_b") {
        h.frequency = build_couplings(m).omega_b;
    }
    return h;
}

void RunConfig::validate() const {
    resolved_model();
    if (t_end && !(*t_end > 0.0 && std::isfinite(*t_end))) {
        throw ConfigError("time.t_end must be positive");
    }
    if (n_points < 2) throw ConfigError("time.n_points must be at least 2");
    if (gibbs_frequency != "omega0" && gibbs_frequency != "omega_b") {
        throw ConfigError("gibbs_frequency must be 'omega0' or 'omega_b'");
    }
    if (threads == 0) throw ConfigError("threads must be at least 1");
}

// ---------------------------------------------------------------- grids

AxisGrid AxisGrid::linear(double lo, double hi, std::size_t n) {
    if (n == 0) throw ConfigError("grid count must be positive");
    AxisGrid g;
    for (std::size_t i = 0; i < n; ++i) {
        g.values.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return g;
}

AxisGrid AxisGrid::logarithmic(double lo, double hi, std::size_t n) {
    if (n == 0) throw ConfigError("grid count must be positive");
    if (!(lo > 0.0) || !(hi > 0.0)) throw ConfigError("log-spaced grid bounds must be positive");
    AxisGrid g;
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        g.values.push_back(n == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    return g;
}

void SweepConfig::validate() const {
    base.validate();
    check_values(gamma.values, "sweep.gamma", true);
    check_values(temperature.values, "sweep.temperature", true);
    if (eval_time && !(*eval_time > 0.0 && std::isfinite(*eval_time))) {
        throw ConfigError("sweep.eval_time must be positive");
    }
}

void NegativityConfig::validate() const {
    base.validate();
    if (parameter != "temperature" && parameter != "gamma") {
        throw ConfigError("negativity.parameter must be 'temperature' or 'gamma'");
    }
    check_values(values, "negativity.values", true);
}

void CompareConfig::validate() const {
    base.validate();
    check_values(gammas, "compare.gammas", true);
}

// ---------------------------------------------------------------- documents

nlohmann::json parse_config_text(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '{') {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("JSON parse error: ") + e.what());
        }
    }
    return parse_toml_subset(text);
}

nlohmann::json load_config_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

OutputFormat parse_output_format(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("output format must be 'csv' or 'json'");
}

RunConfig run_config_from_json(const json& doc) {
    reject_unknown(doc,
                   {"n_modes", "omega0", "omega_max", "gamma", "cutoff", "temperature", "drive",
                    "time", "observables", "gibbs_frequency", "output", "threads", "sweep",
                    "negativity", "compare"},
                   "config");
    RunConfig c;
    ModelSpec& m = c.model;
    if (doc.contains("n_modes")) m.n_modes = count(doc["n_modes"], "n_modes");
    if (doc.contains("omega0")) m.omega0 = number(doc["omega0"], "omega0");
    if (doc.contains("omega_max")) m.omega_max = number(doc["omega_max"], "omega_max");
    if (doc.contains("gamma")) m.gamma = number(doc["gamma"], "gamma");
    m.cutoff = doc.contains("cutoff") ? number(doc["cutoff"], "cutoff") : m.omega_max;
    if (doc.contains("temperature")) m.temperature = number(doc["temperature"], "temperature");
    if (doc.contains("drive")) {
        const json& d = doc["drive"];
        reject_unknown(d, {"f0", "omega_f", "t_f", "phi"}, "drive");
        if (d.contains("f0")) m.drive.amplitude = number(d["f0"], "drive.f0");
        if (d.contains("omega_f")) m.drive.frequency = number(d["omega_f"], "drive.omega_f");
        if (d.contains("phi")) m.drive.phase = number(d["phi"], "drive.phi");
        if (d.contains("t_f")) c.drive_duration = number(d["t_f"], "drive.t_f");
    }
    if (doc.contains("time")) {
        const json& t = doc["time"];
        reject_unknown(t, {"t_end", "n_points"}, "time");
        if (t.contains("t_end")) c.t_end = number(t["t_end"], "time.t_end");
        if (t.contains("n_points")) c.n_points = count(t["n_points"], "time.n_points");
    }
    if (doc.contains("observables")) {
        const json& o = doc["observables"];
        if (!o.is_array()) throw ConfigError("'observables' must be an array of names");
        c.observables = Observables{false, false, false};
        for (const json& name : o) {
            const std::string s = text(name, "observables");
            if (s == "thermo") c.observables.thermo = true;
            else if (s == "decomposition") c.observables.decomposition = true;
            else if (s == "negativity") c.observables.negativity = true;
            else throw ConfigError("unknown observable '" + s + "'");
        }
    }
    if (doc.contains("gibbs_frequency")) {
        c.gibbs_frequency = text(doc["gibbs_frequency"], "gibbs_frequency");
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        reject_unknown(o, {"path", "format"}, "output");
        if (o.contains("path")) c.output = text(o["path"], "output.path");
        if (o.contains("format")) c.format = parse_output_format(text(o["format"], "output.format"));
    }
    if (doc.contains("threads")) c.threads = count(doc["threads"], "threads");
    return c;
}

SweepConfig sweep_config_from_json(const json& doc) {
    SweepConfig c;
    c.base = run_config_from_json(doc);
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        reject_unknown(s, {"gamma", "temperature", "eval_time"}, "sweep");
        if (s.contains("gamma")) c.gamma = axis_from_json(s["gamma"], "sweep.gamma");
        if (s.contains("temperature")) {
            c.temperature = axis_from_json(s["temperature"], "sweep.temperature");
        }
        if (s.contains("eval_time")) c.eval_time = number(s["eval_time"], "sweep.eval_time");
    }
    return c;
}

NegativityConfig negativity_config_from_json(const json& doc) {
    NegativityConfig c;
    c.base = run_config_from_json(doc);
    if (doc.contains("negativity")) {
        const json& s = doc["negativity"];
        reject_unknown(s, {"parameter", "values"}, "negativity");
        if (s.contains("parameter")) c.parameter = text(s["parameter"], "negativity.parameter");
        if (s.contains("values")) c.values = numbers(s["values"], "negativity.values");
    }
    return c;
}

CompareConfig compare_config_from_json(const json& doc) {
    CompareConfig c;
    c.base = run_config_from_json(doc);
    if (doc.contains("compare")) {
        const json& s = doc["compare"];
        reject_unknown(s, {"gammas"}, "compare");
        if (s.contains("gammas")) c.gammas = numbers(s["gammas"], "compare.gammas");
    }
    return c;
}

json to_json(const RunConfig& c) {
    const ModelSpec& m = c.model;
    json out;
    out["n_modes"] = m.n_modes;
    out["omega0"] = m.omega0;
    out["omega_max"] = m.omega_max;
    out["gamma"] = m.gamma;
    out["cutoff"] = m.cutoff;
    out["temperature"] = m.temperature;
    out["drive"] = {{"f0", m.drive.amplitude},
                    {"omega_f", m.drive.frequency},
                    {"phi", m.drive.phase},
                    {"t_f", c.drive_duration.value_or(0.5 * recurrence_time(m))}};
    out["time"] = {{"t_end", c.resolved_t_end()}, {"n_points", c.n_points}};
    json obs = json::array();
    if (c.observables.thermo) obs.push_back("thermo");
    if (c.observables.decomposition) obs.push_back("decomposition");
    if (c.observables.negativity) obs.push_back("negativity");
    out["observables"] = obs;
    out["gibbs_frequency"] = c.gibbs_frequency;
    out["output"] = {{"path", c.output.string()},
                     {"format", c.format == OutputFormat::csv ? "csv" : "json"}};
    out["threads"] = c.threads;
    return out;
}

json to_json(const SweepConfig& c) {
    json out = to_json(c.base);
    out["sweep"] = {{"gamma", c.gamma.values},
                    {"temperature", c.temperature.values},
                    {"eval_time", c.eval_time.value_or(recurrence_time(c.base.model))}};
    return out;
}

json to_json(const NegativityConfig& c) {
    json out = to_json(c.base);
    out["negativity"] = {{"parameter", c.parameter}, {"values", c.values}};
    return out;
}

json to_json(const CompareConfig& c) {
    json out = to_json(c.base);
    out["compare"] = {{"gammas", c.gammas}};
    return out;
}

}  // namespace qbm
