// qbm_cli.cpp — command-line front end: simulate, map, negativity, compare-definitions.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical stability error, 1 otherwise.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbm/config.hpp"
#include "qbm/errors.hpp"
#include "qbm/experiments.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitStability = 3;

struct Overrides {
    std::string config;
    std::optional<double> gamma;
    std::optional<double> temperature;
    std::optional<double> f0;
    std::optional<double> omega_f;
    std::optional<std::size_t> n_modes;
    std::optional<double> t_end;
    std::optional<std::size_t> n_points;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::size_t> threads;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "TOML or JSON configuration file");
    cmd->add_option("--gamma", o.gamma, "coupling strength gamma");
    cmd->add_option("--temperature", o.temperature, "bath temperature k_B T");
    cmd->add_option("--f0", o.f0, "drive amplitude F0");
    cmd->add_option("--omega-f", o.omega_f, "drive carrier frequency");
    cmd->add_option("--n-modes", o.n_modes, "number of bath modes N");
    cmd->add_option("--t-end", o.t_end, "last sample time");
    cmd->add_option("--n-points", o.n_points, "number of time samples");
    cmd->add_option("--out", o.out, "output path");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", o.threads, "worker threads");
}

nlohmann::json document(const Overrides& o) {
    if (o.config.empty()) return nlohmann::json::object();
    return qbm::load_config_document(o.config);
}

// Overrides that act on the base run.  Sweep axes are handled by each subcommand.
void apply(qbm::RunConfig& c, const Overrides& o, bool axes) {
    if (axes && o.gamma) c.model.gamma = *o.gamma;
    if (axes && o.temperature) c.model.temperature = *o.temperature;
    if (o.f0) c.model.drive.amplitude = *o.f0;
    if (o.omega_f) c.model.drive.frequency = *o.omega_f;
    if (o.n_modes) c.model.n_modes = *o.n_modes;
    if (o.t_end) c.t_end = *o.t_end;
    if (o.n_points) c.n_points = *o.n_points;
    if (o.out) c.output = *o.out;
    if (o.format) c.format = qbm::parse_output_format(*o.format);
    if (o.threads) c.threads = *o.threads;
}

void report(const qbm::RunReport& r) {
    for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << r.output.string() << " (manifest " << r.manifest.string() << ")\n";
    std::cout << r.summary.dump() << '\n';
}

int run_simulate(const Overrides& o) {
    qbm::RunConfig c = qbm::run_config_from_json(document(o));
    apply(c, o, true);
    c.validate();
    report(qbm::run_timeseries(c));
    return 0;
}

int run_map(const Overrides& o) {
    qbm::SweepConfig c = qbm::sweep_config_from_json(document(o));
    apply(c.base, o, false);
    if (!o.out && o.config.empty()) c.base.output = "qbm_map.csv";
    if (o.gamma) c.gamma.values = {*o.gamma};
    if (o.temperature) c.temperature.values = {*o.temperature};
    c.validate();
    report(qbm::run_contribution_map(c));
    return 0;
}

int run_negativity(const Overrides& o) {
    qbm::NegativityConfig c = qbm::negativity_config_from_json(document(o));
    apply(c.base, o, true);
    if (!o.out && o.config.empty()) c.base.output = "qbm_negativity.csv";
    c.validate();
    report(qbm::run_negativity_study(c));
    return 0;
}

int run_compare(const Overrides& o) {
    qbm::CompareConfig c = qbm::compare_config_from_json(document(o));
    apply(c.base, o, false);
    if (o.temperature) c.base.model.temperature = *o.temperature;
    if (!o.out && o.config.empty()) c.base.output = "qbm_compare.csv";
    if (o.gamma) c.gammas = {*o.gamma};
    c.validate();
    report(qbm::run_compare_definitions(c));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven quantum Brownian motion: exact dynamics and entropy production"};
    app.set_version_flag("--version", std::string(qbm::tool_version()));
    app.require_subcommand(1);

    Overrides o;
    CLI::App* simulate = app.add_subcommand("simulate", "time series of one run");
    CLI::App* map = app.add_subcommand("map", "(gamma, T) contribution map");
    CLI::App* negativity = app.add_subcommand("negativity", "undriven entanglement study");
    CLI::App* compare =
        app.add_subcommand("compare-definitions", "DL vs ELB entropy production over a gamma ladder");
    for (CLI::App* cmd : {simulate, map, negativity, compare}) add_common_flags(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (simulate->parsed()) return run_simulate(o);
        if (map->parsed()) return run_map(o);
        if (negativity->parsed()) return run_negativity(o);
        return run_compare(o);
    } catch (const qbm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const qbm::StabilityError& e) {
        std::cerr << "numerical stability error: " << e.what() << '\n';
        return kExitStability;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
