#include "qbm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>

#include "qbm/errors.hpp"
#include "qbm/gaussian_states.hpp"
#include "qbm/normal_modes.hpp"
#include "qbm/parallel.hpp"
#include "qbm/trajectory.hpp"

namespace qbm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

nlohmann::json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

RunReport finish(const std::filesystem::path& output, const std::string& command,
                 nlohmann::json config, nlohmann::json constants,
                 std::vector<std::string> warnings, nlohmann::json summary,
                 Clock::time_point start) {
    RunReport report;
    report.output = output;
    report.manifest = manifest_path(output);
    report.warnings = std::move(warnings);
    report.summary = std::move(summary);
    nlohmann::json manifest{
        {"tool", "qbm"},
        {"version", tool_version()},
        {"command", command},
        {"output", output.string()},
        {"config", std::move(config)},
        {"constants", std::move(constants)},
        {"warnings", report.warnings},
        {"summary", report.summary},
        {"wall_time_s", seconds_since(start)},
    };
    write_json_file(report.manifest, manifest);
    return report;
}

std::vector<ThermoRecord> records_for(const RunConfig& config, const ModelSpec& spec,
                                      const SamplingOptions& options) {
    const std::vector<double> times = config.time_grid();
    const Trajectory traj = sample_trajectory(spec, times, options);
    SystemHamiltonianSpec hspec = SystemHamiltonianSpec::for_model(spec);
    if (config.gibbs_frequency == "omega_b") hspec.frequency = build_couplings(spec).omega_b;
    return thermo_records(traj, hspec);
}

std::string error_status(const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return "error:" + msg;
}

}  // namespace

const char* tool_version() noexcept { return QBM_VERSION; }

std::vector<std::string> recurrence_warnings(const ModelSpec& spec, double t_end) {
    const double t_max = recurrence_time(spec);
    std::vector<std::string> out;
    if (t_end > 0.9 * t_max) {
        std::ostringstream msg;
        msg << "t_end = " << t_end << " exceeds 0.9 t_max (t_max = " << t_max
            << "); late samples may be contaminated by bath recurrences";
        out.push_back(msg.str());
    }
    return out;
}

nlohmann::json model_constants(const ModelSpec& spec) {
    const CouplingSet c = build_couplings(spec);
    return {
        {"spacing", spec.spacing()},
        {"omega_b", c.omega_b},
        {"t_max", recurrence_time(spec)},
        {"t_f", spec.drive.duration()},
        {"Omega_f", spec.drive.envelope_frequency},
        {"beta", finite_or_null(spec.beta())},
    };
}

double max_abs_finite(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) {
        if (std::isfinite(x)) m = std::max(m, std::abs(x));
    }
    return m;
}

// ---------------------------------------------------------------- time series

SamplingOptions sampling_options(const RunConfig& config) {
    SamplingOptions o;
    o.bath_entropy = config.observables.decomposition;
    o.negativity = config.observables.negativity;
    o.total_spectrum = false;
    o.threads = config.threads;
    return o;
}

std::vector<ThermoRecord> compute_timeseries(const RunConfig& config) {
    config.validate();
    return records_for(config, config.resolved_model(), sampling_options(config));
}

RunReport run_timeseries(const RunConfig& config) {
    const auto start = Clock::now();
    config.validate();
    const ModelSpec spec = config.resolved_model();
    std::vector<ThermoRecord> records = records_for(config, spec, sampling_options(config));
    for (const ThermoRecord& r : records) validate_record(r);

    Table table = thermo_table(records);
    if (!config.observables.thermo) {
        // Keep the schema; blank the entropy-production columns.
        for (auto& row : table.rows) {
            for (std::size_t c = 4; c <= 6; ++c) row[c] = kMissing;
            row[10] = kMissing;
            row[11] = kMissing;
        }
    }
    write_table(config.output, config.format, table);

    std::vector<double> eps, elb;
    for (const ThermoRecord& r : records) {
        eps.push_back(r.epsilon);
        elb.push_back(r.dS_ELB);
    }
    nlohmann::json summary{
        {"samples", records.size()},
        {"max_abs_epsilon", max_abs_finite(eps)},
        {"final_dS_ELB", records.empty() ? nlohmann::json(nullptr)
                                         : finite_or_null(records.back().dS_ELB)},
    };
    return finish(config.output, "simulate", to_json(config), model_constants(spec),
                  recurrence_warnings(spec, config.resolved_t_end()), std::move(summary),
                  start);
}

// ---------------------------------------------------------------- contribution map

ContributionCell contribution_cell(const ModelSpec& spec, const NormalModeBasis& basis,
                                   double eval_time) {
    ContributionCell cell;
    cell.gamma = spec.gamma;
    cell.temperature = spec.temperature;
    const double beta = spec.beta();
    if (!std::isfinite(beta)) {
        cell.status = "missing:zero-temperature";
        return cell;
    }
    try {
        const double times[] = {eval_time};
        SamplingOptions opts;
        opts.bath_entropy = true;
        const Trajectory traj = sample_trajectory(spec, basis, times, opts);
        const double elb = entropy_production_elb(traj, beta).front();
        cell.entropy_production = elb;
        if (!(std::abs(elb) >= kEpsilonGuard)) {
            cell.status = "missing:no-entropy-production";
            return cell;
        }
        const Decomposition d = decomposition(traj, beta);
        cell.frac_Denv = d.D_env.front() / elb;
        cell.frac_Ise = d.I_SE.front() / elb;
        cell.frac_Ienv = d.I_env.front() / elb;
        const double fr[] = {cell.frac_Denv, cell.frac_Ise, cell.frac_Ienv};
        for (int i = 0; i < 3; ++i) {
            cell.rgb[i] = static_cast<int>(std::lround(255.0 * std::clamp(fr[i], 0.0, 1.0)));
        }
    } catch (const std::exception& e) {
        cell.status = error_status(e);
        cell.frac_Denv = cell.frac_Ise = cell.frac_Ienv = kMissing;
        cell.rgb = {0, 0, 0};
    }
    return cell;
}

std::vector<ContributionCell> compute_contribution_map(const SweepConfig& config) {
    config.validate();
    const ModelSpec base = config.base.resolved_model();
    const double eval_time = config.eval_time.value_or(recurrence_time(base));
    const auto& gammas = config.gamma.values;
    const auto& temps = config.temperature.values;

    std::vector<ContributionCell> cells(gammas.size() * temps.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        ModelSpec spec = base;
        spec.gamma = gammas[i];
        NormalModeBasis basis;
        try {
            basis = basis_for(spec);
        } catch (const std::exception& e) {
            for (std::size_t j = 0; j < temps.size(); ++j) {
                ContributionCell& c = cells[i * temps.size() + j];
                c.gamma = gammas[i];
                c.temperature = temps[j];
                c.status = error_status(e);
            }
            continue;
        }
        parallel_for(temps.size(), config.base.threads, [&](std::size_t j) {
            ModelSpec cell_spec = spec;
            cell_spec.temperature = temps[j];
            cells[i * temps.size() + j] = contribution_cell(cell_spec, basis, eval_time);
        });
    }
    return cells;
}

Table contribution_table(const std::vector<ContributionCell>& cells) {
    Table table;
    table.columns.assign(std::begin(kMapColumns), std::end(kMapColumns));
    for (const ContributionCell& c : cells) {
        table.rows.push_back({c.gamma, c.temperature, c.frac_Denv, c.frac_Ise, c.frac_Ienv,
                              std::int64_t{c.rgb[0]}, std::int64_t{c.rgb[1]},
                              std::int64_t{c.rgb[2]}, c.status});
    }
    return table;
}

RunReport run_contribution_map(const SweepConfig& config) {
    const auto start = Clock::now();
    const std::vector<ContributionCell> cells = compute_contribution_map(config);
    write_table(config.base.output, config.base.format, contribution_table(cells));

    const ModelSpec base = config.base.resolved_model();
    const double eval_time = config.eval_time.value_or(recurrence_time(base));
    std::size_t ok = 0, missing = 0, failed = 0;
    std::vector<std::string> warnings = recurrence_warnings(base, eval_time);
    for (const ContributionCell& c : cells) {
        if (c.status == "ok") {
            ++ok;
        } else if (c.status.rfind("missing:", 0) == 0) {
            ++missing;
        } else {
            ++failed;
            std::ostringstream msg;
            msg << "cell gamma=" << c.gamma << " T=" << c.temperature << ": " << c.status;
            warnings.push_back(msg.str());
        }
    }
    nlohmann::json summary{
        {"cells", cells.size()}, {"ok", ok}, {"missing", missing}, {"errors", failed},
        {"eval_time", eval_time}};
    return finish(config.base.output, "map", to_json(config), model_constants(base),
                  std::move(warnings), std::move(summary), start);
}

// ---------------------------------------------------------------- negativity

std::vector<NegativitySeries> compute_negativity_study(const NegativityConfig& config) {
    config.validate();
    RunConfig run = config.base;
    run.model.drive.amplitude = 0.0;
    const ModelSpec base = run.resolved_model();
    const std::vector<double> times = run.time_grid();

    SamplingOptions opts;
    opts.bath_entropy = true;
    opts.negativity = true;
    opts.threads = run.threads;

    std::vector<NegativitySeries> out;
    for (double value : config.values) {
        ModelSpec spec = base;
        if (config.parameter == "gamma") {
            spec.gamma = value;
        } else {
            spec.temperature = value;
        }
        spec.validate();
        const Trajectory traj = sample_trajectory(spec, times, opts);
        NegativitySeries series;
        series.value = value;
        for (const Snapshot& s : traj.samples) {
            series.t.push_back(s.t);
            series.E_N.push_back(*s.negativity);
            series.I_SE.push_back(von_neumann_entropy(s.mode(0)) + *s.bath_entropy -
                                  traj.total_entropy);
        }
        out.push_back(std::move(series));
    }
    return out;
}

RunReport run_negativity_study(const NegativityConfig& config) {
    const auto start = Clock::now();
    const std::vector<NegativitySeries> series = compute_negativity_study(config);
    Table table;
    table.columns = {"parameter", "value", "t", "E_N", "I_SE"};
    nlohmann::json per_value = nlohmann::json::array();
    for (const NegativitySeries& s : series) {
        double mean = 0.0;
        for (std::size_t k = 0; k < s.t.size(); ++k) {
            table.rows.push_back({config.parameter, s.value, s.t[k], s.E_N[k], s.I_SE[k]});
            mean += s.E_N[k];
        }
        if (!s.t.empty()) mean /= static_cast<double>(s.t.size());
        per_value.push_back({{"value", s.value},
                             {"mean_E_N", mean},
                             {"final_I_SE", s.I_SE.empty() ? 0.0 : s.I_SE.back()}});
    }
    write_table(config.base.output, config.base.format, table);

    RunConfig run = config.base;
    run.model.drive.amplitude = 0.0;
    const ModelSpec base = run.resolved_model();
    return finish(config.base.output, "negativity", to_json(config), model_constants(base),
                  recurrence_warnings(base, run.resolved_t_end()),
                  nlohmann::json{{"series", per_value}}, start);
}

// ---------------------------------------------------------------- definitions

std::vector<DefinitionComparison> compute_definition_comparison(const CompareConfig& config) {
    config.validate();
    RunConfig run = config.base;
    SamplingOptions opts;
    opts.bath_entropy = false;
    opts.threads = run.threads;

    std::vector<DefinitionComparison> out;
    for (double gamma : config.gammas) {
        run.model.gamma = gamma;
        const ModelSpec spec = run.resolved_model();
        DefinitionComparison cmp;
        cmp.gamma = gamma;
        cmp.records = records_for(run, spec, opts);
        std::vector<double> d, e;
        for (const ThermoRecord& r : cmp.records) {
            d.push_back(r.delta);
            e.push_back(r.epsilon);
        }
        cmp.max_abs_delta = max_abs_finite(d);
        cmp.max_abs_epsilon = max_abs_finite(e);
        out.push_back(std::move(cmp));
    }
    return out;
}

RunReport run_compare_definitions(const CompareConfig& config) {
    const auto start = Clock::now();
    const std::vector<DefinitionComparison> cmps = compute_definition_comparison(config);
    Table table;
    table.columns = {"gamma", "t", "dS_DL", "dS_ELB", "delta", "epsilon"};
    nlohmann::json per_gamma = nlohmann::json::array();
    for (const DefinitionComparison& c : cmps) {
        for (const ThermoRecord& r : c.records) {
            validate_record(r);
            table.rows.push_back({c.gamma, r.t, r.dS_DL, r.dS_ELB, r.delta, r.epsilon});
        }
        per_gamma.push_back({{"gamma", c.gamma},
                             {"max_abs_delta", c.max_abs_delta},
                             {"max_abs_epsilon", c.max_abs_epsilon}});
    }
    write_table(config.base.output, config.base.format, table);
    const ModelSpec base = config.base.resolved_model();
    return finish(config.base.output, "compare-definitions", to_json(config),
                  model_constants(base), recurrence_warnings(base, config.base.resolved_t_end()),
                  nlohmann::json{{"ladder", per_gamma}}, start);
}

}  // namespace qbm
