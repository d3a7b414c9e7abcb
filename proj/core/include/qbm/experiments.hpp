// experiments.hpp — the run engines behind the CLI: single time series, (gamma, T)
// contribution maps, negativity studies and the definition comparison ladder.

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbm/config.hpp"
#include "qbm/output.hpp"
#include "qbm/thermodynamics.hpp"

namespace qbm {

// Library version, recorded in every manifest.
const char* tool_version() noexcept;

struct RunReport {
    std::filesystem::path output;
    std::filesystem::path manifest;
    std::vector<std::string> warnings;
    nlohmann::json summary;
};

// Warning text when t_end passes 0.9 of the recurrence time.
std::vector<std::string> recurrence_warnings(const ModelSpec& spec, double t_end);

// Derived constants echoed into manifests.
nlohmann::json model_constants(const ModelSpec& spec);

// ---- time series

SamplingOptions sampling_options(const RunConfig& config);
std::vector<ThermoRecord> compute_timeseries(const RunConfig& config);
RunReport run_timeseries(const RunConfig& config);

// ---- contribution map

struct ContributionCell {
    double gamma{0.0};
    double temperature{0.0};
    double frac_Denv{kMissing};
    double frac_Ise{kMissing};
    double frac_Ienv{kMissing};
    std::array<int, 3> rgb{0, 0, 0};
    std::string status{"ok"};
    double entropy_production{kMissing};  // dS_ELB at the evaluation time
};

inline constexpr const char* kMapColumns[] = {"gamma", "temperature", "frac_Denv", "frac_Ise",
                                              "frac_Ienv", "r", "g", "b", "status"};

// Evaluates one cell from the decomposition at a single time.  Status is "ok", or
// "missing:<reason>" / "error:<message>" with NaN fractions.
ContributionCell contribution_cell(const ModelSpec& spec, const NormalModeBasis& basis,
                                   double eval_time);

// Cells in row-major order: gamma outer, temperature inner.
std::vector<ContributionCell> compute_contribution_map(const SweepConfig& config);
Table contribution_table(const std::vector<ContributionCell>& cells);
RunReport run_contribution_map(const SweepConfig& config);

// ---- negativity study (undriven)

struct NegativitySeries {
    double value{0.0};
    std::vector<double> t;
    std::vector<double> E_N;
    std::vector<double> I_SE;
};

std::vector<NegativitySeries> compute_negativity_study(const NegativityConfig& config);
RunReport run_negativity_study(const NegativityConfig& config);

// ---- definition comparison over a gamma ladder

struct DefinitionComparison {
    double gamma{0.0};
    std::vector<ThermoRecord> records;
    double max_abs_delta{0.0};
    double max_abs_epsilon{0.0};
};

std::vector<DefinitionComparison> compute_definition_comparison(const CompareConfig& config);
RunReport run_compare_definitions(const CompareConfig& config);

// max |x| over finite entries, 0 when there are none.
double max_abs_finite(const std::vector<double>& xs);

}  // namespace qbm
