// config.hpp — run and sweep configuration, loaded from TOML or JSON files.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbm/bath_model.hpp"
#include "qbm/thermodynamics.hpp"

namespace qbm {

enum class OutputFormat { csv, json };

struct Observables {
    bool thermo{true};
    bool decomposition{true};
    bool negativity{true};
};

struct RunConfig {
    ModelSpec model{};            // drive.envelope_frequency is resolved from drive_duration
    std::optional<double> drive_duration;  // t_f; defaults to half the recurrence time
    std::optional<double> t_end;           // defaults to the recurrence time
    std::size_t n_points{2000};
    Observables observables{};
    std::string gibbs_frequency{"omega0"};  // or "omega_b"
    std::filesystem::path output{"qbm_output.csv"};
    OutputFormat format{OutputFormat::csv};
    std::size_t threads{1};

    // Model with the pulse envelope filled in and all ranges checked.
    ModelSpec resolved_model() const;
    double resolved_t_end() const;
    std::vector<double> time_grid() const;
    SystemHamiltonianSpec system_hamiltonian() const;
    void validate() const;
};

// Grid along one sweep axis, either explicit values or {min, max, count, spacing}.
struct AxisGrid {
    std::vector<double> values;

    static AxisGrid linear(double lo, double hi, std::size_t count);
    static AxisGrid logarithmic(double lo, double hi, std::size_t count);
};

struct SweepConfig {
    RunConfig base{};
    AxisGrid gamma{AxisGrid::linear(0.0, 2.0, 60)};
    AxisGrid temperature{AxisGrid::linear(0.0, 5.0, 60)};
    std::optional<double> eval_time;  // defaults to the recurrence time

    void validate() const;
};

struct NegativityConfig {
    RunConfig base{};
    std::string parameter{"temperature"};  // or "gamma"
    std::vector<double> values{0.05, 0.1, 0.5, 1.0};

    void validate() const;
};

struct CompareConfig {
    RunConfig base{};
    std::vector<double> gammas{0.1, 0.01, 0.001};

    void validate() const;
};

// Reads a config file; the format is sniffed from the content (a leading '{' means JSON,
// anything else is parsed as TOML).  Throws ConfigError for missing or malformed files.
nlohmann::json load_config_document(const std::filesystem::path& path);
nlohmann::json parse_config_text(std::string_view text);

// Minimal TOML reader: tables, dotted headers, inline tables, scalar and array values.
nlohmann::json parse_toml_subset(std::string_view text);

RunConfig run_config_from_json(const nlohmann::json& doc);
SweepConfig sweep_config_from_json(const nlohmann::json& doc);
NegativityConfig negativity_config_from_json(const nlohmann::json& doc);
CompareConfig compare_config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const SweepConfig& config);
nlohmann::json to_json(const NegativityConfig& config);
nlohmann::json to_json(const CompareConfig& config);

OutputFormat parse_output_format(std::string_view name);

}  // namespace qbm
