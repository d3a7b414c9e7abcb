// output.hpp — CSV/JSON tables and run manifests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbm/config.hpp"
#include "qbm/thermodynamics.hpp"

namespace qbm {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// 17 significant digits, "nan" for missing values.
std::string format_double(double value);

void write_csv(std::ostream& out, const Table& table);
// {"columns": [...], "rows": [[...], ...]} with NaN as null.
nlohmann::json table_to_json(const Table& table);

// Writes through a temporary file and renames it into place.
void write_table(const std::filesystem::path& path, OutputFormat format, const Table& table);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

std::filesystem::path manifest_path(const std::filesystem::path& output);

// Throws StabilityError when a record violates ELB positivity or decomposition closure.
void validate_record(const ThermoRecord& record);

Table thermo_table(const std::vector<ThermoRecord>& records);

}  // namespace qbm
