#include "qbm/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qbm/errors.hpp"

namespace qbm {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::string cell_text(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return format_double(*d);
    if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr);
    }
    if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << cell_text(row[i]);
        }
        out << '\n';
    }
}

nlohmann::json table_to_json(const Table& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const Cell& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

void write_table(const std::filesystem::path& path, OutputFormat format, const Table& table) {
    std::ostringstream buf;
    if (format == OutputFormat::csv) {
        write_csv(buf, table);
    } else {
        buf << table_to_json(table).dump(1) << '\n';
    }
    write_atomically(path, buf.str());
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    write_atomically(path, doc.dump(2) + "\n");
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
    std::filesystem::path p = output;
    p += ".manifest.json";
    return p;
}

void validate_record(const ThermoRecord& r) {
    if (std::isfinite(r.dS_ELB) && r.dS_ELB < -1e-8) {
        std::ostringstream msg;
        msg << "ELB entropy production negative (" << r.dS_ELB << ") at t = " << r.t;
        throw StabilityError(msg.str());
    }
    if (std::isfinite(r.dS_ELB) && std::isfinite(r.I_SE) && std::isfinite(r.I_env) &&
        std::isfinite(r.D_env)) {
        const double gap = std::abs(r.I_SE + r.I_env + r.D_env - r.dS_ELB);
        if (gap > 1e-7 * std::max(1.0, std::abs(r.dS_ELB))) {
            std::ostringstream msg;
            msg << "entropy production decomposition does not close (gap " << gap
                << ") at t = " << r.t;
            throw StabilityError(msg.str());
        }
    }
}

Table thermo_table(const std::vector<ThermoRecord>& records) {
    Table table;
    table.columns.assign(std::begin(kThermoColumns), std::end(kThermoColumns));
    for (const ThermoRecord& r : records) {
        table.rows.push_back({r.t, r.S_S, r.S_E, r.S_SE, r.dS_Spohn, r.dS_DL, r.dS_ELB, r.I_SE,
                              r.I_env, r.D_env, r.delta, r.epsilon, r.E_N, r.U_S, r.U_E});
    }
    return table;
}

}  // namespace qbm
