#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qbm/errors.hpp"
#include "qbm/output.hpp"

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

TEST(Output, SeventeenSignificantDigits) {
    EXPECT_EQ(qbm::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(qbm::format_double(2.0), "2");
    EXPECT_EQ(qbm::format_double(NAN), "nan");
    const double x = 1.0 / 3.0;
    EXPECT_EQ(std::stod(qbm::format_double(x)), x);
}

TEST(Output, CsvHeaderIsThermoColumnOrder) {
    qbm::ThermoRecord r;
    r.t = 1.5;
    r.S_S = 0.25;
    const qbm::Table t = qbm::thermo_table({r});
    std::ostringstream out;
    qbm::write_csv(out, t);
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header,
              "t,S_S,S_E,S_SE,dS_Spohn,dS_DL,dS_ELB,I_SE,I_env,D_env,delta,epsilon,E_N,U_S,U_E");
    EXPECT_EQ(row.substr(0, 10), "1.5,0.25,n");
}

TEST(Output, JsonTableUsesNullForMissing) {
    qbm::Table t{{"a", "b", "c"}, {{1.0, std::int64_t{7}, std::string("ok")}, {NAN, std::int64_t{0}, std::string("x")}}};
    const nlohmann::json j = qbm::table_to_json(t);
    EXPECT_EQ(j["columns"].size(), 3u);
    EXPECT_TRUE(j["rows"][1][0].is_null());
    EXPECT_EQ(j["rows"][0][1], 7);
    EXPECT_EQ(j["rows"][0][2], "ok");
}

TEST(Output, WriteTableCreatesDirectoriesAndIsDeterministic) {
    const auto dir = std::filesystem::temp_directory_path() / "qbm_output_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    qbm::Table t{{"x"}, {{0.5}, {1.5}}};
    qbm::write_table(dir / "a.csv", qbm::OutputFormat::csv, t);
    qbm::write_table(dir / "b.csv", qbm::OutputFormat::csv, t);
    EXPECT_EQ(slurp(dir / "a.csv"), "x\n0.5\n1.5\n");
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
    qbm::write_table(dir / "a.json", qbm::OutputFormat::json, t);
    EXPECT_EQ(nlohmann::json::parse(slurp(dir / "a.json"))["rows"][1][0], 1.5);
    EXPECT_EQ(qbm::manifest_path(dir / "a.csv").filename(), "a.csv.manifest.json");
    std::filesystem::remove_all(dir.parent_path());
}

TEST(Output, ValidateRecordChecksElbAndClosure) {
    qbm::ThermoRecord r;
    r.dS_ELB = 1.0;
    r.I_SE = 0.5;
    r.I_env = 0.3;
    r.D_env = 0.2;
    EXPECT_NO_THROW(qbm::validate_record(r));
    r.D_env = 0.2 + 1e-6;
    EXPECT_THROW(qbm::validate_record(r), qbm::StabilityError);
    r.D_env = 0.2;
    r.dS_ELB = -1e-6;
    r.I_SE = -1e-6 - 0.5;
    EXPECT_THROW(qbm::validate_record(r), qbm::StabilityError);
    qbm::ThermoRecord missing;
    EXPECT_NO_THROW(qbm::validate_record(missing));
}

}  // namespace
