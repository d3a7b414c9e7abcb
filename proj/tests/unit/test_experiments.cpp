#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qbm/experiments.hpp"
#include "qbm/normal_modes.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Experiments : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qbm_experiments_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    qbm::RunConfig small_run() const {
        qbm::RunConfig c;
        c.model.n_modes = 24;
        c.model.omega_max = 9.6;
        c.model.cutoff = 9.6;
        c.model.gamma = 0.5;
        c.model.temperature = 1.0;
        c.n_points = 41;
        c.output = dir_ / "run.csv";
        return c;
    }

    fs::path dir_;
};

TEST_F(Experiments, UncoupledRunIsAllZero) {
    qbm::RunConfig c = small_run();
    c.model.gamma = 0.0;
    const auto records = qbm::compute_timeseries(c);
    for (const auto& r : records) {
        EXPECT_NEAR(r.dS_ELB, 0.0, 1e-12);
        EXPECT_NEAR(r.dS_DL, 0.0, 1e-12);
        EXPECT_NEAR(r.E_N, 0.0, 1e-12);
    }
}

TEST_F(Experiments, TimeseriesWritesTableAndManifest) {
    qbm::RunConfig c = small_run();
    c.model.drive.amplitude = 3.0;
    const qbm::RunReport report = qbm::run_timeseries(c);
    ASSERT_TRUE(fs::exists(report.output));
    ASSERT_TRUE(fs::exists(report.manifest));
    const auto manifest = nlohmann::json::parse(slurp(report.manifest));
    EXPECT_EQ(manifest["version"], qbm::tool_version());
    EXPECT_EQ(manifest["command"], "simulate");
    EXPECT_EQ(manifest["config"]["drive"]["f0"], 3.0);
    EXPECT_NEAR(manifest["constants"]["t_max"].get<double>(), qbm::recurrence_time(c.model), 1e-12);
    EXPECT_TRUE(manifest.contains("wall_time_s"));
    // Default t_end is the recurrence time, which triggers the recurrence warning.
    EXPECT_EQ(report.warnings.size(), 1u);

    std::istringstream csv(slurp(report.output));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header.substr(0, 9), "t,S_S,S_E");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT_EQ(rows, 41u);
}

TEST_F(Experiments, RerunIsByteIdentical) {
    qbm::RunConfig c = small_run();
    c.model.drive.amplitude = 10.0;
    c.output = dir_ / "a.csv";
    qbm::run_timeseries(c);
    c.output = dir_ / "b.csv";
    c.threads = 3;
    qbm::run_timeseries(c);
    EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(Experiments, RecurrenceWarningThreshold) {
    const qbm::ModelSpec spec = small_run().model;
    const double t_max = qbm::recurrence_time(spec);
    EXPECT_TRUE(qbm::recurrence_warnings(spec, 0.9 * t_max).empty());
    EXPECT_EQ(qbm::recurrence_warnings(spec, 0.91 * t_max).size(), 1u);
}

TEST_F(Experiments, SingleCellMapMatchesTimeseriesAtTmax) {
    qbm::SweepConfig s;
    s.base = small_run();
    s.gamma.values = {s.base.model.gamma};
    s.temperature.values = {s.base.model.temperature};
    const auto cells = qbm::compute_contribution_map(s);
    ASSERT_EQ(cells.size(), 1u);
    ASSERT_EQ(cells[0].status, "ok");
    const auto records = qbm::compute_timeseries(s.base);
    const auto& last = records.back();
    EXPECT_NEAR(cells[0].entropy_production, last.dS_ELB, 1e-12);
    EXPECT_NEAR(cells[0].frac_Denv, last.D_env / last.dS_ELB, 1e-12);
    EXPECT_NEAR(cells[0].frac_Ise, last.I_SE / last.dS_ELB, 1e-12);
    EXPECT_NEAR(cells[0].frac_Ienv, last.I_env / last.dS_ELB, 1e-12);
}

TEST_F(Experiments, MapCellsCarryStatusAndValidFractions) {
    qbm::SweepConfig s;
    s.base = small_run();
    s.gamma.values = {0.0, 0.3, 1.5};
    s.temperature.values = {0.0, 0.2, 2.0};
    const auto cells = qbm::compute_contribution_map(s);
    ASSERT_EQ(cells.size(), 9u);
    for (const auto& c : cells) {
        if (c.temperature == 0.0) {
            EXPECT_EQ(c.status, "missing:zero-temperature");
            EXPECT_TRUE(std::isnan(c.frac_Denv));
        } else if (c.gamma == 0.0) {
            EXPECT_EQ(c.status, "missing:no-entropy-production");
        } else {
            ASSERT_EQ(c.status, "ok");
            EXPECT_NEAR(c.frac_Denv + c.frac_Ise + c.frac_Ienv, 1.0, 1e-6);
            for (double f : {c.frac_Denv, c.frac_Ise, c.frac_Ienv}) {
                EXPECT_GE(f, -1e-6);
                EXPECT_LE(f, 1.0 + 1e-6);
            }
            for (int v : c.rgb) {
                EXPECT_GE(v, 0);
                EXPECT_LE(v, 255);
            }
            EXPECT_EQ(c.rgb[0], static_cast<int>(std::lround(255 * std::clamp(c.frac_Denv, 0.0, 1.0))));
        }
    }
    // Row-major: gamma outer, temperature inner.
    EXPECT_EQ(cells[4].gamma, 0.3);
    EXPECT_EQ(cells[4].temperature, 0.2);
}

TEST_F(Experiments, MapIsThreadCountInvariant) {
    qbm::SweepConfig s;
    s.base = small_run();
    s.gamma.values = {0.2, 1.0};
    s.temperature.values = {0.3, 1.0, 3.0};
    s.base.output = dir_ / "map1.csv";
    qbm::run_contribution_map(s);
    s.base.threads = 4;
    s.base.output = dir_ / "map4.csv";
    qbm::run_contribution_map(s);
    EXPECT_EQ(slurp(dir_ / "map1.csv"), slurp(dir_ / "map4.csv"));
    std::istringstream csv(slurp(dir_ / "map1.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "gamma,temperature,frac_Denv,frac_Ise,frac_Ienv,r,g,b,status");
}

TEST_F(Experiments, NegativityStudyIgnoresDrive) {
    qbm::NegativityConfig n;
    n.base = small_run();
    n.base.n_points = 11;
    n.values = {0.1, 1.0};
    const auto plain = qbm::compute_negativity_study(n);
    n.base.model.drive.amplitude = 10.0;
    const auto driven = qbm::compute_negativity_study(n);
    ASSERT_EQ(plain.size(), 2u);
    for (std::size_t i = 0; i < plain.size(); ++i) {
        EXPECT_EQ(plain[i].E_N, driven[i].E_N);
        EXPECT_EQ(plain[i].I_SE, driven[i].I_SE);
        EXPECT_NEAR(plain[i].E_N.front(), 0.0, 1e-12);
    }
    n.base.output = dir_ / "neg.csv";
    const auto report = qbm::run_negativity_study(n);
    std::istringstream csv(slurp(report.output));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "parameter,value,t,E_N,I_SE");
}

TEST_F(Experiments, CompareDefinitionsLadder) {
    qbm::CompareConfig c;
    c.base = small_run();
    c.base.model.temperature = 5.0;
    c.gammas = {0.5, 0.05};
    const auto ladder = qbm::compute_definition_comparison(c);
    ASSERT_EQ(ladder.size(), 2u);
    EXPECT_GT(ladder[0].max_abs_delta, ladder[1].max_abs_delta);
    EXPECT_EQ(ladder[1].records.size(), c.base.n_points);
    EXPECT_DOUBLE_EQ(qbm::max_abs_finite({-3.0, NAN, 2.0}), 3.0);
    EXPECT_EQ(qbm::max_abs_finite({NAN}), 0.0);
}

}  // namespace
