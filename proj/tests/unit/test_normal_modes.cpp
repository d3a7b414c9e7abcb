#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qbm/bath_model.hpp"
#include "qbm/errors.hpp"
#include "qbm/gaussian_state.hpp"
#include "qbm/normal_modes.hpp"
#include "qbm/trajectory.hpp"

namespace {

qbm::ModelSpec small_spec(std::size_t n, double gamma, double temperature) {
    qbm::ModelSpec spec;
    spec.n_modes = n;
    spec.omega_max = static_cast<double>(n) * 0.4;
    spec.cutoff = spec.omega_max;
    spec.gamma = gamma;
    spec.temperature = temperature;
    return spec;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(NormalModes, DiagonalizationReconstructsPositionBlock) {
    const qbm::ModelSpec spec = small_spec(40, 1.5, 1.0);
    const Eigen::MatrixXd hx = qbm::hamiltonian_position_block(spec, qbm::build_couplings(spec));
    const qbm::NormalModeBasis b = qbm::diagonalize(hx);
    const Eigen::MatrixXd z2 = b.frequencies.array().square().matrix().asDiagonal();
    EXPECT_LT(max_abs(b.vectors * z2 * b.vectors.transpose() - hx), 1e-11 * max_abs(hx));
    EXPECT_LT(max_abs(b.vectors.transpose() * b.vectors - Eigen::MatrixXd::Identity(41, 41)), 1e-12);
    for (Eigen::Index i = 1; i < b.frequencies.size(); ++i) {
        EXPECT_LE(b.frequencies(i - 1), b.frequencies(i));
    }
    for (Eigen::Index c = 0; c < b.vectors.cols(); ++c) {
        Eigen::Index idx = 0;
        b.vectors.col(c).cwiseAbs().maxCoeff(&idx);
        EXPECT_GT(b.vectors(idx, c), 0.0);
    }
}

TEST(NormalModes, UnstableSpectrumThrows) {
    Eigen::MatrixXd hx(2, 2);
    hx << 1.0, -2.0, -2.0, 1.0;  // eigenvalues -1, 3
    EXPECT_THROW(qbm::diagonalize(hx), qbm::StabilityError);
}

TEST(NormalModes, PropagatorAtTimeZeroIsIdentity) {
    const qbm::ModelSpec spec = small_spec(10, 0.5, 1.0);
    const qbm::NormalModeBasis b = qbm::basis_for(spec);
    const qbm::Propagator p = qbm::propagator_at(b, spec.drive, 0.0);
    EXPECT_LT(max_abs(p.A), 1e-15);
    EXPECT_LT(max_abs(p.Addot), 1e-15);
    EXPECT_LT(max_abs(p.Adot - Eigen::MatrixXd::Identity(11, 11)), 1e-13);
}

TEST(NormalModes, UncoupledSystemIsFreeOscillator) {
    const qbm::ModelSpec spec = small_spec(5, 0.0, 1.0);
    const qbm::NormalModeBasis b = qbm::basis_for(spec);
    for (double t : {0.5, 3.0, 7.7}) {
        const qbm::Propagator p = qbm::propagator_at(b, spec.drive, t);
        EXPECT_NEAR(p.Adot(0, 0), std::cos(t), 1e-13);
        EXPECT_NEAR(p.A(0, 0), std::sin(t), 1e-13);
        EXPECT_NEAR(p.Addot(0, 0), -std::sin(t), 1e-13);
        EXPECT_NEAR(p.A(0, 1), 0.0, 1e-15);
    }
}

TEST(NormalModes, AccelerationBlockSolvesEquationOfMotion) {
    const qbm::ModelSpec spec = small_spec(30, 1.0, 1.0);
    const Eigen::MatrixXd hx = qbm::hamiltonian_position_block(spec, qbm::build_couplings(spec));
    const qbm::NormalModeBasis b = qbm::diagonalize(hx);
    const qbm::Propagator p = qbm::propagator_at(b, spec.drive, 4.2);
    EXPECT_LT(max_abs(p.Addot + hx * p.A), 1e-10 * max_abs(hx));
}

TEST(NormalModes, MapIsSymplecticAndComposes) {
    const qbm::ModelSpec spec = small_spec(50, 2.0, 1.0);
    const qbm::NormalModeBasis b = qbm::basis_for(spec);
    const Eigen::MatrixXd omega = qbm::symplectic_form(51);
    const Eigen::MatrixXd m1 = qbm::propagator_at(b, spec.drive, 3.1).map();
    const Eigen::MatrixXd m2 = qbm::propagator_at(b, spec.drive, 5.4).map();
    const Eigen::MatrixXd m12 = qbm::propagator_at(b, spec.drive, 8.5).map();
    EXPECT_LT((m1 * omega * m1.transpose() - omega).norm(), 1e-10);
    EXPECT_LT(max_abs(m2 * m1 - m12), 1e-10);
}

// Closed-form int_0^t of sin(a s + phi) and cos(a s + phi).
double int_sin(double a, double phi, double t) {
    if (std::abs(a) < 1e-12) return t * std::sin(phi);
    return (std::cos(phi) - std::cos(a * t + phi)) / a;
}
double int_cos(double a, double phi, double t) {
    if (std::abs(a) < 1e-12) return t * std::cos(phi);
    return (std::sin(a * t + phi) - std::sin(phi)) / a;
}

// C = int_0^t cos(z s) F(s) ds and S = int_0^t sin(z s) F(s) ds for
// F = F0 sin(w s + phi) (1 - cos(2 W s)) / 2, expanded into pure sinusoids.
struct ConvolutionOracle {
    double c;
    double s;
};
ConvolutionOracle convolution_oracle(const qbm::DrivePulse& p, double z, double t) {
    const double w = p.frequency, W = p.envelope_frequency, phi = p.phase, f0 = p.amplitude;
    t = std::min(t, p.duration());
    // sin(ws+phi) cos(zs) = [sin((w+z)s+phi) + sin((w-z)s+phi)] / 2
    // sin(ws+phi) sin(zs) = [cos((w-z)s+phi) - cos((w+z)s+phi)] / 2
    // products with cos(2Ws) split each frequency a into a +- 2W with another factor 1/2.
    double c = 0.0, s = 0.0;
    for (double sign : {1.0, -1.0}) {
        const double a = w + sign * z;
        c += 0.5 * int_sin(a, phi, t);
        c -= 0.25 * (int_sin(a + 2 * W, phi, t) + int_sin(a - 2 * W, phi, t));
        s -= sign * 0.5 * int_cos(a, phi, t);
        s += sign * 0.25 * (int_cos(a + 2 * W, phi, t) + int_cos(a - 2 * W, phi, t));
    }
    return {0.5 * f0 * c, 0.5 * f0 * s};
}

TEST(NormalModes, DriveDisplacementMatchesClosedFormConvolution) {
    qbm::ModelSpec spec = small_spec(20, 0.8, 1.0);
    spec.drive = qbm::DrivePulse::from_duration(10.0, 1.2, 0.5 * qbm::recurrence_time(spec), 0.3);
    const qbm::NormalModeBasis b = qbm::basis_for(spec);
    const Eigen::Index n = b.frequencies.size();
    for (double t : {1.0, 9.0, 0.5 * qbm::recurrence_time(spec), qbm::recurrence_time(spec)}) {
        Eigen::VectorXd j(n), jdot(n);
        for (Eigen::Index nu = 0; nu < n; ++nu) {
            const double z = b.frequencies(nu);
            const ConvolutionOracle o = convolution_oracle(spec.drive, z, t);
            j(nu) = b.vectors(0, nu) * (std::sin(z * t) * o.c - std::cos(z * t) * o.s) / z;
            jdot(nu) = b.vectors(0, nu) * (std::cos(z * t) * o.c + std::sin(z * t) * o.s);
        }
        const qbm::Propagator p = qbm::propagator_at(b, spec.drive, t);
        EXPECT_LT((p.I - b.vectors * j).cwiseAbs().maxCoeff(), 1e-10) << "t = " << t;
        EXPECT_LT((p.Idot - b.vectors * jdot).cwiseAbs().maxCoeff(), 1e-10) << "t = " << t;
    }
}

TEST(NormalModes, IncrementalConvolutionMatchesSingleStep) {
    qbm::ModelSpec spec = small_spec(10, 0.5, 1.0);
    spec.drive = qbm::DrivePulse::from_duration(2.0, 1.0, 6.0);
    const qbm::NormalModeBasis b = qbm::basis_for(spec);
    qbm::DriveConvolution stepped(b, spec.drive);
    for (double t : qbm::uniform_time_grid(8.0, 41)) stepped.advance_to(t);
    qbm::DriveConvolution direct(b, spec.drive);
    direct.advance_to(8.0);
    EXPECT_LT((stepped.displacement().position - direct.displacement().position).norm(), 1e-12);
    EXPECT_THROW(stepped.advance_to(7.0), std::invalid_argument);
}

TEST(NormalModes, ModeMomentsMatchFullEvolution) {
    qbm::ModelSpec spec = small_spec(12, 1.0, 2.0);
    spec.drive = qbm::DrivePulse::from_duration(5.0, 1.2, 6.0);
    const qbm::NormalModeBasis b = qbm::basis_for(spec);
    const qbm::Propagator p = qbm::propagator_at(b, spec.drive, 4.0);

    auto check = [&](const qbm::GaussianState& rho0) {
        const qbm::GaussianState full = qbm::evolve(rho0, p);
        const qbm::ModeMoments mm = qbm::evolve_mode_moments(rho0, p);
        const Eigen::Index n = 13;
        for (Eigen::Index mu = 0; mu < n; ++mu) {
            EXPECT_NEAR(mm(mu, 0), full.means()(mu), 1e-12);
            EXPECT_NEAR(mm(mu, 1), full.means()(n + mu), 1e-12);
            EXPECT_NEAR(mm(mu, 2), full.covariance()(mu, mu), 1e-12);
            EXPECT_NEAR(mm(mu, 3), full.covariance()(mu, n + mu), 1e-12);
            EXPECT_NEAR(mm(mu, 4), full.covariance()(n + mu, n + mu), 1e-12);
        }
    };
    const qbm::GaussianState product = qbm::initial_state(spec);
    check(product);

    // A correlated, displaced start exercises the general path.
    Eigen::MatrixXd cov = product.covariance();
    cov(0, 27) = cov(27, 0) = 0.05;
    cov(3, 5) = cov(5, 3) = -0.02;
    Eigen::VectorXd means = Eigen::VectorXd::LinSpaced(26, -1.0, 1.0);
    check(qbm::GaussianState(means, cov));
}

struct OracleCase {
    std::size_t n;
    double gamma;
    double f0;
};

class ClosedFormVsOde : public ::testing::TestWithParam<OracleCase> {};

TEST_P(ClosedFormVsOde, MomentsAgreeOverRecurrenceWindow) {
    const OracleCase c = GetParam();
    qbm::ModelSpec spec;
    spec.n_modes = c.n;
    spec.omega_max = static_cast<double>(c.n);
    spec.cutoff = spec.omega_max;
    spec.gamma = c.gamma;
    spec.temperature = 1.5;
    const double t_max = qbm::recurrence_time(spec);
    spec.drive = qbm::DrivePulse::from_duration(c.f0, 1.2, 0.5 * t_max);

    const std::vector<double> times = qbm::uniform_time_grid(t_max, 9);
    const oracle::LinearDynamics dyn = oracle::make_dynamics(spec);
    const qbm::GaussianState rho0 = qbm::initial_state(spec);
    oracle::OdeState s0{rho0.means().cast<long double>(), rho0.covariance().cast<long double>()};
    const auto ref = oracle::integrate(dyn, s0, times, 1e-3L);

    const qbm::NormalModeBasis b = qbm::basis_for(spec);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const qbm::GaussianState rho = qbm::evolve(rho0, qbm::propagator_at(b, spec.drive, times[k]));
        const Eigen::MatrixXd cov_ref = ref[k].cov.cast<double>();
        const Eigen::VectorXd mean_ref = ref[k].means.cast<double>();
        EXPECT_LT((rho.covariance() - cov_ref).norm(), 1e-8 * cov_ref.norm()) << "t = " << times[k];
        EXPECT_LT((rho.means() - mean_ref).norm(), 1e-8 * std::max(1.0, mean_ref.norm()))
            << "t = " << times[k];
    }
}

INSTANTIATE_TEST_SUITE_P(SmallBaths, ClosedFormVsOde,
                         ::testing::Values(OracleCase{1, 0.1, 0.0}, OracleCase{1, 0.5, 3.0},
                                           OracleCase{2, 0.3, 0.0}, OracleCase{2, 1.0, 10.0}));

TEST(NormalModes, TimeGrid) {
    const auto g = qbm::uniform_time_grid(10.0, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 10.0);
    EXPECT_DOUBLE_EQ(g[1], 2.5);
    EXPECT_THROW(qbm::uniform_time_grid(10.0, 1), std::invalid_argument);
}

}  // namespace
