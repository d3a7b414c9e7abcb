#include "qbm/thermodynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "qbm/bath_model.hpp"
#include "qbm/gaussian_states.hpp"

namespace qbm {

namespace {

GaussianState initial_system(const ModelSpec& spec) {
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    cov(0, 0) = 1.0 / (2.0 * spec.omega0);
    cov(1, 1) = spec.omega0 / 2.0;
    return GaussianState(Eigen::Vector2d::Zero(), cov);
}

double initial_bath_energy(const ModelSpec& spec) {
    double u = 0.0;
    for (std::size_t n = 1; n <= spec.n_modes; ++n) {
        const double w = spec.bath_frequency(n);
        u += 0.5 * w * thermal_coth(w, spec.temperature);
    }
    return u;
}

bool drive_enters(const Trajectory& traj, const SystemHamiltonianSpec& hspec) {
    return hspec.include_drive && traj.spec.drive.active();
}

double force_of(const Snapshot& s, bool driven) { return driven ? s.force : 0.0; }

void require_beta(double beta) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("inverse temperature must be positive");
    }
}

// Uniform spacing of the sample grid, which must start at t = 0.
double grid_step(const Trajectory& traj) {
    const auto& s = traj.samples;
    if (s.empty() || s.front().t != 0.0) {
        throw std::invalid_argument("time integrals need a sample grid starting at t = 0");
    }
    if (s.size() == 1) return 0.0;
    const double h = (s.back().t - s.front().t) / static_cast<double>(s.size() - 1);
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (std::abs((s[k].t - s[k - 1].t) - h) > 1e-9 * std::max(1.0, h)) {
            throw std::invalid_argument("time integrals need a uniform sample grid");
        }
    }
    return h;
}

}  // namespace

SystemHamiltonianSpec SystemHamiltonianSpec::for_model(const ModelSpec& spec) {
    return SystemHamiltonianSpec{spec.omega0, spec.drive.active()};
}

GaussianState gibbs_state_system(const SystemHamiltonianSpec& hspec, double beta, double force) {
    require_beta(beta);
    if (!(hspec.frequency > 0.0)) {
        throw std::invalid_argument("system frequency must be positive");
    }
    const double w = hspec.frequency;
    const double c = 1.0 / std::tanh(0.5 * beta * w);
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    cov(0, 0) = c / (2.0 * w);
    cov(1, 1) = w * c / 2.0;
    const double shift = hspec.include_drive ? force / (w * w) : 0.0;
    return GaussianState(Eigen::Vector2d(shift, 0.0), cov);
}

double system_energy(const GaussianState& system, const SystemHamiltonianSpec& hspec,
                     double force) {
    const Eigen::MatrixXd& c = system.covariance();
    const double x = system.mean_x(0);
    const double p = system.mean_p(0);
    const double w = hspec.frequency;
    return 0.5 * (c(1, 1) + p * p) + 0.5 * w * w * (c(0, 0) + x * x) - force * x;
}

double bath_energy(const Snapshot& snapshot, const Eigen::VectorXd& bath_frequencies) {
    double u = 0.0;
    for (Eigen::Index n = 0; n < bath_frequencies.size(); ++n) {
        const auto& row = snapshot.modes.row(n + 1);
        const double w = bath_frequencies(n);
        u += 0.5 * (row(4) + row(1) * row(1)) + 0.5 * w * w * (row(2) + row(0) * row(0));
    }
    return u;
}

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    if (f.size() < 2) return out;
    if (f.size() == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (std::size_t i = 2; i < f.size(); ++i) {
        if (i % 2 == 0) {
            out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        } else {
            out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
        }
    }
    return out;
}

std::vector<double> entropy_production_spohn(const Trajectory& traj,
                                             const SystemHamiltonianSpec& hspec, double beta) {
    require_beta(beta);
    if (drive_enters(traj, hspec)) {
        throw std::invalid_argument(
            "Spohn entropy production assumes a time-independent system Hamiltonian");
    }
    const double w = hspec.frequency;
    const double initial = relative_entropy_to_thermal(initial_system(traj.spec), w, beta);
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (const Snapshot& s : traj.samples) {
        out.push_back(initial - relative_entropy_to_thermal(s.mode(0), w, beta));
    }
    return out;
}

std::vector<double> entropy_production_dl(const Trajectory& traj,
                                          const SystemHamiltonianSpec& hspec, double beta) {
    require_beta(beta);
    const bool driven = drive_enters(traj, hspec);
    const double w = hspec.frequency;
    const double w2 = w * w;

    std::vector<double> flux(traj.samples.size(), 0.0);
    std::vector<double> work_term(traj.samples.size(), 0.0);
    if (driven) {
        const double h = grid_step(traj);
        for (std::size_t k = 0; k < traj.samples.size(); ++k) {
            const Snapshot& s = traj.samples[k];
            flux[k] = beta * s.force_rate * (s.modes(0, 0) - s.force / w2);
        }
        work_term = cumulative_simpson(flux, h);
    }

    const double f0 = driven ? drive_force(traj.spec.drive, 0.0) : 0.0;
    const double initial = relative_entropy_to_thermal(initial_system(traj.spec), w, beta, f0 / w2);
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const Snapshot& s = traj.samples[k];
        const double center = force_of(s, driven) / w2;
        out.push_back(initial - relative_entropy_to_thermal(s.mode(0), w, beta, center) -
                      work_term[k]);
    }
    return out;
}

std::vector<double> entropy_production_elb(const Trajectory& traj, double beta) {
    require_beta(beta);
    const double s0 = von_neumann_entropy(initial_system(traj.spec));
    const double u0 = initial_bath_energy(traj.spec);
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (const Snapshot& s : traj.samples) {
        const double ds = von_neumann_entropy(s.mode(0)) - s0;
        out.push_back(ds + beta * (bath_energy(s, traj.bath_frequencies) - u0));
    }
    return out;
}

std::vector<double> heat_standard(const Trajectory& traj, const SystemHamiltonianSpec& hspec) {
    const bool driven = drive_enters(traj, hspec);
    const double u0 = system_energy(initial_system(traj.spec), hspec,
                                    driven ? drive_force(traj.spec.drive, 0.0) : 0.0);
    std::vector<double> power(traj.samples.size(), 0.0);
    std::vector<double> work(traj.samples.size(), 0.0);
    if (driven) {
        const double h = grid_step(traj);
        for (std::size_t k = 0; k < traj.samples.size(); ++k) {
            power[k] = traj.samples[k].force_rate * traj.samples[k].modes(0, 0);
        }
        work = cumulative_simpson(power, h);
    }
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const Snapshot& s = traj.samples[k];
        out.push_back(system_energy(s.mode(0), hspec, force_of(s, driven)) - u0 + work[k]);
    }
    return out;
}

std::vector<double> heat_elb(const Trajectory& traj) {
    const double u0 = initial_bath_energy(traj.spec);
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (const Snapshot& s : traj.samples) {
        out.push_back(u0 - bath_energy(s, traj.bath_frequencies));
    }
    return out;
}

Decomposition decomposition(const Trajectory& traj, double beta) {
    require_beta(beta);
    Decomposition d;
    const std::size_t n = traj.samples.size();
    d.I_SE.reserve(n);
    d.I_env.reserve(n);
    d.D_env.reserve(n);
    for (const Snapshot& s : traj.samples) {
        if (!s.bath_entropy) {
            throw std::invalid_argument("decomposition needs sampled bath entropies");
        }
        double sum_modes = 0.0;
        double distance = 0.0;
        for (Eigen::Index m = 0; m < traj.bath_frequencies.size(); ++m) {
            const GaussianState mode = s.mode(static_cast<std::size_t>(m + 1));
            sum_modes += von_neumann_entropy(mode);
            distance += relative_entropy_to_thermal(mode, traj.bath_frequencies(m), beta);
        }
        const double s_sys = von_neumann_entropy(s.mode(0));
        d.I_SE.push_back(s_sys + *s.bath_entropy - traj.total_entropy);
        d.I_env.push_back(sum_modes - *s.bath_entropy);
        d.D_env.push_back(distance);
    }
    return d;
}

DefinitionGap definition_gap(const std::vector<double>& elb, const std::vector<double>& dl) {
    if (elb.size() != dl.size()) {
        throw std::invalid_argument("entropy production series have different lengths");
    }
    DefinitionGap gap;
    gap.delta.resize(elb.size());
    gap.epsilon.resize(elb.size());
    for (std::size_t k = 0; k < elb.size(); ++k) {
        gap.delta[k] = elb[k] - dl[k];
        gap.epsilon[k] = (std::isfinite(elb[k]) && std::abs(elb[k]) >= kEpsilonGuard)
                             ? gap.delta[k] / elb[k]
                             : kMissing;
    }
    return gap;
}

std::vector<ThermoRecord> thermo_records(const Trajectory& traj,
                                         const SystemHamiltonianSpec& hspec) {
    const std::size_t n = traj.samples.size();
    const double beta = traj.spec.beta();
    const bool finite_t = std::isfinite(beta);
    const bool driven = drive_enters(traj, hspec);
    const bool have_bath = n > 0 && traj.samples.front().bath_entropy.has_value();

    std::vector<ThermoRecord> out(n);
    const std::vector<double> q_st = heat_standard(traj, hspec);
    const std::vector<double> q_elb = heat_elb(traj);
    std::vector<double> spohn(n, kMissing), dl(n, kMissing), elb(n, kMissing);
    Decomposition dec;
    if (finite_t) {
        if (!driven) spohn = entropy_production_spohn(traj, hspec, beta);
        dl = entropy_production_dl(traj, hspec, beta);
        elb = entropy_production_elb(traj, beta);
        if (have_bath) dec = decomposition(traj, beta);
    }
    const DefinitionGap gap = definition_gap(elb, dl);

    for (std::size_t k = 0; k < n; ++k) {
        const Snapshot& s = traj.samples[k];
        ThermoRecord& r = out[k];
        r.t = s.t;
        r.S_S = von_neumann_entropy(s.mode(0));
        r.S_SE = traj.total_entropy;
        r.U_S = system_energy(s.mode(0), hspec, force_of(s, driven));
        r.U_E = bath_energy(s, traj.bath_frequencies);
        r.heat_standard = q_st[k];
        r.heat_ELB = q_elb[k];
        r.dS_Spohn = spohn[k];
        r.dS_DL = dl[k];
        r.dS_ELB = elb[k];
        r.delta = gap.delta[k];
        r.epsilon = gap.epsilon[k];
        if (s.bath_entropy) {
            r.S_E = *s.bath_entropy;
            r.I_SE = r.S_S + r.S_E - r.S_SE;
            double sum_modes = 0.0;
            for (Eigen::Index m = 0; m < traj.bath_frequencies.size(); ++m) {
                sum_modes += von_neumann_entropy(s.mode(static_cast<std::size_t>(m + 1)));
            }
            r.I_env = sum_modes - r.S_E;
        }
        if (finite_t && have_bath) {
            r.D_env = dec.D_env[k];
        }
        if (s.negativity) r.E_N = *s.negativity;
    }
    return out;
}

}  // namespace qbm
