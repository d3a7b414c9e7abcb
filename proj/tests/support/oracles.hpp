// oracles.hpp — independent reference computations used by the tests.
//
// Nothing here calls into the closed-form propagator or the Gaussian toolkit; the references
// are brute-force integrations and textbook formulas.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qbm/bath_model.hpp"

namespace oracle {

// Fourth-order Runge-Kutta in long double for the linear system
//   d/dt (means, cov) with R = (x, p), dR/dt = K R + f(t),  K = [[0, I], [-H, 0]].
// Means and covariance are propagated directly (d sigma/dt = K sigma + sigma K^T).
struct LinearDynamics {
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> K;
    std::function<long double(long double)> force;  // acts on x_0 through dp_0/dt
};

inline LinearDynamics make_dynamics(const qbm::ModelSpec& spec) {
    const qbm::CouplingSet c = qbm::build_couplings(spec);
    const Eigen::Index n = static_cast<Eigen::Index>(spec.n_modes) + 1;
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> h =
        Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    // Build the position block from scratch: omega0^2 + counter term, bath frequencies,
    // couplings on the arrow.
    long double counter = 0.0L;
    for (Eigen::Index k = 1; k < n; ++k) {
        const long double w = static_cast<long double>(spec.bath_frequency(static_cast<std::size_t>(k)));
        const long double kap = static_cast<long double>(c.kappa(k - 1));
        counter += kap * kap / (w * w);
        h(k, k) = w * w;
        h(0, k) = h(k, 0) = -kap;
    }
    h(0, 0) = static_cast<long double>(spec.omega0) * spec.omega0 + counter;
    LinearDynamics d;
    d.K = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * n, 2 * n);
    d.K.topRightCorner(n, n).setIdentity();
    d.K.bottomLeftCorner(n, n) = -h;
    const qbm::DrivePulse pulse = spec.drive;
    d.force = [pulse](long double t) {
        if (!pulse.active() || t > static_cast<long double>(pulse.duration())) return 0.0L;
        const long double env = std::sin(static_cast<long double>(pulse.envelope_frequency) * t);
        return static_cast<long double>(pulse.amplitude) *
               std::sin(static_cast<long double>(pulse.frequency) * t +
                        static_cast<long double>(pulse.phase)) *
               env * env;
    };
    return d;
}

struct OdeState {
    Eigen::Matrix<long double, Eigen::Dynamic, 1> means;
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> cov;
};

// Integrates to each requested time (ascending) with at most step h.
inline std::vector<OdeState> integrate(const LinearDynamics& d, OdeState s,
                                       const std::vector<double>& times, long double h) {
    using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index dim = d.K.rows();
    const Eigen::Index n = dim / 2;
    auto drift = [&](long double t, const Vec& m) {
        Vec out = d.K * m;
        out(n) += d.force(t);
        return out;
    };
    auto cov_rate = [&](const Mat& c) -> Mat { return d.K * c + c * d.K.transpose(); };

    std::vector<OdeState> out;
    long double t = 0.0L;
    for (double target : times) {
        const long double T = target;
        while (t < T) {
            const long double dt = std::min(h, T - t);
            const Vec k1 = drift(t, s.means);
            const Vec k2 = drift(t + dt / 2, s.means + dt / 2 * k1);
            const Vec k3 = drift(t + dt / 2, s.means + dt / 2 * k2);
            const Vec k4 = drift(t + dt, s.means + dt * k3);
            s.means += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            const Mat c1 = cov_rate(s.cov);
            const Mat c2 = cov_rate(s.cov + dt / 2 * c1);
            const Mat c3 = cov_rate(s.cov + dt / 2 * c2);
            const Mat c4 = cov_rate(s.cov + dt * c3);
            s.cov += dt / 6 * (c1 + 2 * c2 + 2 * c3 + c4);
            t += dt;
        }
        out.push_back(s);
    }
    return out;
}

// Bosonic thermal occupation and entropy of one mode at frequency w, temperature T.
inline double occupation(double w, double T) { return 1.0 / std::expm1(w / T); }

inline double thermal_entropy(double nbar) {
    return (nbar + 1.0) * std::log(nbar + 1.0) - nbar * std::log(nbar);
}

// S(rho_th(n1) || rho_th(n2)) for thermal states of the same mode, from the Fock-basis
// closed form  sum_k p_k ln(p_k / q_k)  with geometric p, q.
inline double thermal_relative_entropy(double n1, double n2) {
    return n1 * std::log(n1 / n2) - (n1 + 1.0) * std::log((n1 + 1.0) / (n2 + 1.0));
}

}  // namespace oracle
