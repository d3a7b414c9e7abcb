#include "qbm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qbm/gaussian_states.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

GaussianState Snapshot::mode(std::size_t index) const {
    const auto i = static_cast<Eigen::Index>(index);
    if (i >= modes.rows()) {
        throw std::out_of_range("snapshot mode index out of range");
    }
    Eigen::Vector2d means(modes(i, 0), modes(i, 1));
    Eigen::Matrix2d cov;
    cov << modes(i, 2), modes(i, 3), modes(i, 3), modes(i, 4);
    return GaussianState(means, cov);
}

NormalModeBasis basis_for(const ModelSpec& spec) {
    spec.validate();
    return diagonalize(hamiltonian_position_block(spec, build_couplings(spec)));
}

Trajectory sample_trajectory(const ModelSpec& spec, std::span<const double> times,
                             const SamplingOptions& options) {
    const NormalModeBasis basis = basis_for(spec);
    return sample_trajectory(spec, basis, times, options);
}

Trajectory sample_trajectory(const ModelSpec& spec, const NormalModeBasis& basis,
                             std::span<const double> times, const SamplingOptions& options) {
    spec.validate();
    if (basis.size() != spec.n_modes + 1) {
        throw std::invalid_argument("normal-mode basis does not match the model size");
    }
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
        throw std::invalid_argument("sample times must be ascending and non-negative");
    }

    const GaussianState state0 = initial_state(spec);
    Trajectory traj;
    traj.spec = spec;
    traj.bath_frequencies = spec.bath_frequencies();
    // The initial state is a product of one-mode states, so S_SE(0) is a sum of mode terms.
    {
        const Eigen::Index m = static_cast<Eigen::Index>(state0.modes());
        const Eigen::VectorXd d = state0.covariance().diagonal();
        for (Eigen::Index i = 0; i < m; ++i) {
            traj.total_entropy += mode_entropy(std::sqrt(d(i) * d(m + i)));
        }
    }

    // Drive integrals are cumulative, so they run sequentially; everything else is per time.
    std::vector<DriveDisplacement> displacements;
    displacements.reserve(times.size());
    {
        DriveConvolution conv(basis, spec.drive);
        for (double t : times) {
            conv.advance_to(t);
            displacements.push_back(conv.displacement());
        }
    }

    const bool need_global = options.bath_entropy || options.negativity || options.total_spectrum;
    std::optional<SymplecticSpectrum> spectrum0;
    if (options.total_spectrum) {
        spectrum0 = symplectic_spectrum(state0.covariance());
    }

    traj.samples.resize(times.size());
    parallel_for(times.size(), options.threads, [&](std::size_t k) {
        const double t = times[k];
        const Propagator prop = propagator_at(basis, t, std::move(displacements[k]));
        Snapshot& snap = traj.samples[k];
        snap.t = t;
        snap.force = drive_force(spec.drive, t);
        snap.force_rate = drive_force_derivative(spec.drive, t);
        if (!need_global) {
            snap.modes = evolve_mode_moments(state0, prop);
            return;
        }
        const GaussianState state = evolve(state0, prop);
        const auto m = static_cast<Eigen::Index>(state.modes());
        snap.modes.resize(m, 5);
        const Eigen::MatrixXd& cov = state.covariance();
        for (Eigen::Index mu = 0; mu < m; ++mu) {
            snap.modes(mu, 0) = state.means()(mu);
            snap.modes(mu, 1) = state.means()(m + mu);
            snap.modes(mu, 2) = cov(mu, mu);
            snap.modes(mu, 3) = cov(mu, m + mu);
            snap.modes(mu, 4) = cov(m + mu, m + mu);
        }
        if (options.bath_entropy) {
            const GaussianState bath = marginal(state, ModeSelection::range(1, state.modes()));
            snap.bath_entropy = von_neumann_entropy(bath);
        }
        if (options.negativity) {
            snap.negativity = logarithmic_negativity(state, 0);
        }
        if (options.total_spectrum) {
            const SymplecticSpectrum now = symplectic_spectrum(cov);
            snap.total_spectrum_drift = (now.nu - spectrum0->nu).cwiseAbs().maxCoeff();
        }
    });
    return traj;
}

}  // namespace qbm
