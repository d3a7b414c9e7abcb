// trajectory.hpp — sampling the exact Gaussian dynamics on a time grid.
//
// The full 2(N+1)-dimensional covariance is formed per time point only when a global
// quantity (bath entropy, negativity, total spectrum) is requested; the thermodynamic
// bookkeeping needs only one-mode marginals.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbm/bath_model.hpp"
#include "qbm/gaussian_state.hpp"
#include "qbm/normal_modes.hpp"

namespace qbm {

struct Snapshot {
    double t{0.0};
    double force{0.0};       // F(t)
    double force_rate{0.0};  // dF/dt
    ModeMoments modes;       // row 0 = system, row n = bath mode n
    std::optional<double> bath_entropy;  // S_E
    std::optional<double> negativity;    // E_N
    std::optional<double> total_spectrum_drift;  // max |nu_i(t) - nu_i(0)| of the full state

    GaussianState mode(std::size_t index) const;
};

struct SamplingOptions {
    bool bath_entropy{true};
    bool negativity{false};
    bool total_spectrum{false};
    std::size_t threads{1};
};

struct Trajectory {
    ModelSpec spec;
    Eigen::VectorXd bath_frequencies;
    double total_entropy{0.0};  // S_SE, conserved by the unitary dynamics
    std::vector<Snapshot> samples;

    std::size_t bath_modes() const noexcept { return spec.n_modes; }
};

// Samples the model on `times` (ascending, starting at 0 if DL-type integrals are needed).
Trajectory sample_trajectory(const ModelSpec& spec, const NormalModeBasis& basis,
                             std::span<const double> times, const SamplingOptions& options);

// Convenience: builds couplings and basis from the spec.
Trajectory sample_trajectory(const ModelSpec& spec, std::span<const double> times,
                             const SamplingOptions& options);

NormalModeBasis basis_for(const ModelSpec& spec);

}  // namespace qbm
