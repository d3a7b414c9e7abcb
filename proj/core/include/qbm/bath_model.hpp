// bath_model.hpp — discretized Caldeira-Leggett model: frequency grid, Ohmic couplings,
// counter-term renormalization, the driving pulse, and the uncorrelated initial state.
//
// Units: hbar = k_B = 1, frequencies in units of the renormalized system frequency.

#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "qbm/gaussian_state.hpp"

namespace qbm {

// F(t) = F0 sin(omega_f t + phi) sin^2(Omega_f t) on [0, pi/Omega_f], zero afterwards.
struct DrivePulse {
    double amplitude{0.0};           // F0
    double frequency{1.2};           // omega_f
    double envelope_frequency{0.0};  // Omega_f; the pulse lasts pi / Omega_f
    double phase{0.0};               // phi

    static DrivePulse from_duration(double amplitude, double frequency, double duration,
                                    double phase = 0.0);

    bool active() const noexcept { return amplitude != 0.0; }
    double duration() const;
};

double drive_force(const DrivePulse& pulse, double t);
double drive_force_derivative(const DrivePulse& pulse, double t);

struct ModelSpec {
    std::size_t n_modes{400};
    double omega0{1.0};
    double omega_max{40.0};
    double gamma{0.1};
    double cutoff{40.0};  // sharp cutoff Omega of the Ohmic density
    double temperature{10.0};
    DrivePulse drive{};

    // Throws ConfigError on violated parameter ranges.
    void validate() const;

    double spacing() const noexcept { return omega_max / static_cast<double>(n_modes); }
    // omega_n = n * spacing for n = 1..N
    double bath_frequency(std::size_t n) const noexcept {
        return static_cast<double>(n) * spacing();
    }
    Eigen::VectorXd bath_frequencies() const;
    // 1 / k_B T, +inf at T = 0.
    double beta() const noexcept;
};

struct CouplingSet {
    Eigen::VectorXd kappa;  // kappa_n, n = 1..N stored at index n-1
    double omega_b{0.0};    // bare frequency including the counter term
};

// J(omega) = (2 gamma / pi) omega Theta(Omega - omega), with the cutoff inclusive.
double spectral_density(const ModelSpec& spec, double omega) noexcept;

CouplingSet build_couplings(const ModelSpec& spec);

// Arrowhead matrix: omega_b^2 at (0,0), omega_n^2 on the diagonal, -kappa_n on the
// first row and column.  Exactly symmetric.
Eigen::MatrixXd hamiltonian_position_block(const ModelSpec& spec, const CouplingSet& couplings);

// coth(omega / 2T), taking the T -> 0 limit as exactly 1.
double thermal_coth(double omega, double temperature) noexcept;

// System in the ground state of frequency omega0, bath modes thermal at the spec
// temperature, no correlations and no displacement.
GaussianState initial_state(const ModelSpec& spec);

}  // namespace qbm
