// normal_modes.hpp — exact closed-form dynamics of the coupled oscillators.
//
// The position block H_x = Z diag(z^2) Z^T is diagonalized once; at any time t the
// Heisenberg solution is x(t) = Adot x(0) + A p(0) + I, p(t) = Addot x(0) + Adot p(0) + Idot
// with A = Z diag(sin(z t)/z) Z^T.  Every evaluation starts from t = 0.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbm/bath_model.hpp"
#include "qbm/gaussian_state.hpp"

namespace qbm {

struct NormalModeBasis {
    Eigen::VectorXd frequencies;  // z_nu, ascending
    Eigen::MatrixXd vectors;      // Z, column nu is the eigenvector of z_nu^2

    std::size_t size() const noexcept { return static_cast<std::size_t>(frequencies.size()); }
};

// Throws StabilityError when any eigenvalue of hx is not strictly positive.
// Each eigenvector is signed so that its largest-magnitude component is positive.
NormalModeBasis diagonalize(const Eigen::MatrixXd& hx);

// Drive displacement of the moments: I_mu(t) and its time derivative.
struct DriveDisplacement {
    Eigen::VectorXd position;
    Eigen::VectorXd momentum;
};

// Running convolution integrals of the pulse against each normal mode,
//   C_nu(t) = int_0^t cos(z_nu s) F(s) ds,  S_nu(t) = int_0^t sin(z_nu s) F(s) ds,
// advanced monotonically along a time grid.  Each increment is integrated with
// Gauss-Legendre on period-sized pieces, so a dense output grid costs no accuracy.
class DriveConvolution {
public:
    DriveConvolution(const NormalModeBasis& basis, const DrivePulse& pulse);

    // Requires t >= current time.
    void advance_to(double t);
    double time() const noexcept { return time_; }

    // Displacement at the current time.
    DriveDisplacement displacement() const;

private:
    const NormalModeBasis* basis_;
    DrivePulse pulse_;
    double time_{0.0};
    Eigen::VectorXd cos_integral_;
    Eigen::VectorXd sin_integral_;
};

// Symplectic map M(t) = [[Adot, A], [Addot, Adot]] plus the drive displacement.
struct Propagator {
    double t{0.0};
    Eigen::MatrixXd A;
    Eigen::MatrixXd Adot;
    Eigen::MatrixXd Addot;
    Eigen::VectorXd I;
    Eigen::VectorXd Idot;

    Eigen::MatrixXd map() const;
};

Propagator propagator_at(const NormalModeBasis& basis, const DrivePulse& pulse, double t);
// Uses an already-advanced convolution; requires conv.time() == t.
Propagator propagator_at(const NormalModeBasis& basis, const DriveConvolution& conv, double t);
// Uses a displacement computed elsewhere for the same t.
Propagator propagator_at(const NormalModeBasis& basis, double t, DriveDisplacement displacement);

// means(t) = M means(0) + (I, Idot), cov(t) = M cov(0) M^T.
GaussianState evolve(const GaussianState& initial, const Propagator& prop);

// Per-mode moments of the evolved state without forming the full covariance.
// Row mu holds (<x_mu>, <p_mu>, sigma_xx, sigma_xp, sigma_pp).
using ModeMoments = Eigen::Matrix<double, Eigen::Dynamic, 5>;
ModeMoments evolve_mode_moments(const GaussianState& initial, const Propagator& prop);

// Poincare recurrence time 2 pi N / omega_max of the finite bath.
double recurrence_time(const ModelSpec& spec);

// Uniform grid of n_points on [0, t_end], endpoints included.
std::vector<double> uniform_time_grid(double t_end, std::size_t n_points);

}  // namespace qbm
