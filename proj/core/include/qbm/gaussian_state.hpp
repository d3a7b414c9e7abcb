// gaussian_state.hpp — first and second moments of an n-mode Gaussian state

#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace qbm {

// Moments ordered as (x_0 ... x_{n-1}, p_0 ... p_{n-1}).  The covariance uses the
// symmetrized convention sigma = <{R_i, R_j}>/2 - <R_i><R_j>, so the vacuum of a
// unit-frequency oscillator is diag(1/2, 1/2).
class GaussianState {
public:
    GaussianState(Eigen::VectorXd means, Eigen::MatrixXd covariance);

    static GaussianState centered(Eigen::MatrixXd covariance);

    std::size_t modes() const noexcept { return static_cast<std::size_t>(means_.size() / 2); }
    const Eigen::VectorXd& means() const noexcept { return means_; }
    const Eigen::MatrixXd& covariance() const noexcept { return cov_; }

    double mean_x(std::size_t mode) const { return means_(static_cast<Eigen::Index>(mode)); }
    double mean_p(std::size_t mode) const {
        return means_(static_cast<Eigen::Index>(mode + modes()));
    }

private:
    Eigen::VectorXd means_;
    Eigen::MatrixXd cov_;
};

// Standard symplectic form [[0, 1], [-1, 0]] in the (x..., p...) ordering.
Eigen::MatrixXd symplectic_form(std::size_t modes);

}  // namespace qbm
