#include "qbm/gaussian_state.hpp"

#include <stdexcept>
#include <utility>

namespace qbm {

GaussianState::GaussianState(Eigen::VectorXd means, Eigen::MatrixXd covariance)
    : means_(std::move(means)), cov_(std::move(covariance)) {
    if (means_.size() == 0 || means_.size() % 2 != 0) {
        throw std::invalid_argument("Gaussian state needs an even, nonzero number of moments");
    }
    if (cov_.rows() != means_.size() || cov_.cols() != means_.size()) {
        throw std::invalid_argument("covariance shape does not match the moment vector");
    }
}

GaussianState GaussianState::centered(Eigen::MatrixXd covariance) {
    Eigen::VectorXd means = Eigen::VectorXd::Zero(covariance.rows());
    return GaussianState(std::move(means), std::move(covariance));
}

Eigen::MatrixXd symplectic_form(std::size_t modes) {
    const auto n = static_cast<Eigen::Index>(modes);
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n).setIdentity();
    omega.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return omega;
}

}  // namespace qbm
