#include "qbm/normal_modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qbm/errors.hpp"

namespace qbm {

NormalModeBasis diagonalize(const Eigen::MatrixXd& hx) {
    if (hx.rows() != hx.cols() || hx.rows() == 0) {
        throw std::invalid_argument("position block must be square and nonempty");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hx);
    if (solver.info() != Eigen::Success) {
        throw StabilityError("eigendecomposition of the position block failed");
    }
    const Eigen::VectorXd& eig = solver.eigenvalues();
    if (!eig.allFinite() || eig.minCoeff() <= 0.0) {
        std::ostringstream msg;
        msg << "unstable normal-mode spectrum: smallest eigenvalue " << eig.minCoeff();
        throw StabilityError(msg.str());
    }

    NormalModeBasis basis;
    basis.frequencies = eig.cwiseSqrt();
    basis.vectors = solver.eigenvectors();
    // Eigen already sorts ascending; fix the sign convention for reproducibility.
    for (Eigen::Index c = 0; c < basis.vectors.cols(); ++c) {
        Eigen::Index idx = 0;
        basis.vectors.col(c).cwiseAbs().maxCoeff(&idx);
        if (basis.vectors(idx, c) < 0.0) {
            basis.vectors.col(c) *= -1.0;
        }
    }
    return basis;
}

Eigen::MatrixXd Propagator::map() const {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = Adot;
    m.topRightCorner(n, n) = A;
    m.bottomLeftCorner(n, n) = Addot;
    m.bottomRightCorner(n, n) = Adot;
    return m;
}

namespace {

Propagator assemble(const NormalModeBasis& basis, double t) {
    const Eigen::VectorXd& z = basis.frequencies;
    const Eigen::MatrixXd& zm = basis.vectors;
    const Eigen::Index n = z.size();
    Eigen::VectorXd sinc(n), cosv(n), accel(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::sin(z(i) * t);
        sinc(i) = s / z(i);
        cosv(i) = std::cos(z(i) * t);
        accel(i) = -z(i) * s;
    }
    Propagator p;
    p.t = t;
    p.A.noalias() = zm * sinc.asDiagonal() * zm.transpose();
    p.Adot.noalias() = zm * cosv.asDiagonal() * zm.transpose();
    p.Addot.noalias() = zm * accel.asDiagonal() * zm.transpose();
    return p;
}

}  // namespace

Propagator propagator_at(const NormalModeBasis& basis, const DriveConvolution& conv, double t) {
    if (t < 0.0) {
        throw std::invalid_argument("propagation time must be non-negative");
    }
    if (conv.time() != t) {
        throw std::invalid_argument("drive convolution has not been advanced to the requested time");
    }
    Propagator p = assemble(basis, t);
    DriveDisplacement d = conv.displacement();
    p.I = std::move(d.position);
    p.Idot = std::move(d.momentum);
    return p;
}

Propagator propagator_at(const NormalModeBasis& basis, double t, DriveDisplacement displacement) {
    if (t < 0.0) {
        throw std::invalid_argument("propagation time must be non-negative");
    }
    if (displacement.position.size() != basis.frequencies.size() ||
        displacement.momentum.size() != basis.frequencies.size()) {
        throw std::invalid_argument("drive displacement does not match the basis size");
    }
    Propagator p = assemble(basis, t);
    p.I = std::move(displacement.position);
    p.Idot = std::move(displacement.momentum);
    return p;
}

Propagator propagator_at(const NormalModeBasis& basis, const DrivePulse& pulse, double t) {
    if (t < 0.0) {
        throw std::invalid_argument("propagation time must be non-negative");
    }
    DriveConvolution conv(basis, pulse);
    conv.advance_to(t);
    return propagator_at(basis, conv, t);
}

GaussianState evolve(const GaussianState& initial, const Propagator& prop) {
    const auto n = static_cast<Eigen::Index>(initial.modes());
    if (prop.A.rows() != n) {
        throw std::invalid_argument("propagator and state have different mode counts");
    }
    const Eigen::MatrixXd m = prop.map();
    Eigen::VectorXd means = m * initial.means();
    means.head(n) += prop.I;
    means.tail(n) += prop.Idot;
    Eigen::MatrixXd cov = m * initial.covariance() * m.transpose();
    // Restore exact symmetry lost to rounding in the triple product.
    cov = (0.5 * (cov + cov.transpose())).eval();
    return GaussianState(std::move(means), std::move(cov));
}

ModeMoments evolve_mode_moments(const GaussianState& initial, const Propagator& prop) {
    const auto n = static_cast<Eigen::Index>(initial.modes());
    if (prop.A.rows() != n) {
        throw std::invalid_argument("propagator and state have different mode counts");
    }
    const Eigen::MatrixXd& cov0 = initial.covariance();
    const Eigen::VectorXd& mean0 = initial.means();
    ModeMoments out(n, 5);
    out.col(0) = prop.Adot * mean0.head(n) + prop.A * mean0.tail(n) + prop.I;
    out.col(1) = prop.Addot * mean0.head(n) + prop.Adot * mean0.tail(n) + prop.Idot;

    if (cov0.isDiagonal(0.0)) {
        // A, Adot, Addot are symmetric, so row mu equals column mu and every moment is a
        // weighted column reduction.
        const Eigen::ArrayXd cx = cov0.diagonal().head(n).array();
        const Eigen::ArrayXd cp = cov0.diagonal().tail(n).array();
        const auto a = prop.A.array();
        const auto ad = prop.Adot.array();
        const auto add = prop.Addot.array();
        out.col(2) = ((ad.square().colwise() * cx) + (a.square().colwise() * cp))
                         .colwise().sum().transpose();
        out.col(3) = (((ad * add).colwise() * cx) + ((a * ad).colwise() * cp))
                         .colwise().sum().transpose();
        out.col(4) = ((add.square().colwise() * cx) + (ad.square().colwise() * cp))
                         .colwise().sum().transpose();
        return out;
    }

    const Eigen::MatrixXd m = prop.map();
    Eigen::MatrixXd w;
    w.noalias() = m * cov0;
    for (Eigen::Index mu = 0; mu < n; ++mu) {
        const Eigen::Index px = n + mu;
        out(mu, 2) = w.row(mu).dot(m.row(mu));
        out(mu, 3) = 0.5 * (w.row(mu).dot(m.row(px)) + w.row(px).dot(m.row(mu)));
        out(mu, 4) = w.row(px).dot(m.row(px));
    }
    return out;
}

double recurrence_time(const ModelSpec& spec) {
    return 2.0 * std::numbers::pi * static_cast<double>(spec.n_modes) / spec.omega_max;
}

std::vector<double> uniform_time_grid(double t_end, std::size_t n_points) {
    if (n_points < 2 || !(t_end > 0.0)) {
        throw std::invalid_argument("time grid needs at least two points and t_end > 0");
    }
    std::vector<double> grid(n_points);
    const double h = t_end / static_cast<double>(n_points - 1);
    for (std::size_t k = 0; k < n_points; ++k) {
        grid[k] = h * static_cast<double>(k);
    }
    grid.back() = t_end;
    return grid;
}

}  // namespace qbm
