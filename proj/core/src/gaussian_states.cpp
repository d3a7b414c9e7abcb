#include "qbm/gaussian_states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "qbm/errors.hpp"

namespace qbm {

// ---------------------------------------------------------------- ModeSelection

ModeSelection::ModeSelection(std::initializer_list<std::size_t> modes)
    : ModeSelection(std::vector<std::size_t>(modes)) {}

ModeSelection::ModeSelection(std::vector<std::size_t> modes) : modes_(std::move(modes)) {
    std::vector<std::size_t> sorted = modes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("mode selection contains duplicate indices");
    }
}

ModeSelection ModeSelection::all(std::size_t mode_count) { return range(0, mode_count); }

ModeSelection ModeSelection::range(std::size_t first, std::size_t last) {
    std::vector<std::size_t> modes;
    for (std::size_t m = first; m < last; ++m) modes.push_back(m);
    return ModeSelection(std::move(modes));
}

bool ModeSelection::contains(std::size_t mode) const {
    return std::find(modes_.begin(), modes_.end(), mode) != modes_.end();
}

void ModeSelection::check(std::size_t mode_count) const {
    for (std::size_t m : modes_) {
        if (m >= mode_count) {
            std::ostringstream msg;
            msg << "mode index " << m << " out of range for a " << mode_count << "-mode state";
            throw std::out_of_range(msg.str());
        }
    }
}

ModeSelection ModeSelection::complement(std::size_t mode_count) const {
    check(mode_count);
    std::vector<std::size_t> rest;
    for (std::size_t m = 0; m < mode_count; ++m) {
        if (!contains(m)) rest.push_back(m);
    }
    return ModeSelection(std::move(rest));
}

// ---------------------------------------------------------------- marginals

GaussianState marginal(const GaussianState& state, const ModeSelection& modes) {
    const std::size_t total = state.modes();
    modes.check(total);
    if (modes.size() == 0) {
        throw std::invalid_argument("empty mode selection");
    }
    const auto k = static_cast<Eigen::Index>(modes.size());
    std::vector<Eigen::Index> rows(2 * modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        rows[i] = static_cast<Eigen::Index>(modes.indices()[i]);
        rows[i + modes.size()] = static_cast<Eigen::Index>(modes.indices()[i] + total);
    }
    Eigen::VectorXd means(2 * k);
    Eigen::MatrixXd cov(2 * k, 2 * k);
    for (Eigen::Index i = 0; i < 2 * k; ++i) {
        means(i) = state.means()(rows[i]);
        for (Eigen::Index j = 0; j < 2 * k; ++j) {
            cov(i, j) = state.covariance()(rows[i], rows[j]);
        }
    }
    return GaussianState(std::move(means), std::move(cov));
}

// ---------------------------------------------------------------- spectra

namespace {

Eigen::MatrixXd checked_symmetric(const Eigen::MatrixXd& cov) {
    if (cov.rows() != cov.cols() || cov.rows() == 0 || cov.rows() % 2 != 0) {
        throw StabilityError("covariance must be a nonempty square matrix of even size");
    }
    if (!cov.allFinite()) {
        throw StabilityError("covariance contains non-finite entries");
    }
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw StabilityError("covariance is not symmetric");
    }
    return 0.5 * (cov + cov.transpose());
}

// L^T Omega L for sigma = L L^T; Omega L is a signed swap of the x and p row blocks.
struct CholeskyForm {
    Eigen::MatrixXd lower;
    Eigen::MatrixXd antisym;
};

CholeskyForm cholesky_form(const Eigen::MatrixXd& sym) {
    const Eigen::Index n = sym.rows() / 2;
    Eigen::LLT<Eigen::MatrixXd> llt(sym);
    if (llt.info() != Eigen::Success) {
        throw StabilityError("covariance is not positive definite");
    }
    CholeskyForm f;
    f.lower = llt.matrixL();
    Eigen::MatrixXd omega_l(2 * n, 2 * n);
    omega_l.topRows(n) = f.lower.bottomRows(n);
    omega_l.bottomRows(n) = -f.lower.topRows(n);
    f.antisym.noalias() = f.lower.transpose() * omega_l;
    return f;
}

double arccoth(double x) { return 0.5 * std::log1p(2.0 / (x - 1.0)); }

}  // namespace

SymplecticSpectrum symplectic_spectrum(const Eigen::MatrixXd& cov) {
    const Eigen::MatrixXd sym = checked_symmetric(cov);
    const Eigen::Index n = sym.rows() / 2;
    SymplecticSpectrum out;
    out.nu.resize(n);
    if (n == 1) {
        const double det = sym(0, 0) * sym(1, 1) - sym(0, 1) * sym(1, 0);
        if (!(sym(0, 0) > 0.0) || !(det > 0.0)) {
            throw StabilityError("covariance is not positive definite");
        }
        out.nu(0) = std::sqrt(det);
        return out;
    }
    const CholeskyForm f = cholesky_form(sym);
    // The antisymmetric matrix has eigenvalues +-i nu; A^T A carries each nu^2 twice.
    Eigen::MatrixXd gram(2 * n, 2 * n);
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(f.antisym.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw StabilityError("symplectic eigenvalue computation did not converge");
    }
    const Eigen::VectorXd& sq = solver.eigenvalues();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double pair = 0.5 * (sq(2 * k) + sq(2 * k + 1));
        out.nu(k) = std::sqrt(std::max(pair, 0.0));
    }
    return out;
}

double mode_entropy(double nu) {
    if (!std::isfinite(nu) || nu < 0.5 - kSpectrumTolerance) {
        std::ostringstream msg;
        msg << "symplectic eigenvalue " << nu << " below the vacuum value 1/2";
        throw StabilityError(msg.str());
    }
    const double occupation = nu - 0.5;
    if (occupation <= 0.0) {
        return 0.0;
    }
    return (occupation + 1.0) * std::log1p(occupation) - occupation * std::log(occupation);
}

double von_neumann_entropy(const SymplecticSpectrum& spectrum) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < spectrum.nu.size(); ++i) {
        s += mode_entropy(spectrum.nu(i));
    }
    return s;
}

double von_neumann_entropy(const GaussianState& state) {
    return von_neumann_entropy(symplectic_spectrum(state.covariance()));
}

// ---------------------------------------------------------------- relative entropy

Eigen::MatrixXd gibbs_matrix(const Eigen::MatrixXd& cov) {
    const Eigen::MatrixXd sym = checked_symmetric(cov);
    const Eigen::Index n = sym.rows() / 2;
    auto guard = [](double nu) {
        if (!(nu > 0.5 + kPureReferenceGuard)) {
            std::ostringstream msg;
            msg << "reference state is (nearly) pure: symplectic eigenvalue " << nu
                << " too close to 1/2, relative entropy diverges";
            throw DivergenceError(msg.str());
        }
    };

    if (n == 1) {
        // For one mode -Omega sigma Omega = det(sigma) sigma^{-1}, so G = 2 nu arccoth(2 nu) sigma^{-1}.
        const double det = sym(0, 0) * sym(1, 1) - sym(0, 1) * sym(1, 0);
        if (!(det > 0.0)) throw StabilityError("covariance is not positive definite");
        const double nu = std::sqrt(det);
        guard(nu);
        Eigen::MatrixXd inv(2, 2);
        inv << sym(1, 1), -sym(0, 1), -sym(1, 0), sym(0, 0);
        inv /= det;
        return 2.0 * nu * arccoth(2.0 * nu) * inv;
    }

    // G = 2i Omega f(2i sigma Omega) with f = arccoth odd, so f(X) = X h(X^2), h(y) = f(sqrt y)/sqrt y.
    // (2i sigma Omega)^2 = -4 sigma Omega sigma Omega = L (4 A^T A) L^{-1} with A = L^T Omega L,
    // which gives G = -4 Omega sigma Omega L V diag(h(4 nu^2)) V^T L^{-1}.
    const CholeskyForm f = cholesky_form(sym);
    Eigen::MatrixXd gram(2 * n, 2 * n);
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(f.antisym.transpose());
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
        throw StabilityError("eigendecomposition for the Gibbs matrix did not converge");
    }
    const Eigen::VectorXd& sq = solver.eigenvalues();
    Eigen::VectorXd h(2 * n);
    for (Eigen::Index k = 0; k < 2 * n; ++k) {
        const double nu = std::sqrt(std::max(sq(k), 0.0));
        guard(nu);
        h(k) = arccoth(2.0 * nu) / (2.0 * nu);
    }
    const Eigen::MatrixXd& v = solver.eigenvectors();
    const Eigen::MatrixXd lv = f.lower.triangularView<Eigen::Lower>() * v;
    // (L V)^{-T} = L^{-T} V, so L V diag(h) V^T L^{-1} = lv diag(h) (L^{-T} V)^T.
    const Eigen::MatrixXd linv_t_v = f.lower.transpose().triangularView<Eigen::Upper>().solve(v);
    const Eigen::MatrixXd func = lv * h.asDiagonal() * linv_t_v.transpose();

    const Eigen::MatrixXd omega = symplectic_form(static_cast<std::size_t>(n));
    Eigen::MatrixXd g = -4.0 * (omega * sym * omega) * func;
    return 0.5 * (g + g.transpose());
}

double relative_entropy(const GaussianState& rho1, const GaussianState& rho2) {
    if (rho1.modes() != rho2.modes()) {
        throw std::invalid_argument("relative entropy needs states with equal mode counts");
    }
    const Eigen::MatrixXd g = gibbs_matrix(rho2.covariance());
    const Eigen::VectorXd d = rho1.means() - rho2.means();
    const double quad =
        0.5 * (g.cwiseProduct(rho1.covariance() - rho2.covariance())).sum() + 0.5 * d.dot(g * d);
    return von_neumann_entropy(rho2) - von_neumann_entropy(rho1) + quad;
}

double relative_entropy_to_thermal(const GaussianState& rho, double omega, double beta,
                                   double center_x) {
    if (rho.modes() != 1) {
        throw std::invalid_argument("thermal relative entropy is defined for one mode");
    }
    if (!(omega > 0.0)) {
        throw std::invalid_argument("thermal reference frequency must be positive");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DivergenceError("thermal reference at zero temperature is pure; relative entropy diverges");
    }
    const Eigen::MatrixXd& c = rho.covariance();
    const double dx = rho.mean_x(0) - center_x;
    const double dp = rho.mean_p(0);
    const double energy = 0.5 * (c(1, 1) + dp * dp + omega * omega * (c(0, 0) + dx * dx));
    const double entropy = von_neumann_entropy(rho);
    // ln Z = -beta omega / 2 - ln(1 - e^{-beta omega})
    return -entropy + beta * (energy - 0.5 * omega) - std::log1p(-std::exp(-beta * omega));
}

double mutual_information(const GaussianState& state, const ModeSelection& part) {
    const ModeSelection rest = part.complement(state.modes());
    if (part.size() == 0 || rest.size() == 0) {
        throw std::invalid_argument("mutual information needs a proper bipartition");
    }
    return von_neumann_entropy(marginal(state, part)) + von_neumann_entropy(marginal(state, rest)) -
           von_neumann_entropy(state);
}

// ---------------------------------------------------------------- entanglement

Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& cov, const ModeSelection& modes) {
    const Eigen::Index n = cov.rows() / 2;
    modes.check(static_cast<std::size_t>(n));
    Eigen::MatrixXd out = cov;
    for (std::size_t m : modes.indices()) {
        const Eigen::Index p = n + static_cast<Eigen::Index>(m);
        out.row(p) *= -1.0;
        out.col(p) *= -1.0;
    }
    return out;
}

double logarithmic_negativity(const GaussianState& state, std::size_t system_mode) {
    const Eigen::MatrixXd pt = partial_transpose(state.covariance(), ModeSelection{system_mode});
    const SymplecticSpectrum spectrum = symplectic_spectrum(pt);
    double en = 0.0;
    for (Eigen::Index i = 0; i < spectrum.nu.size(); ++i) {
        en += std::max(0.0, -std::log(2.0 * spectrum.nu(i)));
    }
    return en;
}

}  // namespace qbm
