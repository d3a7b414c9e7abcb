// gaussian_states.hpp — information-theoretic quantities of Gaussian states.
//
// Conventions: entropies in nats, vacuum symplectic eigenvalue 1/2, so a valid state has
// every nu >= 1/2 and the partial transpose is entangled iff some nu~ < 1/2.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "qbm/gaussian_state.hpp"

namespace qbm {

// Ordered, duplicate-free list of mode indices (0 = system).
class ModeSelection {
public:
    ModeSelection() = default;
    ModeSelection(std::initializer_list<std::size_t> modes);
    explicit ModeSelection(std::vector<std::size_t> modes);

    static ModeSelection all(std::size_t mode_count);
    static ModeSelection range(std::size_t first, std::size_t last);  // [first, last)

    const std::vector<std::size_t>& indices() const noexcept { return modes_; }
    std::size_t size() const noexcept { return modes_.size(); }
    bool contains(std::size_t mode) const;

    // Throws std::out_of_range if any index is >= mode_count.
    void check(std::size_t mode_count) const;
    ModeSelection complement(std::size_t mode_count) const;

private:
    std::vector<std::size_t> modes_;
};

struct SymplecticSpectrum {
    Eigen::VectorXd nu;  // ascending
};

// Tolerance below 1/2 accepted as rounding noise in a valid spectrum.
inline constexpr double kSpectrumTolerance = 1e-8;
// Reference states with nu <= 1/2 + this are treated as pure in relative entropies.
inline constexpr double kPureReferenceGuard = 1e-9;

GaussianState marginal(const GaussianState& state, const ModeSelection& modes);

// Positive eigenvalues of i Omega sigma.  One mode uses sqrt(det sigma); larger blocks go
// through the Cholesky factor sigma = L L^T and the antisymmetric L^T Omega L, whose
// singular values are the nu's.  Throws StabilityError on non-finite, non-symmetric or
// non-positive-definite input.
SymplecticSpectrum symplectic_spectrum(const Eigen::MatrixXd& cov);

// Contribution (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2) of one mode.
double mode_entropy(double nu);
double von_neumann_entropy(const SymplecticSpectrum& spectrum);
double von_neumann_entropy(const GaussianState& state);

// Quadratic-form matrix G of rho = exp(-(R - R0)^T G (R - R0) / 2) / Z, i.e.
// G = 2 i Omega arccoth(2 i sigma Omega), evaluated through the spectral map
// nu -> 2 arccoth(2 nu).  Throws DivergenceError if the state is (nearly) pure.
Eigen::MatrixXd gibbs_matrix(const Eigen::MatrixXd& cov);

// S(rho1 || rho2).  rho2 must be full rank.
double relative_entropy(const GaussianState& rho1, const GaussianState& rho2);

// S(rho || thermal) for a one-mode rho against the Gibbs state of p^2/2 + omega^2 (x - x0)^2/2
// at inverse temperature beta, from the closed form -S(rho) + beta <H> + ln Z.  Finite for any
// beta < inf, including references too close to pure for gibbs_matrix.
double relative_entropy_to_thermal(const GaussianState& rho, double omega, double beta,
                                   double center_x = 0.0);

// S(A) + S(B) - S(AB) for the bipartition (part, complement).
double mutual_information(const GaussianState& state, const ModeSelection& part);

// Covariance of the partially transposed state: momenta of the selected modes flip sign.
// The result need not be a valid state.
Eigen::MatrixXd partial_transpose(const Eigen::MatrixXd& cov, const ModeSelection& modes);

// sum_i max(0, -ln 2 nu~_i) over the partially transposed spectrum, transposing system_mode.
double logarithmic_negativity(const GaussianState& state, std::size_t system_mode = 0);

}  // namespace qbm
