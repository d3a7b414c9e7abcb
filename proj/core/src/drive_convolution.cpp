// Cumulative convolution integrals of the driving pulse against the normal modes.
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "qbm/normal_modes.hpp"

namespace qbm {

namespace {

// Integrate trig(z s) F(s) over [a, b] with a 20-point Gauss-Legendre rule on pieces no longer
// than one period of the fastest sinusoid in the integrand.  The integrand is a finite sum of
// sinusoids, so each piece is resolved to rounding error.
template <typename Trig>
double integrate_against_pulse(const DrivePulse& pulse, double z, double a, double b, Trig trig) {
    using boost::math::quadrature::gauss;
    const double fastest = z + std::abs(pulse.frequency) + 2.0 * pulse.envelope_frequency + 1.0;
    const double piece = 2.0 * std::numbers::pi / fastest;
    const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / piece));
    const double h = (b - a) / static_cast<double>(std::max<std::size_t>(pieces, 1));
    auto integrand = [&](double s) { return trig(z * s) * drive_force(pulse, s); };
    double total = 0.0;
    for (std::size_t k = 0; k < std::max<std::size_t>(pieces, 1); ++k) {
        const double lo = a + h * static_cast<double>(k);
        const double hi = (k + 1 == std::max<std::size_t>(pieces, 1)) ? b : lo + h;
        total += gauss<double, 20>::integrate(integrand, lo, hi);
    }
    return total;
}

}  // namespace

DriveConvolution::DriveConvolution(const NormalModeBasis& basis, const DrivePulse& pulse)
    : basis_(&basis),
      pulse_(pulse),
      cos_integral_(Eigen::VectorXd::Zero(basis.frequencies.size())),
      sin_integral_(Eigen::VectorXd::Zero(basis.frequencies.size())) {}

void DriveConvolution::advance_to(double t) {
    if (t < time_) {
        throw std::invalid_argument("drive convolution can only move forward in time");
    }
    if (pulse_.active()) {
        // F vanishes after the pulse, so the integrals freeze there.
        const double lo = std::min(time_, pulse_.duration());
        const double hi = std::min(t, pulse_.duration());
        if (hi > lo) {
            const Eigen::VectorXd& z = basis_->frequencies;
            for (Eigen::Index nu = 0; nu < z.size(); ++nu) {
                cos_integral_(nu) += integrate_against_pulse(
                    pulse_, z(nu), lo, hi, [](double x) { return std::cos(x); });
                sin_integral_(nu) += integrate_against_pulse(
                    pulse_, z(nu), lo, hi, [](double x) { return std::sin(x); });
            }
        }
    }
    time_ = t;
}

DriveDisplacement DriveConvolution::displacement() const {
    const Eigen::Index n = basis_->frequencies.size();
    DriveDisplacement d{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
    if (!pulse_.active()) {
        return d;
    }
    const Eigen::VectorXd& z = basis_->frequencies;
    const Eigen::MatrixXd& zm = basis_->vectors;
    Eigen::VectorXd j(n), jdot(n);
    for (Eigen::Index nu = 0; nu < n; ++nu) {
        const double s = std::sin(z(nu) * time_);
        const double c = std::cos(z(nu) * time_);
        // int_0^t sin(z (t - s)) / z F ds and int_0^t cos(z (t - s)) F ds, scaled by Z_{0 nu}
        j(nu) = zm(0, nu) * (s * cos_integral_(nu) - c * sin_integral_(nu)) / z(nu);
        jdot(nu) = zm(0, nu) * (c * cos_integral_(nu) + s * sin_integral_(nu));
    }
    d.position.noalias() = zm * j;
    d.momentum.noalias() = zm * jdot;
    return d;
}

}  // namespace qbm
