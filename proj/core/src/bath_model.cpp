#include "qbm/bath_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qbm/errors.hpp"

namespace qbm {

DrivePulse DrivePulse::from_duration(double amplitude, double frequency, double duration,
                                     double phase) {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw ConfigError("drive duration t_f must be positive and finite");
    }
    return DrivePulse{amplitude, frequency, std::numbers::pi / duration, phase};
}

double DrivePulse::duration() const {
    if (!(envelope_frequency > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return std::numbers::pi / envelope_frequency;
}

double drive_force(const DrivePulse& pulse, double t) {
    if (!pulse.active() || t < 0.0 || t > pulse.duration()) {
        return 0.0;
    }
    const double envelope = std::sin(pulse.envelope_frequency * t);
    return pulse.amplitude * std::sin(pulse.frequency * t + pulse.phase) * envelope * envelope;
}

double drive_force_derivative(const DrivePulse& pulse, double t) {
    if (!pulse.active() || t < 0.0 || t > pulse.duration()) {
        return 0.0;
    }
    const double carrier_phase = pulse.frequency * t + pulse.phase;
    const double s = std::sin(pulse.envelope_frequency * t);
    const double c = std::cos(pulse.envelope_frequency * t);
    return pulse.amplitude * (pulse.frequency * std::cos(carrier_phase) * s * s +
                              std::sin(carrier_phase) * 2.0 * pulse.envelope_frequency * s * c);
}

void ModelSpec::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    require(n_modes >= 1, "n_modes must be at least 1");
    require(std::isfinite(omega0) && omega0 > 0.0, "omega0 must be positive");
    require(std::isfinite(omega_max) && omega_max > 0.0, "omega_max must be positive");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be non-negative");
    require(std::isfinite(cutoff) && cutoff > 0.0, "cutoff must be positive");
    require(std::isfinite(temperature) && temperature >= 0.0,
            "temperature must be non-negative");
    require(std::isfinite(drive.amplitude) && std::isfinite(drive.frequency) &&
                std::isfinite(drive.phase),
            "drive parameters must be finite");
    if (drive.active()) {
        require(std::isfinite(drive.envelope_frequency) && drive.envelope_frequency > 0.0,
                "an active drive needs a positive envelope frequency (t_f > 0)");
    }
}

Eigen::VectorXd ModelSpec::bath_frequencies() const {
    Eigen::VectorXd w(static_cast<Eigen::Index>(n_modes));
    for (std::size_t n = 1; n <= n_modes; ++n) {
        w(static_cast<Eigen::Index>(n - 1)) = bath_frequency(n);
    }
    return w;
}

double ModelSpec::beta() const noexcept {
    return temperature > 0.0 ? 1.0 / temperature : std::numeric_limits<double>::infinity();
}

double spectral_density(const ModelSpec& spec, double omega) noexcept {
    if (omega > spec.cutoff) {
        return 0.0;
    }
    return 2.0 * spec.gamma / std::numbers::pi * omega;
}

CouplingSet build_couplings(const ModelSpec& spec) {
    const double delta = spec.spacing();
    CouplingSet out;
    out.kappa.resize(static_cast<Eigen::Index>(spec.n_modes));
    double shift = 0.0;
    for (std::size_t n = 1; n <= spec.n_modes; ++n) {
        const double w = spec.bath_frequency(n);
        const double k = std::sqrt(2.0 * delta * w * spectral_density(spec, w));
        out.kappa(static_cast<Eigen::Index>(n - 1)) = k;
        shift += k * k / (w * w);
    }
    out.omega_b = std::sqrt(spec.omega0 * spec.omega0 + shift);
    return out;
}

Eigen::MatrixXd hamiltonian_position_block(const ModelSpec& spec, const CouplingSet& couplings) {
    const auto n = static_cast<Eigen::Index>(spec.n_modes);
    if (couplings.kappa.size() != n) {
        throw std::invalid_argument("coupling vector does not match the bath size");
    }
    Eigen::MatrixXd hx = Eigen::MatrixXd::Zero(n + 1, n + 1);
    // omega_b^2 is re-summed here rather than squared back from omega_b.
    double bare_sq = spec.omega0 * spec.omega0;
    for (Eigen::Index i = 1; i <= n; ++i) {
        const double w = spec.bath_frequency(static_cast<std::size_t>(i));
        const double k = couplings.kappa(i - 1);
        bare_sq += k * k / (w * w);
        hx(i, i) = w * w;
        hx(0, i) = -couplings.kappa(i - 1);
        hx(i, 0) = -couplings.kappa(i - 1);
    }
    hx(0, 0) = bare_sq;
    return hx;
}

double thermal_coth(double omega, double temperature) noexcept {
    if (temperature <= 0.0) {
        return 1.0;
    }
    // tanh saturates at 1 for large arguments, so this never overflows.
    return 1.0 / std::tanh(omega / (2.0 * temperature));
}

GaussianState initial_state(const ModelSpec& spec) {
    const auto modes = static_cast<Eigen::Index>(spec.n_modes + 1);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    cov(0, 0) = 1.0 / (2.0 * spec.omega0);
    cov(modes, modes) = spec.omega0 / 2.0;
    for (Eigen::Index i = 1; i < modes; ++i) {
        const double w = spec.bath_frequency(static_cast<std::size_t>(i));
        const double c = thermal_coth(w, spec.temperature);
        cov(i, i) = c / (2.0 * w);
        cov(modes + i, modes + i) = w * c / 2.0;
    }
    return GaussianState::centered(std::move(cov));
}

}  // namespace qbm
