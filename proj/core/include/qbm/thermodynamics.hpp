// thermodynamics.hpp — entropy production under the standard (Spohn / Deffner-Lutz) and
// bath-energy (ELB) definitions, heats, the ELB correlation decomposition, and the gap
// between definitions.

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "qbm/gaussian_state.hpp"
#include "qbm/trajectory.hpp"

namespace qbm {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// H_S(t) = p^2/2 + omega^2 x^2/2 - F(t) x.  The counter term is not part of H_S, so the
// default frequency is the renormalized omega0.
struct SystemHamiltonianSpec {
    double frequency{1.0};
    bool include_drive{true};

    static SystemHamiltonianSpec for_model(const ModelSpec& spec);
};

// Instantaneous Gibbs state of H_S at force F: thermal covariance, <x> = F / omega^2.
GaussianState gibbs_state_system(const SystemHamiltonianSpec& hspec, double beta, double force);

struct ThermoRecord {
    double t{0.0};
    double S_S{kMissing};
    double S_E{kMissing};
    double S_SE{kMissing};
    double dS_Spohn{kMissing};
    double dS_DL{kMissing};
    double dS_ELB{kMissing};
    double heat_standard{kMissing};
    double heat_ELB{kMissing};
    double I_SE{kMissing};
    double I_env{kMissing};
    double D_env{kMissing};
    double delta{kMissing};
    double epsilon{kMissing};
    double E_N{kMissing};
    double U_S{kMissing};
    double U_E{kMissing};
};

// Column order of the time-series CSV.
inline constexpr const char* kThermoColumns[] = {
    "t",     "S_S",   "S_E",   "S_SE",  "dS_Spohn", "dS_DL", "dS_ELB", "I_SE",
    "I_env", "D_env", "delta", "epsilon", "E_N",    "U_S",   "U_E"};

struct Decomposition {
    std::vector<double> I_SE;
    std::vector<double> I_env;
    std::vector<double> D_env;
};

struct DefinitionGap {
    std::vector<double> delta;
    std::vector<double> epsilon;  // NaN where |dS_ELB| < kEpsilonGuard
};

inline constexpr double kEpsilonGuard = 1e-12;

double system_energy(const GaussianState& system, const SystemHamiltonianSpec& hspec, double force);
double bath_energy(const Snapshot& snapshot, const Eigen::VectorXd& bath_frequencies);

// Spohn: S(rho_S(0) || rho_eq) - S(rho_S(t) || rho_eq).  Rejects a driven H_S.
std::vector<double> entropy_production_spohn(const Trajectory& traj,
                                             const SystemHamiltonianSpec& hspec, double beta);

// Deffner-Lutz with the integral term beta dF/ds (<x(s)> - F(s)/omega^2) integrated by
// cumulative Simpson on the (uniform) sample grid.
std::vector<double> entropy_production_dl(const Trajectory& traj,
                                          const SystemHamiltonianSpec& hspec, double beta);

// ELB through the identity Delta S_S + beta Delta U_E.
std::vector<double> entropy_production_elb(const Trajectory& traj, double beta);

// Standard heat int Tr{H_S drho_S/ds} = Delta U_S + int dF/ds <x> ds.
std::vector<double> heat_standard(const Trajectory& traj, const SystemHamiltonianSpec& hspec);
// ELB heat -Delta U_E.
std::vector<double> heat_elb(const Trajectory& traj);

// I_SE, I_env, D_env.  Requires bath entropies in the trajectory and a finite beta.
Decomposition decomposition(const Trajectory& traj, double beta);

DefinitionGap definition_gap(const std::vector<double>& elb, const std::vector<double>& dl);

// Cumulative integral of samples on a uniform grid of spacing h: Simpson on even
// indices, a three-point rule for the trailing interval on odd ones.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h);

// Everything above for each sample.  Quantities that are undefined for the trajectory
// (Spohn when driven, beta-dependent terms at T = 0, S_E-dependent terms when not sampled)
// are NaN.
std::vector<ThermoRecord> thermo_records(const Trajectory& traj,
                                         const SystemHamiltonianSpec& hspec);

}  // namespace qbm
