#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pilotlim/bohm.hpp"
#include "pilotlim/hydrodynamic.hpp"
#include "pilotlim/initial_state.hpp"
#include "pilotlim/potential.hpp"
#include "pilotlim/trajectory.hpp"

namespace pilotlim {

/// lambda = hbar / sqrt(<p^2>), no factor 2 pi.
double debroglie_wavelength(const ComplexField& f, const Units& units = {});

/// hbar / (m |v|) on valid points whose speed exceeds the velocity floor.
MaskedField local_wavelength(const ComplexField& f, const Units& units = {},
                             double rho_floor = kDefaultRhoFloor);

/// Speed below which the local wavelength is reported as undefined.
double velocity_floor(const Grid1D& grid, const Units& units);

struct LpwThresholds {
    double amp_1 = 0.1;
    double amp_2 = 0.1;
    double lambda = 0.1;
    double qp = 0.1;
};

/// Local plane-wave conditions. All fields share `valid` (the polar mask);
/// a point where the wavelength is undefined carries +inf and fails.
struct LpwReport {
    Grid1D grid;
    double time = 0.0;
    std::vector<double> lambda_local;
    std::vector<double> cond_amp_1;   ///< |R'/R| lambda
    std::vector<double> cond_amp_2;   ///< |R''/R| lambda^2 / 2
    std::vector<double> cond_lambda;  ///< |d lambda / dx|
    std::vector<double> qp_ratio;     ///< |U| / ((dS/dx)^2 / 2m)
    std::vector<std::uint8_t> valid;
    double pass_fraction = 0.0;
    /// The same fraction weighted by |psi|^2 (informational).
    double weighted_pass_fraction = 0.0;
    LpwThresholds thresholds;
};

LpwReport lpw_report(const ComplexField& f, const Units& units = {}, const LpwThresholds& thresholds = {},
                     double rho_floor = kDefaultRhoFloor);

/// x' = x / L, t' = t / T, v' = v T / L with T = m L lambda / hbar.
Trajectory macroscopic_rescale(const Trajectory& traj, double L, double lambda, const Units& units = {});

/// max over t' in [0, 1] of |x'_a - x'_b| for two rescaled trajectories on the
/// same lattice (a truncated first argument is compared over its prefix).
double classicality_deviation(const Trajectory& bohm, const Trajectory& classical);

/// Everything an eps sweep needs, in macroscopic coordinates.
struct SweepSpec {
    Grid1D grid = make_grid(-1.0, 1.0, 8);
    Potential potential;
    InitialState initial;
    Units units;
    double t_final = 1.0;
    double dt = 1e-3;
    double dt_store = 1e-2;
    std::vector<double> eps_list;
    /// Length unit when the potential has no finite scale at X0.
    double reference_length = 1.0;
    /// Initial fraction of macroscopic time excluded from qp_ratio_max.
    double transient_skip = 0.1;
    bool semiclassical = true;
    double rho_floor = kDefaultRhoFloor;
};

struct ConvergenceRow {
    double eps;
    double deviation;
    double l2_error;      ///< NaN when not computed
    double qp_ratio_max;
    bool truncated;
    bool caustic;
    bool boundary_leak;
    double max_norm_drift;
};

struct ConvergenceTable {
    double L = 1.0;
    double lambda = 1.0;  ///< de Broglie wavelength of psi0 (macroscopic frame equals microscopic)
    double T = 1.0;
    double X0 = 0.0;
    double v0 = 0.0;
    std::vector<ConvergenceRow> rows;

    std::vector<double> eps_values() const;
    std::vector<double> deviation() const;
    std::vector<double> l2_error() const;
    std::vector<double> qp_ratio_max() const;
};

/// Runs the rescaled evolution, the Bohmian path from the packet centre, the
/// classical path from the same point with the group velocity, and the
/// stationary-phase comparison for every eps (rows in eps_list order).
ConvergenceTable epsilon_sweep(const SweepSpec& spec);

}  // namespace pilotlim
