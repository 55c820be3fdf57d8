#pragma once

#include <vector>

#include "pilotlim/classical.hpp"
#include "pilotlim/grid.hpp"
#include "pilotlim/spectral.hpp"
#include "pilotlim/statistics.hpp"

namespace pilotlim {

/// Stationary-phase amplitude of the eps-rescaled evolution of a state
/// concentrated at the origin:
///   sqrt(C) e^{-i pi/4} hbar^{-1/2} psi0_hat(m v0 / hbar) e^{i S0 / (hbar eps)},
/// with S0, C and v0 from the classical path (0, 0) -> (x, t). The e^{-i pi/4}
/// is the t -> 0+ branch that reproduces the exact free propagator.
/// psi0_hat is the transform of the unscaled profile psi0.
Complex semiclassical_wavefunction(const Potential& p, const MomentumAmplitude& psi0_hat, double x, double t,
                                   double eps, const Units& units = {}, const ActionOptions& options = {});

/// The same on every grid point, warm-starting each shooting solve from its
/// neighbour.
ComplexField semiclassical_field(const Potential& p, const MomentumAmplitude& psi0_hat, const Grid1D& grid,
                                 double t, double eps, const Units& units = {}, const ActionOptions& options = {});

/// Relative L2 error |a - b| / |b| on a common grid.
double relative_l2_error(const ComplexField& approx, const ComplexField& reference);

/// rho(v) = (m / hbar) |psi0_hat(m v / hbar)|^2.
double limiting_velocity_density(const MomentumAmplitude& psi0_hat, double v, const Units& units = {});

/// The limiting velocity density as a piecewise-linear distribution over
/// v = hbar k / m on the momentum lattice of psi0 (for CDFs and KS tests).
PiecewiseLinearDensity limiting_velocity_distribution(const ComplexField& psi0, const Units& units = {});

/// rho(x, t) = (C / hbar) |psi0_hat(m v0 / hbar)|^2.
double limiting_position_density(const Potential& p, const MomentumAmplitude& psi0_hat, double x, double t,
                                 const Units& units = {}, const ActionOptions& options = {});

/// Limiting (eps -> 0) amplitude and phase transported along characteristics.
struct WkbField {
    Grid1D grid;
    double time;
    std::vector<double> amplitude;       ///< R0(., t); zero outside the image of the launch grid
    std::vector<double> phase;           ///< S0(., t); NaN outside the image
    std::vector<double> velocity;        ///< dS0/dx / m; NaN outside the image
    std::vector<std::uint8_t> valid;
    std::vector<double> launch;          ///< characteristic start points (the grid)
    std::vector<double> arrival;         ///< their positions at t
    std::vector<double> arrival_velocity;
    std::vector<double> arrival_phase;
    double mass = 1.0;

    /// dS0/dx / m from the Hermite interpolant of S0 at an arbitrary x.
    double velocity_at(double x) const;
};

/// Launches a characteristic from every grid point with v0 = S0'(x0)/m
/// (fourth-order differences of S0_field), transports R0 by the Jacobian
/// |dx/dx0|^{-1/2} and accumulates the action. Throws multivalued when
/// characteristics cross before t.
WkbField wkb_short_wave(const Grid1D& grid, const std::vector<double>& R0, const std::vector<double>& S0,
                        const Potential& p, double t, const Units& units = {}, std::size_t steps = 1000);

}  // namespace pilotlim
