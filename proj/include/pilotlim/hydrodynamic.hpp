#pragma once

#include <cstdint>
#include <vector>

#include "pilotlim/evolution.hpp"
#include "pilotlim/grid.hpp"

namespace pilotlim {

inline constexpr double kDefaultRhoFloor = 1e-6;

/// psi = R exp(i S / hbar) on the points where R^2 >= rho_floor * max R^2.
struct PolarField {
    Grid1D grid;
    std::vector<double> amplitude;
    std::vector<double> phase;        ///< S, unwrapped per valid segment; NaN where masked
    std::vector<std::uint8_t> valid;
    double rho_floor = kDefaultRhoFloor;
    double hbar = 1.0;
    std::size_t anchor = 0;           ///< index of the global maximum of R

    std::size_t valid_count() const;
};

/// A real field with a validity mask shared with the polar decomposition.
struct MaskedField {
    Grid1D grid;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
    double time = 0.0;
};

using VelocityField = MaskedField;

/// valid[j] = |psi_j|^2 >= rho_floor * max |psi|^2; throws degenerate_field if none are.
std::vector<std::uint8_t> amplitude_mask(const ComplexField& f, double rho_floor);

PolarField polar_decompose(const ComplexField& f, const Units& units, double rho_floor = kDefaultRhoFloor);

/// Reconstructs R exp(iS/hbar) (zero on masked points).
ComplexField reconstruct(const PolarField& polar);

/// Sixth-order finite-difference dS/dx within each valid segment (lower order
/// near segment ends); NaN where masked or the segment is a single point.
std::vector<double> phase_gradient(const PolarField& polar);

/// R''/R computed from psi: Re(psi''/psi) + Im(psi'/psi)^2, which equals the
/// Laplacian of |psi| divided by |psi| wherever psi is nonzero.
MaskedField amplitude_curvature(const ComplexField& f, double rho_floor = kDefaultRhoFloor);

/// U = -(hbar^2 / 2m) R''/R.
MaskedField quantum_potential(const ComplexField& f, const Units& units,
                              double rho_floor = kDefaultRhoFloor);

/// v = (hbar/m) Im(psi'/psi), no phase unwrapping.
VelocityField velocity_field(const ComplexField& f, const Units& units,
                             double rho_floor = kDefaultRhoFloor);

/// Probability current (hbar/m) Im(conj(psi) psi'), defined everywhere.
std::vector<double> probability_current(const ComplexField& f, const Units& units);

/// Characteristic kinetic energy <p^2>/2m, floored at hbar^2 / (2 m W^2) for a
/// domain of length W so that constant fields still get a finite scale.
double kinetic_energy_scale(const ComplexField& f, const Units& units);

/// sup over valid points of |d(R^2)/dt + d(v R^2)/dx| divided by
/// sup(R^2) * E_kin / hbar. t must have a snapshot on each side; time
/// derivatives are centered differences, fourth order when two snapshots
/// exist on each side and second order otherwise.
double continuity_residual(const EvolutionHistory& h, double t, double rho_floor = kDefaultRhoFloor);

/// sup over valid points of |dS/dt + (dS/dx)^2/2m + V + U| divided by E_kin.
/// dS/dt comes from the phase increments arg(psi(t+) conj(psi(t))) between
/// adjacent snapshots (same stencils as continuity_residual); an increment
/// beyond pi/2 at the anchor point is reported as a time-resolution error.
double hj_residual(const EvolutionHistory& h, double t, double rho_floor = kDefaultRhoFloor,
                   bool include_quantum_potential = true);

/// Pointwise HJ residual field (unscaled) at snapshot time t.
MaskedField hj_residual_field(const EvolutionHistory& h, double t, double rho_floor = kDefaultRhoFloor,
                              bool include_quantum_potential = true);

}  // namespace pilotlim
