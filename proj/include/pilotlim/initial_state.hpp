#pragma once

#include <optional>
#include <string_view>

#include "pilotlim/grid.hpp"

namespace pilotlim {

enum class InitialKind { gaussian, coherent, plane_modulated };

std::string_view to_string(InitialKind kind);
std::optional<InitialKind> parse_initial_kind(std::string_view name);

/// Analytic initial wavefunction.
///
/// gaussian / coherent: (2 pi sigma0^2)^{-1/4} exp(-(x-c)^2 / 4 sigma0^2) exp(i k0 (x-c)),
///   so sigma0 is the standard deviation of |psi|^2. A coherent state fixes
///   sigma0^2 = hbar / (2 m omega).
/// plane_modulated: exp(i k0 x) (1 + modulation cos(kappa x)); both wavenumbers
///   are snapped to the momentum lattice of the sampling grid.
struct InitialState {
    InitialKind kind = InitialKind::gaussian;
    double sigma0 = 1.0;
    double center = 0.0;
    double k0 = 0.0;
    double modulation = 0.0;
    double kappa = 0.0;

    static InitialState gaussian(double sigma0, double center = 0.0, double k0 = 0.0);
    static InitialState coherent(const Units& units, double omega, double center, double k0 = 0.0);
    static InitialState plane_modulated(double k0, double modulation = 0.0, double kappa = 0.0);

    /// Unnormalized for plane_modulated; normalized in the continuum otherwise.
    Complex value(double x) const;
};

/// Samples and normalizes on the grid.
ComplexField sample(const InitialState& state, const Grid1D& grid);

/// psi0^eps(x) = eps^{-1/2} psi0(x / eps), normalized on the macroscopic grid.
ComplexField prepare_rescaled_initial(const InitialState& state, const Grid1D& grid, double eps);

/// Macroscopic image of a microscopic starting point under x -> eps x.
double rescale_initial_position(double x0, double eps);

}  // namespace pilotlim
