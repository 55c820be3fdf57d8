#pragma once

#include <span>
#include <vector>

#include "pilotlim/grid.hpp"

namespace pilotlim {

/// In-place unnormalized DFTs (sign -1 forward, +1 backward). Plans are cached
/// per length and shared across threads.
void dft_forward(std::span<Complex> data);
void dft_backward(std::span<Complex> data);

/// psi_hat(k) = (2 pi)^(-1/2) ∫ psi(x) e^{-ikx} dx, as a scaled DFT.
MomentumField fourier_transform(const ComplexField& f);
ComplexField inverse_fourier_transform(const MomentumField& f, double time = 0.0);

/// Fourier-spectral d/dx. The Nyquist mode of an even-length grid is dropped.
ComplexField spectral_gradient(const ComplexField& f);
ComplexField spectral_laplacian(const ComplexField& f);

/// Real-valued spectral derivative of the given order (1 or 2).
std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> f, int order);

/// Off-lattice transform amplitude psi_hat(k) by direct quadrature of the
/// samples; spectrally accurate for |k| below the grid Nyquist wavenumber.
class MomentumAmplitude {
public:
    explicit MomentumAmplitude(ComplexField position_space);
    explicit MomentumAmplitude(const MomentumField& momentum_space);

    Complex operator()(double k) const;
    const ComplexField& position_space() const noexcept { return field_; }

private:
    ComplexField field_;
};

}  // namespace pilotlim
