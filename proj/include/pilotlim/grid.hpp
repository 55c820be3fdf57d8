#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pilotlim {

using Complex = std::complex<double>;

/// Physical constants of a run. Natural units by default.
struct Units {
    double hbar = 1.0;
    double mass = 1.0;
};

/// Uniform periodic grid on [x_min, x_max); the right endpoint is the
/// periodic image of the left one.
class Grid1D {
public:
    Grid1D(double x_min, double x_max, std::size_t n);

    /// Builds a grid from its spacing; used when reading snapshots so that
    /// dx round-trips exactly.
    static Grid1D from_spacing(double x_min, double dx, std::size_t n);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }
    double length() const noexcept { return x_max_ - x_min_; }
    double dk() const noexcept;

    double x(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * dx_; }
    /// Wavenumber of DFT bin j in standard ordering (0, 1, ..., -2, -1)·dk.
    double k(std::size_t j) const noexcept;

    std::vector<double> positions() const;
    std::vector<double> wavenumbers() const;

    bool operator==(const Grid1D&) const = default;

private:
    Grid1D() = default;

    double x_min_ = 0.0;
    double x_max_ = 1.0;
    std::size_t n_ = 8;
    double dx_ = 0.125;
};

Grid1D make_grid(double x_min, double x_max, std::size_t n);

/// Wavefunction samples psi(x_j) at a given time.
struct ComplexField {
    Grid1D grid;
    std::vector<Complex> values;
    double time = 0.0;

    explicit ComplexField(Grid1D g, double t = 0.0)
        : grid(g), values(g.size()), time(t) {}
    ComplexField(Grid1D g, std::vector<Complex> v, double t = 0.0);

    std::size_t size() const noexcept { return values.size(); }
};

/// Continuum-convention transform samples psi_hat(k_j) in DFT ordering.
struct MomentumField {
    Grid1D grid;
    std::vector<Complex> values;

    MomentumField(Grid1D g, std::vector<Complex> v);
    std::size_t size() const noexcept { return values.size(); }
};

double norm_squared(const ComplexField& f);
double norm(const ComplexField& f);
double norm_squared(const MomentumField& f);
ComplexField normalized(ComplexField f);

/// sqrt(sum |a - b|^2 dx); grids must match.
double l2_distance(const ComplexField& a, const ComplexField& b);

/// <x> and standard deviation of |psi|^2 (field need not be normalized).
double position_mean(const ComplexField& f);
double position_width(const ComplexField& f);

}  // namespace pilotlim
