#include "pilotlim/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pilotlim/error.hpp"

namespace pilotlim {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n) {
    require(std::isfinite(x_min) && std::isfinite(x_max), "grid: bounds must be finite");
    require(x_max > x_min, "grid: x_max must exceed x_min");
    require(n >= 8, "grid: n must be >= 8, got " + std::to_string(n));
    x_min_ = x_min;
    x_max_ = x_max;
    n_ = n;
    dx_ = (x_max - x_min) / static_cast<double>(n);
}

Grid1D Grid1D::from_spacing(double x_min, double dx, std::size_t n) {
    require(std::isfinite(x_min) && std::isfinite(dx) && dx > 0.0, "grid: spacing must be positive");
    require(n >= 8, "grid: n must be >= 8, got " + std::to_string(n));
    Grid1D g;
    g.x_min_ = x_min;
    g.dx_ = dx;
    g.n_ = n;
    g.x_max_ = x_min + dx * static_cast<double>(n);
    return g;
}

double Grid1D::dk() const noexcept { return 2.0 * std::numbers::pi / (dx_ * static_cast<double>(n_)); }

double Grid1D::k(std::size_t j) const noexcept {
    const auto n = static_cast<long long>(n_);
    auto m = static_cast<long long>(j);
    if (m >= (n + 1) / 2) m -= n;
    return static_cast<double>(m) * dk();
}

std::vector<double> Grid1D::positions() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
}

std::vector<double> Grid1D::wavenumbers() const {
    std::vector<double> ks(n_);
    for (std::size_t j = 0; j < n_; ++j) ks[j] = k(j);
    return ks;
}

Grid1D make_grid(double x_min, double x_max, std::size_t n) { return Grid1D(x_min, x_max, n); }

ComplexField::ComplexField(Grid1D g, std::vector<Complex> v, double t)
    : grid(g), values(std::move(v)), time(t) {
    require(values.size() == grid.size(), "field: value count does not match grid");
}

MomentumField::MomentumField(Grid1D g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
    require(values.size() == grid.size(), "momentum field: value count does not match grid");
}

double norm_squared(const ComplexField& f) {
    double s = 0.0;
    for (const auto& z : f.values) s += std::norm(z);
    return s * f.grid.dx();
}

double norm(const ComplexField& f) { return std::sqrt(norm_squared(f)); }

double norm_squared(const MomentumField& f) {
    double s = 0.0;
    for (const auto& z : f.values) s += std::norm(z);
    return s * f.grid.dk();
}

ComplexField normalized(ComplexField f) {
    const double nrm = norm(f);
    if (!(nrm > 0.0)) fail(ErrorKind::degenerate_field, "cannot normalize a zero field");
    for (auto& z : f.values) z /= nrm;
    return f;
}

double l2_distance(const ComplexField& a, const ComplexField& b) {
    require(a.grid == b.grid, "l2_distance: grids differ");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
    return std::sqrt(s * a.grid.dx());
}

double position_mean(const ComplexField& f) {
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double rho = std::norm(f.values[j]);
        m0 += rho;
        m1 += rho * f.grid.x(j);
    }
    return m1 / m0;
}

double position_width(const ComplexField& f) {
    const double mean = position_mean(f);
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double rho = std::norm(f.values[j]);
        const double d = f.grid.x(j) - mean;
        m0 += rho;
        m2 += rho * d * d;
    }
    return std::sqrt(m2 / m0);
}

}  // namespace pilotlim
