#include "pilotlim/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pilotlim/error.hpp"

namespace pilotlim {

PiecewiseLinearDensity::PiecewiseLinearDensity(std::vector<double> nodes, std::vector<double> density)
    : x_(std::move(nodes)), rho_(std::move(density)) {
    require(x_.size() == rho_.size() && x_.size() >= 2, "density: need at least two nodes");
    cumulative_.assign(x_.size(), 0.0);
    for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
        require(x_[j + 1] > x_[j], "density: nodes must increase");
        require(rho_[j] >= 0.0, "density: values must be non-negative");
        cumulative_[j + 1] = cumulative_[j] + 0.5 * (rho_[j] + rho_[j + 1]) * (x_[j + 1] - x_[j]);
    }
    total_ = cumulative_.back();
    require(total_ > 0.0, "density: total mass must be positive");
}

PiecewiseLinearDensity PiecewiseLinearDensity::from_field(const ComplexField& f) {
    std::vector<double> rho(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) rho[j] = std::norm(f.values[j]);
    return PiecewiseLinearDensity(f.grid.positions(), std::move(rho));
}

double PiecewiseLinearDensity::cdf(double x) const {
    if (x <= x_.front()) return 0.0;
    if (x >= x_.back()) return 1.0;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[j + 1] - x_[j];
    const double s = x - x_[j];
    const double slope = (rho_[j + 1] - rho_[j]) / h;
    const double mass = cumulative_[j] + rho_[j] * s + 0.5 * slope * s * s;
    return mass / total_;
}

double PiecewiseLinearDensity::quantile(double u) const {
    require(u >= 0.0 && u <= 1.0, "quantile: u must lie in [0, 1]");
    const double target = u * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.begin()) return x_.front();
    if (it == cumulative_.end()) return x_.back();
    const std::size_t j = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    const double h = x_[j + 1] - x_[j];
    const double a = 0.5 * (rho_[j + 1] - rho_[j]) / h;
    const double b = rho_[j];
    const double c = -(target - cumulative_[j]);
    // Solve a s^2 + b s + c = 0 for s in [0, h] in the cancellation-free form.
    double s;
    if (std::abs(a) * h < 1e-14 * std::max(b, 1e-300)) {
        s = -c / b;
    } else {
        const double denom = b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
        s = denom > 0.0 ? (2.0 * -c) / denom : 0.0;
    }
    return x_[j] + std::clamp(s, 0.0, h);
}

double PiecewiseLinearDensity::mean() const {
    double m = 0.0;
    for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
        const double h = x_[j + 1] - x_[j];
        // ∫ x rho(x) over the cell for linear rho.
        m += h * (rho_[j] * (2.0 * x_[j] + x_[j + 1]) + rho_[j + 1] * (x_[j] + 2.0 * x_[j + 1])) / 6.0;
    }
    return m / total_;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
    require(!samples.empty(), "ks_distance: no samples");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = cdf(s[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_distance_two_sample(std::span<const double> a, std::span<const double> b) {
    require(!a.empty() && !b.empty(), "ks_distance_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / static_cast<double>(x.size()) -
                                 static_cast<double>(j) / static_cast<double>(y.size())));
    }
    return d;
}

double uniform_variate(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 engine(seq);
    // 53 random mantissa bits, offset by half an ulp to exclude 0.
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "fit_line: need two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    require(den != 0.0, "fit_line: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / den;
    return {slope, (sy - slope * sx) / n};
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, "log_log_slope: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return fit_line(lx, ly).slope;
}

}  // namespace pilotlim
