#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pilotlim/grid.hpp"

namespace pilotlim {

/// Density given by linear interpolation between nodes (zero outside), with
/// an exact piecewise-quadratic CDF and its inverse.
class PiecewiseLinearDensity {
public:
    PiecewiseLinearDensity(std::vector<double> nodes, std::vector<double> density);

    /// |psi|^2 at the grid points.
    static PiecewiseLinearDensity from_field(const ComplexField& f);

    double cdf(double x) const;
    double quantile(double u) const;
    double total_mass() const noexcept { return total_; }
    double mean() const;

private:
    std::vector<double> x_;
    std::vector<double> rho_;
    std::vector<double> cumulative_;  // unnormalized mass left of each node
    double total_ = 0.0;
};

/// sup_x |F_n(x) - F(x)| for the empirical CDF of samples.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample sup distance between empirical CDFs.
double ks_distance_two_sample(std::span<const double> a, std::span<const double> b);

/// Deterministic uniform variate in (0, 1) for (seed, index), independent of
/// the order in which indices are drawn.
double uniform_variate(std::uint64_t seed, std::uint64_t index);

struct LineFit {
    double slope;
    double intercept;
};

/// Ordinary least-squares fit of y on x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace pilotlim
