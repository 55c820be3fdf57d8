#include "pilotlim/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pilotlim/error.hpp"
#include "pilotlim/parallel.hpp"

namespace pilotlim {

namespace {

Complex stationary_phase(const ActionData& a, const MomentumAmplitude& psi0_hat, double eps, const Units& units) {
    const double hbar = units.hbar;
    const Complex prefactor = std::polar(std::sqrt(a.C / hbar), -0.25 * std::numbers::pi);
    return prefactor * psi0_hat(units.mass * a.v0 / hbar) * std::polar(1.0, a.S0 / (hbar * eps));
}

// Fourth-order first derivative on a uniform grid, one-sided at the ends.
std::vector<double> difference(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (j >= 2 && j + 2 < n) {
            d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
        } else if (j + 4 < n && j < 2) {
            d[j] = (-25.0 * f[j] + 48.0 * f[j + 1] - 36.0 * f[j + 2] + 16.0 * f[j + 3] - 3.0 * f[j + 4]) / (12.0 * h);
        } else {
            d[j] = (25.0 * f[j] - 48.0 * f[j - 1] + 36.0 * f[j - 2] - 16.0 * f[j - 3] + 3.0 * f[j - 4]) / (12.0 * h);
        }
    }
    return d;
}

// Fritsch–Carlson slopes for monotone cubic interpolation.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> delta(n - 1), m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    return m;
}

struct HermitePoint {
    double value;
    double slope;
};

HermitePoint hermite(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& m,
                     std::size_t i, double at) {
    const double h = x[i + 1] - x[i];
    const double s = (at - x[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -d00, d11 = 3 * s * s - 2 * s;
    return {h00 * y[i] + h10 * h * m[i] + h01 * y[i + 1] + h11 * h * m[i + 1],
            (d00 * y[i] + d01 * y[i + 1]) / h + d10 * m[i] + d11 * m[i + 1]};
}

}  // namespace

Complex semiclassical_wavefunction(const Potential& p, const MomentumAmplitude& psi0_hat, double x, double t,
                                   double eps, const Units& units, const ActionOptions& options) {
    require(eps > 0.0 && eps <= 1.0, "semiclassical_wavefunction: eps must lie in (0, 1]");
    return stationary_phase(classical_action(p, 0.0, x, t, units, options), psi0_hat, eps, units);
}

ComplexField semiclassical_field(const Potential& p, const MomentumAmplitude& psi0_hat, const Grid1D& grid,
                                 double t, double eps, const Units& units, const ActionOptions& options) {
    require(eps > 0.0 && eps <= 1.0, "semiclassical_field: eps must lie in (0, 1]");
    ComplexField out(grid, t);
    const std::size_t n = grid.size();
    // Warm-started sweeps over a fixed number of contiguous blocks, so the
    // result does not depend on the thread count.
    const std::size_t blocks = std::min<std::size_t>(n, 16);
    const std::size_t block = (n + blocks - 1) / blocks;
    parallel_for(blocks, [&](std::size_t b) {
        ActionOptions opt = options;
        for (std::size_t j = b * block; j < std::min(n, (b + 1) * block); ++j) {
            const ActionData a = classical_action(p, 0.0, grid.x(j), t, units, opt);
            opt.v0_guess = a.v0;
            out.values[j] = stationary_phase(a, psi0_hat, eps, units);
        }
    });
    return out;
}

double relative_l2_error(const ComplexField& approx, const ComplexField& reference) {
    require(approx.grid == reference.grid, "relative_l2_error: grids differ");
    const double ref = norm(reference);
    require(ref > 0.0, "relative_l2_error: zero reference");
    return l2_distance(approx, reference) / ref;
}

double limiting_velocity_density(const MomentumAmplitude& psi0_hat, double v, const Units& units) {
    return units.mass / units.hbar * std::norm(psi0_hat(units.mass * v / units.hbar));
}

PiecewiseLinearDensity limiting_velocity_distribution(const ComplexField& psi0, const Units& units) {
    const MomentumField hat = fourier_transform(psi0);
    const std::size_t n = hat.size();
    std::vector<double> v(n), rho(n);
    // DFT order -> ascending k: the negative half starts at index ceil(n/2).
    const std::size_t shift = (n + 1) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + shift) % n;
        v[i] = units.hbar * hat.grid.k(j) / units.mass;
        rho[i] = units.mass / units.hbar * std::norm(hat.values[j]);
    }
    return PiecewiseLinearDensity(std::move(v), std::move(rho));
}

double limiting_position_density(const Potential& p, const MomentumAmplitude& psi0_hat, double x, double t,
                                 const Units& units, const ActionOptions& options) {
    const ActionData a = classical_action(p, 0.0, x, t, units, options);
    return a.C / units.hbar * std::norm(psi0_hat(units.mass * a.v0 / units.hbar));
}

double WkbField::velocity_at(double x) const {
    if (!(x >= arrival.front() && x <= arrival.back())) return std::numeric_limits<double>::quiet_NaN();
    auto it = std::upper_bound(arrival.begin(), arrival.end(), x);
    if (it == arrival.end()) --it;
    const auto i = static_cast<std::size_t>(it - arrival.begin()) - 1;
    const double h = arrival[i + 1] - arrival[i];
    const double s = (x - arrival[i]) / h;
    const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1, d11 = 3 * s * s - 2 * s;
    const double dS = d00 * (arrival_phase[i] - arrival_phase[i + 1]) / h +
                      mass * (d10 * arrival_velocity[i] + d11 * arrival_velocity[i + 1]);
    return dS / mass;
}

WkbField wkb_short_wave(const Grid1D& grid, const std::vector<double>& R0, const std::vector<double>& S0,
                        const Potential& p, double t, const Units& units, std::size_t steps) {
    const std::size_t n = grid.size();
    require(R0.size() == n && S0.size() == n, "wkb_short_wave: fields must match the grid");
    require(t >= 0.0 && std::isfinite(t), "wkb_short_wave: t must be >= 0");
    const double m = units.mass;
    const auto dS = difference(S0, grid.dx());
    std::vector<double> v0(n);
    for (std::size_t j = 0; j < n; ++j) v0[j] = dS[j] / m;
    const auto dv0 = difference(v0, grid.dx());

    WkbField out{grid, t, {}, {}, {}, {}, grid.positions(), std::vector<double>(n), std::vector<double>(n),
                 std::vector<double>(n), m};
    std::vector<double> arrival_amplitude(n);
    std::vector<std::uint8_t> crossed(n, 0);
    parallel_for(n, [&](std::size_t j) {
        if (t == 0.0) {
            out.arrival[j] = grid.x(j);
            out.arrival_velocity[j] = v0[j];
            out.arrival_phase[j] = S0[j];
            arrival_amplitude[j] = R0[j];
            return;
        }
        const PathEnd e = propagate_path(p, grid.x(j), v0[j], t, units, steps, 1.0, dv0[j]);
        if (!(e.jacobi > 0.0) || !(e.min_jacobi > 0.0)) crossed[j] = 1;
        out.arrival[j] = e.x;
        out.arrival_velocity[j] = e.v;
        out.arrival_phase[j] = S0[j] + e.action;
        arrival_amplitude[j] = R0[j] / std::sqrt(std::abs(e.jacobi));
    });
    for (std::size_t j = 0; j < n; ++j) {
        if (crossed[j] || (j > 0 && !(out.arrival[j] > out.arrival[j - 1])))
            fail(ErrorKind::multivalued, "wkb_short_wave: characteristics cross before t (caustic)");
    }

    const auto r_slopes = pchip_slopes(out.arrival, arrival_amplitude);
    std::vector<double> s_slopes(n);
    for (std::size_t j = 0; j < n; ++j) s_slopes[j] = m * out.arrival_velocity[j];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.amplitude.assign(n, 0.0);
    out.phase.assign(n, nan);
    out.velocity.assign(n, nan);
    out.valid.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.x(j);
        if (x < out.arrival.front() || x > out.arrival.back()) continue;
        auto it = std::upper_bound(out.arrival.begin(), out.arrival.end(), x);
        if (it == out.arrival.end()) --it;
        const auto i = static_cast<std::size_t>(it - out.arrival.begin()) - 1;
        out.amplitude[j] = std::max(0.0, hermite(out.arrival, arrival_amplitude, r_slopes, i, x).value);
        const HermitePoint s = hermite(out.arrival, out.arrival_phase, s_slopes, i, x);
        out.phase[j] = s.value;
        out.velocity[j] = s.slope / m;
        out.valid[j] = 1;
    }
    return out;
}

}  // namespace pilotlim
