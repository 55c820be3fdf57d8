#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pilotlim/bohm.hpp"
#include "pilotlim/error.hpp"
#include "pilotlim/evolution.hpp"
#include "pilotlim/initial_state.hpp"
#include "pilotlim/semiclassical.hpp"
#include "pilotlim/statistics.hpp"

using namespace pilotlim;
using doctest::Approx;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no pilotlim::Error thrown");
    return ErrorKind::io;
}

const Grid1D kMicro = make_grid(-40, 40, 4096);

MomentumAmplitude gaussian_hat(double sigma, double k0) {
    return MomentumAmplitude(sample(InitialState::gaussian(sigma, 0.0, k0), kMicro));
}

// Exact rescaled free Gaussian: eps^{-1/2} psi_micro(x / eps, t / eps).
ComplexField exact_free(const Grid1D& g, double t, double eps, double sigma, double k0) {
    ComplexField f(g, t);
    for (std::size_t j = 0; j < g.size(); ++j)
        f.values[j] = oracle::free_gaussian(g.x(j) / eps, t / eps, sigma, k0) / std::sqrt(eps);
    return f;
}

double normal_cdf(double x, double mu, double sd) { return 0.5 * std::erfc(-(x - mu) / (sd * std::numbers::sqrt2)); }

}  // namespace

TEST_SUITE("semiclassical") {

TEST_CASE("free limiting position density") {
    const auto hat = gaussian_hat(1.0, 1.0);
    const double t = 1.5;
    double mass = 0.0;
    const double h = 0.01;
    for (double x = -6; x <= 9; x += h) {
        const double rho = limiting_position_density(Potential::free(), hat, x, t);
        const double a = oracle::gaussian_hat_abs(x / t, 1.0, 1.0);
        CHECK(rho == Approx(a * a / t).epsilon(1e-8).scale(1e-12));
        mass += rho * h;
    }
    CHECK(mass == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("free stationary phase converges at first order in eps") {
    const auto hat = gaussian_hat(1.0, 1.0);
    const auto g = make_grid(-4, 6, 1024);
    std::vector<double> eps{0.1, 0.05, 0.025}, err;
    for (double e : eps) {
        const auto approx = semiclassical_field(Potential::free(), hat, g, 1.0, e);
        err.push_back(relative_l2_error(approx, exact_free(g, 1.0, e, 1.0, 1.0)));
    }
    CHECK(err[2] < 0.05);
    CHECK(log_log_slope(eps, err) == Approx(1.0).epsilon(0.15));
}

TEST_CASE("the e^{-i pi/4} branch matches the free propagator phase") {
    const auto hat = gaussian_hat(1.0, 0.0);
    const double eps = 0.01, t = 1.0;
    for (double x : {-0.3, 0.0, 0.4}) {
        const Complex a = semiclassical_wavefunction(Potential::free(), hat, x, t, eps);
        const Complex b = oracle::free_gaussian(x / eps, t / eps, 1.0, 0.0) / std::sqrt(eps);
        CHECK(std::abs(std::arg(a / b)) < 0.02);
    }
}

TEST_CASE("harmonic stationary phase against the rescaled evolution") {
    const auto hat = gaussian_hat(1.0, 1.0);
    const auto g = make_grid(-8, 8, 1024);
    const double eps = 0.05, t = std::numbers::pi / 4;
    const auto state = InitialState::gaussian(1.0, 0.0, 1.0);
    const auto h = evolve_rescaled(prepare_rescaled_initial(state, g, eps), Potential::harmonic(0.5), eps, t,
                                   t / 2000, t, Units{});
    const auto approx = semiclassical_field(Potential::harmonic(0.5), hat, g, t, eps);
    CHECK(relative_l2_error(approx, h.snapshot(1)) < 0.1);
}

TEST_CASE("semiclassical evaluation is refused past a caustic") {
    const auto hat = gaussian_hat(1.0, 0.0);
    CHECK(kind_of([&] { semiclassical_wavefunction(Potential::harmonic(0.5), hat, 0.3, 4.0, 0.1); }) ==
          ErrorKind::multivalued);
    CHECK(kind_of([&] { semiclassical_wavefunction(Potential::free(), hat, 0.3, 1.0, 0.0); }) ==
          ErrorKind::invalid_argument);
}

TEST_CASE("limiting velocity density") {
    const auto hat = gaussian_hat(0.8, 1.0);
    double mass = 0.0, first = 0.0;
    const double h = 1e-3;
    for (double v = -3; v <= 5; v += h) {
        const double rho = limiting_velocity_density(hat, v);
        mass += rho * h;
        first += v * rho * h;
    }
    CHECK(mass == Approx(1.0).epsilon(1e-6));
    CHECK(first == Approx(1.0).epsilon(1e-6));
    // m v = hbar k: doubling the mass halves the velocity scale.
    const Units heavy{1.0, 2.0};
    CHECK(limiting_velocity_density(hat, 0.5, heavy) == Approx(2.0 * limiting_velocity_density(hat, 1.0)));
    // The CDF is piecewise quadratic on the k lattice: a long domain keeps dk small.
    const auto dist = limiting_velocity_distribution(sample(InitialState::gaussian(0.8, 0.0, 1.0), make_grid(-160, 160, 16384)));
    CHECK(dist.total_mass() == Approx(1.0).epsilon(1e-6));
    CHECK(dist.quantile(0.5) == Approx(1.0).epsilon(1e-4));
    CHECK(dist.cdf(1.0 + 1.0 / (2 * 0.8)) == Approx(normal_cdf(1.0, 0.0, 1.0)).epsilon(1e-4));
}

TEST_CASE("Bohmian ensemble approaches the limiting position density") {
    const double eps = 0.05, t = 1.0, sigma = 1.0, k0 = 1.0;
    const auto g = make_grid(-8, 8, 1024);
    const auto state = InitialState::gaussian(sigma, 0.0, k0);
    const auto h = evolve_rescaled(prepare_rescaled_initial(state, g, eps), Potential::free(), eps, t, 1e-3, 0.01,
                                   Units{});
    const GuidanceField guide(h);
    const auto ens = integrate_ensemble(guide, h.snapshot(0), 5000, 21);
    REQUIRE(ens.truncated_count() == 0);
    const auto x = ens.positions_at(h.size() - 1);
    // Limit: normal with mean k0 t and standard deviation t / (2 sigma).
    CHECK(ks_distance(x, [&](double y) { return normal_cdf(y, k0 * t, t / (2 * sigma)); }) < 0.05);
}

TEST_CASE("WKB transport of a diverging free wave") {
    const auto g = make_grid(-6, 6, 601);
    const double k0 = 0.8, a = 0.5, t = 1.2;
    std::vector<double> R0(g.size()), S0(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        R0[j] = std::exp(-x * x / 4);
        S0[j] = k0 * x + 0.5 * a * x * x;
    }
    const auto w = wkb_short_wave(g, R0, S0, Potential::free(), t);
    std::size_t checked = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!w.valid[j] || std::abs(g.x(j) - k0 * t) > 4) continue;
        const double x0 = (g.x(j) - k0 * t) / (1 + a * t);
        const double v0 = k0 + a * x0;
        CHECK(w.velocity[j] == Approx(v0).epsilon(1e-6));
        CHECK(w.amplitude[j] == Approx(std::exp(-x0 * x0 / 4) / std::sqrt(1 + a * t)).epsilon(1e-5));
        CHECK(w.phase[j] == Approx(k0 * x0 + 0.5 * a * x0 * x0 + 0.5 * v0 * v0 * t).epsilon(1e-6));
        ++checked;
    }
    CHECK(checked > 100);
    CHECK(w.velocity_at(1.0) == Approx(k0 + a * (1.0 - k0 * t) / (1 + a * t)).epsilon(1e-5));
}

TEST_CASE("WKB harmonic ground-state amplitude is stationary") {
    const auto g = make_grid(-5, 5, 401);
    std::vector<double> R0(g.size()), S0(g.size(), 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) R0[j] = std::exp(-g.x(j) * g.x(j) / 2);
    const auto w = wkb_short_wave(g, R0, S0, Potential::harmonic(0.5), 1.0);
    // Launched at rest, x = x0 cos t; R = R0(x / cos t) / sqrt(cos t).
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!w.valid[j]) continue;
        const double x0 = g.x(j) / std::cos(1.0);
        CHECK(w.amplitude[j] == Approx(std::exp(-x0 * x0 / 2) / std::sqrt(std::cos(1.0))).epsilon(1e-4).scale(1e-3));
    }
}

TEST_CASE("WKB refuses crossing characteristics") {
    const auto g = make_grid(-3, 3, 121);
    std::vector<double> R0(g.size(), 1.0), S0(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) S0[j] = -0.5 * g.x(j) * g.x(j);
    CHECK(kind_of([&] { wkb_short_wave(g, R0, S0, Potential::free(), 2.0); }) == ErrorKind::multivalued);
    CHECK_NOTHROW(wkb_short_wave(g, R0, S0, Potential::free(), 0.5));
}

}  // TEST_SUITE
