#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pilotlim/error.hpp"
#include "pilotlim/evolution.hpp"
#include "pilotlim/hydrodynamic.hpp"
#include "pilotlim/initial_state.hpp"

using namespace pilotlim;
using doctest::Approx;

namespace {

ComplexField from_function(const Grid1D& g, auto&& fn, double t = 0.0) {
    ComplexField f(g, t);
    for (std::size_t j = 0; j < g.size(); ++j) f.values[j] = fn(g.x(j));
    return f;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no pilotlim::Error thrown");
    return ErrorKind::io;
}

std::size_t segments(const std::vector<std::uint8_t>& valid) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < valid.size(); ++j)
        if (valid[j] && (j == 0 || !valid[j - 1])) ++count;
    return count;
}

}  // namespace

TEST_SUITE("hydrodynamic") {

TEST_CASE("plane wave has uniform amplitude and linear phase") {
    const auto g = make_grid(0, 2 * std::numbers::pi, 64);
    const double k = 2.0;
    const auto f = from_function(g, [&](double x) { return std::polar(1.0, k * x); });
    const auto p = polar_decompose(f, Units{});
    CHECK(p.valid_count() == g.size());
    const auto grad = phase_gradient(p);
    const auto v = velocity_field(f, Units{});
    for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(p.amplitude[j] == Approx(1.0));
        CHECK(grad[j] == Approx(k).epsilon(1e-9));
        CHECK(v.values[j] == Approx(k).epsilon(1e-9));
    }
    const auto U = quantum_potential(f, Units{});
    for (double u : U.values) CHECK(std::abs(u) < 1e-9);
}

TEST_CASE("real Gaussian: zero phase and the closed-form quantum potential") {
    const auto g = make_grid(-15, 15, 768);
    const double s = 1.3;
    const auto f = sample(InitialState::gaussian(s), g);
    const auto p = polar_decompose(f, Units{});
    const auto U = quantum_potential(f, Units{});
    const auto v = velocity_field(f, Units{});
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!p.valid[j]) continue;
        const double x = g.x(j);
        CHECK(std::abs(p.phase[j]) < 1e-12);
        CHECK(std::abs(v.values[j]) < 1e-10);
        const double curv = x * x / (4 * s * s * s * s) - 1 / (2 * s * s);
        CHECK(U.values[j] == Approx(-0.5 * curv).epsilon(1e-7).scale(1.0));
    }
    const auto back = reconstruct(p);
    for (std::size_t j = 0; j < g.size(); ++j)
        if (p.valid[j]) CHECK(std::abs(back.values[j] - f.values[j]) < 1e-12);
}

TEST_CASE("first excited state splits into two valid segments") {
    const auto g = make_grid(-8, 8, 256);
    const auto f = normalized(from_function(g, [](double x) { return x * std::exp(-x * x / 2); }));
    const auto p = polar_decompose(f, Units{}, 1e-6);
    CHECK(segments(p.valid) == 2);
    // The sign flip is a pi jump in phase, which does not reach the velocity.
    const auto v = velocity_field(f, Units{}, 1e-6);
    for (std::size_t j = 0; j < g.size(); ++j)
        if (v.valid[j]) CHECK(std::abs(v.values[j]) < 1e-9);
}

TEST_CASE("harmonic ground state: U + V = hbar omega / 2") {
    const auto g = make_grid(-8, 8, 256);
    const Units u;
    const auto f = sample(InitialState::coherent(u, 1.0, 0.0), g);
    const auto U = quantum_potential(f, u);
    const auto V = Potential::harmonic(0.5);
    for (std::size_t j = 0; j < g.size(); ++j)
        if (U.valid[j]) CHECK(U.values[j] + V.value(g.x(j)) == Approx(0.5).epsilon(1e-7));
}

TEST_CASE("units enter U and v through hbar^2/m and hbar/m") {
    const auto g = make_grid(-10, 10, 512);
    const Units u{2.0, 3.0};
    const auto f = from_function(g, [](double x) { return std::exp(-x * x / 4) * std::polar(1.0, 0.7 * x); });
    const auto U1 = quantum_potential(f, Units{});
    const auto U2 = quantum_potential(f, u);
    const auto v1 = velocity_field(f, Units{});
    const auto v2 = velocity_field(f, u);
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!U1.valid[j]) continue;
        CHECK(U2.values[j] == Approx(U1.values[j] * 4.0 / 3.0));
        CHECK(v2.values[j] == Approx(v1.values[j] * 2.0 / 3.0));
    }
}

TEST_CASE("velocity of a spreading free packet") {
    const auto g = make_grid(-40, 40, 1024);
    const double s = 1.0, k0 = 0.5, t = 2.0, tau = 2 * s * s;
    const auto f = from_function(g, [&](double x) { return oracle::free_gaussian(x, t, s, k0); }, t);
    const auto v = velocity_field(f, Units{});
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        if (!v.valid[j] || std::abs(x - k0 * t) > 6) continue;
        CHECK(v.values[j] == Approx(k0 + (x - k0 * t) * t / (t * t + tau * tau)).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("velocity equals the phase gradient over m") {
    const auto g = make_grid(-10, 10, 512);
    const Units u{1.0, 2.0};
    const auto f = from_function(g, [](double x) { return std::exp(-x * x / 6) * std::polar(1.0, 0.3 * x * x + x); });
    const auto p = polar_decompose(f, u);
    const auto grad = phase_gradient(p);
    const auto v = velocity_field(f, u);
    for (std::size_t j = 0; j < g.size(); ++j)
        if (v.valid[j] && std::abs(g.x(j)) < 5) CHECK(v.values[j] == Approx(grad[j] / u.mass).epsilon(1e-6));
}

TEST_CASE("U is invariant under global phase, boosts and scaling") {
    const auto g = make_grid(-10, 10, 512);
    const auto base = [](double x) { return std::exp(-x * x / 4) * (1.0 + 0.2 * std::cos(x)); };
    const auto f = from_function(g, base);
    const auto U0 = quantum_potential(f, Units{});
    const auto boosted = from_function(g, [&](double x) { return 3.0 * base(x) * std::polar(1.0, 1.7 + 2 * x); });
    const auto U1 = quantum_potential(boosted, Units{});
    for (std::size_t j = 0; j < g.size(); ++j)
        if (U0.valid[j]) CHECK(U1.values[j] == Approx(U0.values[j]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("residuals vanish on exact free evolution") {
    const auto g = make_grid(-30, 30, 512);
    const auto h = evolve(sample(InitialState::gaussian(1.0, 0.0, 1.0), g), Potential::free(), 0.02, 1e-4, 0.002,
                          Units{});
    CHECK(continuity_residual(h, 0.01) < 1e-5);
    CHECK(hj_residual(h, 0.01) < 1e-5);
    CHECK(hj_residual(h, 0.002) < 1e-5);  // one snapshot behind: second-order stencil
}

TEST_CASE("dropping U leaves an order-one Hamilton-Jacobi residual") {
    const auto g = make_grid(-8, 8, 256);
    const auto h = evolve(sample(InitialState::gaussian(0.5), g), Potential::free(), 0.01, 1e-4, 0.002, Units{});
    CHECK(hj_residual(h, 0.004) < 1e-5);
    CHECK(hj_residual(h, 0.004, kDefaultRhoFloor, false) > 0.1);
}

TEST_CASE("residual error cases") {
    const auto g = make_grid(-8, 8, 128);
    const Units u;
    const auto ground = sample(InitialState::coherent(u, 1.0, 0.0), g);
    const auto h = evolve(ground, Potential::harmonic(0.5), 0.01, 1e-3, 0.005, u);
    CHECK(kind_of([&] { continuity_residual(h, 0.0); }) == ErrorKind::needs_interior_time);
    CHECK(kind_of([&] { hj_residual(h, 0.01); }) == ErrorKind::needs_interior_time);
    const auto coarse = evolve(ground, Potential::harmonic(0.5), 8.0, 1e-2, 4.0, u);
    CHECK(kind_of([&] { hj_residual(coarse, 4.0); }) == ErrorKind::time_resolution);
    const ComplexField zero(g);
    CHECK(kind_of([&] { amplitude_mask(zero, kDefaultRhoFloor); }) == ErrorKind::degenerate_field);
    CHECK(kind_of([&] { polar_decompose(zero, u); }) == ErrorKind::degenerate_field);
}

TEST_CASE("probability current of a plane wave") {
    const auto g = make_grid(0, 2 * std::numbers::pi, 32);
    const auto f = from_function(g, [](double x) { return 2.0 * std::polar(1.0, 3 * x); });
    for (double j : probability_current(f, Units{1.0, 2.0})) CHECK(j == Approx(4.0 * 3.0 / 2.0));
}

}  // TEST_SUITE
