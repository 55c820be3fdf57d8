#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pilotlim/classical.hpp"
#include "pilotlim/error.hpp"

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

const Potential kHarmonic = Potential::harmonic(0.5);  // omega = 1

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("free flow is uniform motion") {
    const auto traj = hamilton_flow(Potential::free(), 1.0, -0.5, 4.0, 0.01, Units{}, 10);
    CHECK(traj.label == TrajectoryLabel::classical);
    CHECK(traj.size() == 41);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.positions[i] == Approx(1.0 - 0.5 * traj.times[i]));
        CHECK(traj.velocities[i] == Approx(-0.5));
    }
}

TEST_CASE("harmonic flow against the closed form") {
    const auto traj = hamilton_flow(kHarmonic, 1.0, 0.5, 10.0, 1e-3, Units{}, 100);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        CHECK(traj.positions[i] == Approx(std::cos(t) + 0.5 * std::sin(t)).epsilon(1e-6).scale(1.0));
        CHECK(traj.velocities[i] == Approx(-std::sin(t) + 0.5 * std::cos(t)).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("mass enters through the force") {
    const Units u{1.0, 4.0};
    const auto traj = hamilton_flow(kHarmonic, 1.0, 0.0, 2.0, 1e-3, u);
    CHECK(traj.final_position() == Approx(std::cos(2.0 * 0.5)).epsilon(1e-6));
}

TEST_CASE("step is shrunk to divide t_final") {
    const auto traj = hamilton_flow(Potential::free(), 0.0, 1.0, 1.0, 0.3);
    CHECK(traj.times.back() == Approx(1.0));
    CHECK(traj.size() == 5);
}

TEST_CASE("Verlet energy error stays bounded and second order") {
    const auto p = Potential::sinusoidal(1.0, 2.0);
    const double e0 = classical_energy(p, {0.1, 1.5, 0.0});
    const auto worst = [&](double dt) {
        const auto traj = hamilton_flow(p, 0.1, 1.5, 100.0, dt, Units{}, static_cast<std::size_t>(0.1 / dt));
        double w = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i)
            w = std::max(w, std::abs(classical_energy(p, {traj.positions[i], traj.velocities[i], traj.times[i]}) - e0));
        return w;
    };
    const double coarse = worst(2e-3), fine = worst(1e-3);
    CHECK(fine < 1e-5);
    CHECK(coarse / fine == Approx(4.0).epsilon(0.1));
}

TEST_CASE("propagate_path: harmonic Jacobi field and action") {
    const auto end = propagate_path(kHarmonic, 0.5, 1.0, 1.2);
    CHECK(end.x == Approx(0.5 * std::cos(1.2) + std::sin(1.2)).epsilon(1e-10));
    CHECK(end.jacobi == Approx(std::sin(1.2)).epsilon(1e-10));
    CHECK(end.action == Approx(oracle::harmonic_action(0.5, end.x, 1.2, 1.0)).epsilon(1e-10));
}

TEST_CASE("free action and prefactor") {
    const auto a = classical_action(Potential::free(), 0.0, 3.0, 2.0);
    CHECK(a.S0 == Approx(9.0 / 4.0).epsilon(1e-10));
    CHECK(a.v0 == Approx(1.5));
    CHECK(a.C == Approx(0.5).epsilon(1e-7));
    CHECK(a.C_jacobi == Approx(0.5).epsilon(1e-10));
    CHECK(a.branch_count == 1);
    CHECK_FALSE(a.caustic_flag);
    const auto heavy = classical_action(Potential::free(), 0.0, 3.0, 2.0, Units{1.0, 3.0});
    CHECK(heavy.S0 == Approx(3.0 * 9.0 / 4.0).epsilon(1e-10));
    CHECK(heavy.C == Approx(1.5).epsilon(1e-7));
}

TEST_CASE("harmonic action and prefactor") {
    for (double t : {0.3, 1.0, 2.5}) {
        const auto a = classical_action(kHarmonic, 0.2, -0.7, t);
        CHECK(a.S0 == Approx(oracle::harmonic_action(0.2, -0.7, t, 1.0)).epsilon(1e-9));
        CHECK(a.C == Approx(1.0 / std::sin(t)).epsilon(1e-6));
        CHECK(a.C_jacobi == Approx(1.0 / std::sin(t)).epsilon(1e-9));
    }
}

TEST_CASE("short times approach the free action") {
    const auto p = Potential::sinusoidal(1.0, 2.0);
    const double t = 1e-3;
    const auto a = classical_action(p, 0.0, 0.002, t);
    CHECK(a.S0 == Approx(0.002 * 0.002 / (2 * t)).epsilon(1e-3));
    CHECK(a.C == Approx(1.0 / t).epsilon(1e-3));
    CHECK(kind_of([&] { classical_action(p, 0.0, 1.0, 0.0); }) == ErrorKind::invalid_argument);
}

TEST_CASE("Hamilton-Jacobi endpoint identities") {
    // dS/dx = m v(t) and dS/dt = -E.
    const auto p = Potential::sinusoidal(1.0, 2.0 * std::numbers::pi);
    const double x0 = 0.0, x = 1.2, t = 0.8, h = 1e-3;
    const auto s = [&](double xx, double tt) { return classical_action(p, x0, xx, tt).S0; };
    const auto a = classical_action(p, x0, x, t);
    CHECK(oracle::d1([&](double xx) { return s(xx, t); }, x, h) == Approx(a.v_final).epsilon(1e-7));
    const double energy = classical_energy(p, {x, a.v_final, t});
    CHECK(oracle::d1([&](double tt) { return s(x, tt); }, t, h) == Approx(-energy).epsilon(1e-7));
    // The prefactor is the mixed derivative -d2S/dx dx0.
    const auto mixed = [&](double y0) {
        return oracle::d1([&](double xx) { return classical_action(p, y0, xx, t).S0; }, x, h);
    };
    CHECK(-oracle::d1(mixed, x0, h) == Approx(a.C).epsilon(1e-5));
}

TEST_CASE("past the focal time the map is not invertible") {
    CHECK(kind_of([] { classical_action(kHarmonic, 0.0, 1.0, 4.0); }) == ErrorKind::multivalued);
    CHECK(kind_of([] { classical_action(kHarmonic, 0.5, 1.0, std::numbers::pi); }) == ErrorKind::no_path);
}

TEST_CASE("phase jet of a smooth phase") {
    const auto jet = phase_jet([](double x) { return std::sin(x); }, 0.3);
    CHECK(jet.slope == Approx(std::cos(0.3)).epsilon(1e-9));
    CHECK(jet.curvature == Approx(-std::sin(0.3)).epsilon(1e-6));
}

TEST_CASE("first caustic times") {
    CHECK(first_caustic_time(kHarmonic, 0.7, PhaseJet{0.0, 0.0}) == Approx(std::numbers::pi / 2).epsilon(1e-9));
    CHECK(first_caustic_time(Potential::free(), 0.4, PhaseJet{-0.2, -0.5}) == Approx(2.0).epsilon(1e-9));
    CHECK(first_caustic_time(Potential::free(), 0.4, [](double x) { return -x * x / 4; }) ==
          Approx(2.0).epsilon(1e-6));
    CHECK(std::isinf(first_caustic_time(Potential::free(), 0.0, PhaseJet{1.0, 0.0})));
    CHECK(std::isinf(first_caustic_time(Potential::free(), 0.0, PhaseJet{0.0, 0.5})));
    // A focusing lens in a harmonic well: J = cos t + c sin t vanishes at atan(-1/c) + pi.
    const double c = 0.5;
    CHECK(first_caustic_time(kHarmonic, 0.0, PhaseJet{0.0, c}) ==
          Approx(std::atan(-1.0 / c) + std::numbers::pi).epsilon(1e-9));
}

}  // TEST_SUITE
