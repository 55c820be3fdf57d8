#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "pilotlim/bohm.hpp"
#include "pilotlim/error.hpp"
#include "pilotlim/evolution.hpp"
#include "pilotlim/initial_state.hpp"
#include "pilotlim/statistics.hpp"

using namespace pilotlim;
using doctest::Approx;

namespace {

EvolutionHistory free_history(double t_final = 6.0) {
    const auto g = make_grid(-40, 40, 1024);
    return evolve(sample(InitialState::gaussian(1.0, 0.0, 0.5), g), Potential::free(), t_final, 2e-3, 0.02, Units{});
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST_SUITE("bohm") {

TEST_CASE("uniform variates pass a KS test and are index-addressable") {
    std::vector<double> u(20000);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = uniform_variate(7, i);
        REQUIRE(u[i] > 0.0);
        REQUIRE(u[i] < 1.0);
    }
    CHECK(ks_distance(u, [](double x) { return std::clamp(x, 0.0, 1.0); }) < 1.63 / std::sqrt(u.size()));
    CHECK(uniform_variate(7, 123) == uniform_variate(7, 123));
    CHECK(uniform_variate(7, 123) != uniform_variate(8, 123));
}

TEST_CASE("initial positions follow |psi|^2") {
    const auto g = make_grid(-20, 20, 1024);
    const auto f0 = sample(InitialState::gaussian(1.5, 2.0), g);
    const auto x = sample_initial_positions(f0, 20000, 11);
    CHECK(mean(x) == Approx(2.0).epsilon(4 * 1.5 / std::sqrt(20000.0) / 2.0));
    const auto rho = PiecewiseLinearDensity::from_field(f0);
    CHECK(ks_distance(x, [&](double y) { return rho.cdf(y); }) < 1.63 / std::sqrt(20000.0));
    // Index independence: a shorter draw is a prefix of a longer one.
    const auto y = sample_initial_positions(f0, 100, 11);
    CHECK(std::equal(y.begin(), y.end(), x.begin()));
    CHECK(sample_initial_positions(f0, 100, 12) != y);
    auto unnormalized = f0;
    for (auto& v : unnormalized.values) v *= 2.0;
    CHECK_THROWS_AS(sample_initial_positions(unnormalized, 10, 1), Error);
}

TEST_CASE("plane wave trajectories move uniformly") {
    const auto g = make_grid(0, 20 * std::numbers::pi, 256);
    const double k = 10 * g.dk();
    ComplexField f(g);
    for (std::size_t j = 0; j < g.size(); ++j) f.values[j] = std::polar(1.0 / std::sqrt(g.length()), k * g.x(j));
    const auto h = evolve(f, Potential::free(), 2.0, 1e-2, 0.1, Units{});
    const auto traj = integrate_trajectory(h, 10.0);
    CHECK_FALSE(traj.truncated);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.positions[i] == Approx(10.0 + k * traj.times[i]).epsilon(1e-9));
        CHECK(traj.velocities[i] == Approx(k).epsilon(1e-9));
    }
}

TEST_CASE("free Gaussian trajectories follow the spreading law") {
    const auto h = free_history();
    const GuidanceField guide(h);
    const double tau = 2.0, v0 = 0.5;
    for (double x0 : {-2.0, -0.5, 0.1, 1.0, 2.5}) {
        const auto traj = integrate_trajectory(guide, x0);
        REQUIRE_FALSE(traj.truncated);
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double t = traj.times[i];
            CHECK(traj.positions[i] == Approx(v0 * t + x0 * std::sqrt(1 + t * t / (tau * tau))).epsilon(1e-5));
        }
    }
}

TEST_CASE("coherent state trajectories move rigidly with the centre") {
    const auto g = make_grid(-10, 10, 256);
    const Units u;
    const double A = 2.0;
    const auto h = evolve(sample(InitialState::coherent(u, 1.0, A), g), Potential::harmonic(0.5), 6.3, 1e-3, 0.01, u);
    for (double x0 : {1.0, 2.0, 3.2}) {
        const auto traj = integrate_trajectory(h, x0);
        REQUIRE_FALSE(traj.truncated);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i)
            worst = std::max(worst, std::abs(traj.positions[i] - (x0 - A + A * std::cos(traj.times[i]))));
        // Linear interpolation in time between snapshots costs about dt_store^2 A / 8.
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("equivariance of the ensemble") {
    const auto h = free_history();
    const GuidanceField guide(h);
    const auto ens = integrate_ensemble(guide, h.snapshot(0), 10000, 3);
    CHECK(ens.truncated_count() == 0);
    CHECK(equivariance_distance(ens, h, 0.0) < 0.0163);
    CHECK(equivariance_distance(ens, h, 6.0) < 0.0163);
    // Positions at t = 6 compared with the initial density must disagree.
    const auto rho0 = PiecewiseLinearDensity::from_field(h.snapshot(0));
    const auto late = ens.positions_at(h.index_of(6.0));
    CHECK(ks_distance(late, [&](double x) { return rho0.cdf(x); }) > 0.1);
}

TEST_CASE("trajectories do not cross") {
    const auto h = free_history();
    const GuidanceField guide(h);
    std::vector<Trajectory> paths;
    for (double x0 = -2.0; x0 <= 2.0; x0 += 0.25) paths.push_back(integrate_trajectory(guide, x0));
    for (std::size_t i = 0; i < paths[0].size(); ++i)
        for (std::size_t a = 1; a < paths.size(); ++a) CHECK(paths[a].positions[i] > paths[a - 1].positions[i]);
}

TEST_CASE("RK4 substep refinement changes positions below 1e-6") {
    const auto h = free_history();
    const GuidanceField guide(h);
    BohmOptions fine;
    fine.substeps = 8;
    const auto a = integrate_trajectory(guide, 1.3);
    const auto b = integrate_trajectory(guide, 1.3, fine);
    CHECK(std::abs(a.final_position() - b.final_position()) < 1e-6);
}

TEST_CASE("t_end stops at the requested snapshot") {
    const auto h = free_history();
    BohmOptions opt;
    opt.t_end = 2.0;
    const auto traj = integrate_trajectory(h, 0.0, opt);
    CHECK(traj.times.back() == Approx(2.0));
}

TEST_CASE("truncation when a path leaves the resolved region") {
    const auto g = make_grid(-10, 10, 256);
    const auto h = evolve(sample(InitialState::gaussian(1.0, 0.0, 4.0), g), Potential::free(), 4.0, 1e-3, 0.02, Units{});
    const auto traj = integrate_trajectory(h, 1.0);
    CHECK(traj.truncated);
    CHECK(std::isfinite(traj.exit_time));
    CHECK(traj.times.back() == Approx(traj.exit_time));
    CHECK(traj.exit_time < 4.0);
    check_trajectory(traj);
}

TEST_CASE("starting in a masked region is an error") {
    const auto h = free_history(0.1);
    CHECK_THROWS_AS(integrate_trajectory(h, 30.0), Error);
}

TEST_CASE("ensemble is independent of the thread count") {
    const auto h = free_history(1.0);
    const GuidanceField guide(h);
    const char* old = std::getenv("PILOTLIM_THREADS");
    const std::string saved = old ? old : "";
    setenv("PILOTLIM_THREADS", "1", 1);
    const auto a = integrate_ensemble(guide, h.snapshot(0), 500, 5);
    setenv("PILOTLIM_THREADS", "3", 1);
    const auto b = integrate_ensemble(guide, h.snapshot(0), 500, 5);
    if (old) setenv("PILOTLIM_THREADS", saved.c_str(), 1); else unsetenv("PILOTLIM_THREADS");
    REQUIRE(a.trajectories.size() == b.trajectories.size());
    for (std::size_t i = 0; i < a.trajectories.size(); ++i)
        CHECK(a.trajectories[i].positions == b.trajectories[i].positions);
}

TEST_CASE("annotation gives U and hbar / (m |v|) along the path") {
    const auto h = free_history(1.0);
    const GuidanceField guide(h);
    auto traj = integrate_trajectory(guide, 0.3);
    annotate(traj, guide);
    REQUIRE(traj.quantum_potential.size() == traj.size());
    // At t = 0: U = -(x^2/4 - 1/2)/2 for sigma = 1, and v = 0.5.
    CHECK(traj.quantum_potential[0] == Approx(-0.5 * (0.3 * 0.3 / 4 - 0.5)).epsilon(1e-6));
    CHECK(traj.local_wavelength[0] == Approx(2.0).epsilon(1e-6));
    check_trajectory(traj);
}

}  // TEST_SUITE
