#pragma once

#include <functional>
#include <optional>

#include "pilotlim/grid.hpp"
#include "pilotlim/potential.hpp"
#include "pilotlim/trajectory.hpp"

namespace pilotlim {

struct ClassicalState {
    double x = 0.0;
    double v = 0.0;
    double t = 0.0;
};

/// Velocity-Verlet integration of m x'' = -V'(x). The step is shrunk so that
/// it divides t_final; every store_every-th step is recorded.
Trajectory hamilton_flow(const Potential& p, double x0, double v0, double t_final, double dt,
                         const Units& units = {}, std::size_t store_every = 1);

/// Total energy m v^2 / 2 + V(x).
double classical_energy(const Potential& p, const ClassicalState& s, const Units& units = {});

/// End point of a classical path together with its variational data.
struct PathEnd {
    double x;
    double v;
    double jacobi;      ///< Jacobi field J(t); dx_t/dv0 for the default J(0) = 0, J'(0) = 1
    double min_jacobi;  ///< smallest J over the interior steps
    double action;      ///< integral of m v^2 / 2 - V along the path
};

/// RK4 over the path and its Jacobi field; the action is a composite
/// Simpson sum of the Lagrangian at the steps and their midpoints.
PathEnd propagate_path(const Potential& p, double x0, double v0, double t, const Units& units = {},
                       std::size_t steps = 1000, double j0 = 0.0, double dj0 = 1.0);

struct ActionOptions {
    std::size_t steps = 1000;
    double tolerance = 1e-12;          ///< on |x_t(v0) - x|, relative to max(1, |x|)
    int max_doublings = 60;
    std::optional<double> v0_guess;    ///< defaults to (x - x0) / t
};

struct ActionData {
    double x0;
    double x;
    double t;
    double S0;
    double C;            ///< m / (dx_t/dv0) by differencing the shooting map
    double C_jacobi;     ///< the same from the Jacobi equation
    double v0;
    double v_final;
    int branch_count;
    bool caustic_flag;
};

/// Boundary-value action from (x0, 0) to (x, t) by shooting on v0.
/// Throws no_path when no bracket is found and multivalued when the shooting
/// map is not increasing at the root (a caustic has been crossed).
ActionData classical_action(const Potential& p, double x0, double x, double t, const Units& units = {},
                            const ActionOptions& options = {});

/// Value and first two derivatives of an initial phase S0 at a point.
struct PhaseJet {
    double slope = 0.0;      ///< S0'(x0), so v0 = slope / m
    double curvature = 0.0;  ///< S0''(x0)
};

/// Central-difference jet of a phase function at x0.
PhaseJet phase_jet(const std::function<double(double)>& S0, double x0, double h = 1e-4);

struct CausticOptions {
    double t_max = 100.0;
    double dt = 1e-3;
};

/// First zero of m J'' = -V''(x(t)) J with J(0) = 1, J'(0) = S0''(x0)/m along
/// the path launched with v0 = S0'(x0)/m; +infinity if none before t_max.
double first_caustic_time(const Potential& p, double x0, const PhaseJet& jet, const Units& units = {},
                          const CausticOptions& options = {});
double first_caustic_time(const Potential& p, double x0, const std::function<double(double)>& S0,
                          const Units& units = {}, const CausticOptions& options = {});

}  // namespace pilotlim
