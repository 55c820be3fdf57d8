#include "pilotlim/classical.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "pilotlim/error.hpp"

namespace pilotlim {

namespace {

// (x, v, J, J') under m x'' = -V'(x), m J'' = -V''(x) J.
using State4 = std::array<double, 4>;

State4 derivative(const Potential& p, double mass, const State4& s) {
    return {s[1], -p.d1(s[0]) / mass, s[3], -p.d2(s[0]) * s[2] / mass};
}

State4 rk4_step(const Potential& p, double mass, const State4& s, double h) {
    auto axpy = [](const State4& a, double c, const State4& b) {
        return State4{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]};
    };
    const State4 k1 = derivative(p, mass, s);
    const State4 k2 = derivative(p, mass, axpy(s, 0.5 * h, k1));
    const State4 k3 = derivative(p, mass, axpy(s, 0.5 * h, k2));
    const State4 k4 = derivative(p, mass, axpy(s, h, k3));
    State4 out;
    for (int i = 0; i < 4; ++i) out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

double lagrangian(const Potential& p, double mass, double x, double v) {
    return 0.5 * mass * v * v - p.value(x);
}

}  // namespace

Trajectory hamilton_flow(const Potential& p, double x0, double v0, double t_final, double dt, const Units& units,
                         std::size_t store_every) {
    require(dt > 0.0 && std::isfinite(dt), "hamilton_flow: dt must be positive");
    require(t_final >= 0.0 && std::isfinite(t_final), "hamilton_flow: t_final must be >= 0");
    require(store_every >= 1, "hamilton_flow: store_every must be >= 1");
    const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : t_final / static_cast<double>(steps);
    const double m = units.mass;

    Trajectory tr;
    tr.label = TrajectoryLabel::classical;
    double x = x0, v = v0;
    double a = -p.d1(x) / m;
    tr.times.push_back(0.0);
    tr.positions.push_back(x);
    tr.velocities.push_back(v);
    for (std::size_t n = 1; n <= steps; ++n) {
        x += h * v + 0.5 * h * h * a;
        const double a_new = -p.d1(x) / m;
        v += 0.5 * h * (a + a_new);
        a = a_new;
        if (n % store_every == 0 || n == steps) {
            tr.times.push_back(h * static_cast<double>(n));
            tr.positions.push_back(x);
            tr.velocities.push_back(v);
        }
    }
    return tr;
}

double classical_energy(const Potential& p, const ClassicalState& s, const Units& units) {
    return 0.5 * units.mass * s.v * s.v + p.value(s.x);
}

PathEnd propagate_path(const Potential& p, double x0, double v0, double t, const Units& units, std::size_t steps,
                       double j0, double dj0) {
    require(t >= 0.0 && std::isfinite(t), "propagate_path: t must be >= 0");
    require(steps >= 1, "propagate_path: steps must be >= 1");
    const double m = units.mass;
    const double h = t / static_cast<double>(steps);
    State4 s{x0, v0, j0, dj0};
    double min_j = std::numeric_limits<double>::infinity();
    double simpson = lagrangian(p, m, x0, v0);
    for (std::size_t n = 0; n < steps; ++n) {
        const State4 mid = rk4_step(p, m, s, 0.5 * h);
        s = rk4_step(p, m, s, h);
        if (n + 1 < steps) min_j = std::min(min_j, s[2]);
        simpson += 4.0 * lagrangian(p, m, mid[0], mid[1]) + (n + 1 < steps ? 2.0 : 1.0) * lagrangian(p, m, s[0], s[1]);
    }
    return {s[0], s[1], s[2], min_j, simpson * h / 6.0};
}

ActionData classical_action(const Potential& p, double x0, double x, double t, const Units& units,
                            const ActionOptions& options) {
    require(t > 0.0 && std::isfinite(t), "classical_action: t must be positive");
    require(std::isfinite(x0) && std::isfinite(x), "classical_action: endpoints must be finite");
    const double m = units.mass;
    const double tol = options.tolerance * std::max(1.0, std::abs(x));
    auto miss = [&](double v0) { return propagate_path(p, x0, v0, t, units, options.steps).x - x; };

    const double guess = options.v0_guess.value_or((x - x0) / t);
    const PathEnd first = propagate_path(p, x0, guess, t, units, options.steps);
    // At a focal time the end point no longer depends on v0; past one the
    // shooting map is no longer increasing.
    const double j_tol = 1e-9 * t;
    if (std::abs(first.jacobi) <= j_tol)
        fail(ErrorKind::no_path, "classical_action: focal time, the end point does not depend on the launch velocity");
    if (first.jacobi < 0.0 || first.min_jacobi < 0.0)
        fail(ErrorKind::multivalued, "classical_action: caustic crossed, the boundary-value problem has several branches");
    double lo = guess, hi = guess;
    double f_lo = first.x - x, f_hi = f_lo;
    double width = std::max(1e-3, 1e-2 * std::abs(guess)) + std::abs(f_lo) / t;
    int doublings = 0;
    while (f_lo > 0.0 || f_hi < 0.0) {
        // The map is increasing before the first caustic, so only one side moves.
        if (doublings++ > options.max_doublings)
            fail(ErrorKind::no_path, "classical_action: no classical path found in the velocity bracket");
        if (f_lo > 0.0) {
            hi = lo, f_hi = f_lo;
            lo -= width;
            f_lo = miss(lo);
        } else {
            lo = hi, f_lo = f_hi;
            hi += width;
            f_hi = miss(hi);
        }
        if (!std::isfinite(f_lo) || !std::isfinite(f_hi))
            fail(ErrorKind::no_path, "classical_action: shooting produced a non-finite end point");
        width *= 2.0;
    }

    // Illinois-weighted false position keeps the bracket while converging superlinearly.
    double v0 = f_lo == 0.0 ? lo : hi;
    double f_v = f_lo == 0.0 ? 0.0 : f_hi;
    int side = 0;
    for (int it = 0; it < 200 && std::abs(f_v) > tol; ++it) {
        v0 = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if (!(v0 > lo && v0 < hi)) v0 = 0.5 * (lo + hi);
        f_v = miss(v0);
        if ((f_v < 0.0) == (f_lo < 0.0)) {
            lo = v0, f_lo = f_v;
            if (side == -1) f_hi *= 0.5;
            side = -1;
        } else {
            hi = v0, f_hi = f_v;
            if (side == 1) f_lo *= 0.5;
            side = 1;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v0))) break;
    }

    const PathEnd end = propagate_path(p, x0, v0, t, units, options.steps);
    const double dv = 1e-5 * std::max(1.0, std::abs(v0));
    const double slope = (propagate_path(p, x0, v0 + dv, t, units, options.steps).x -
                          propagate_path(p, x0, v0 - dv, t, units, options.steps).x) /
                         (2.0 * dv);
    if (!(end.jacobi > 0.0) || !(slope > 0.0))
        fail(ErrorKind::multivalued, "classical_action: caustic crossed, the boundary-value problem has several branches");

    ActionData out;
    out.x0 = x0;
    out.x = x;
    out.t = t;
    out.S0 = end.action;
    out.C = m / slope;
    out.C_jacobi = m / end.jacobi;
    out.v0 = v0;
    out.v_final = end.v;
    out.branch_count = 1;
    out.caustic_flag = false;
    return out;
}

PhaseJet phase_jet(const std::function<double(double)>& S0, double x0, double h) {
    require(h > 0.0, "phase_jet: h must be positive");
    const double fm2 = S0(x0 - 2 * h), fm = S0(x0 - h), f0 = S0(x0), fp = S0(x0 + h), fp2 = S0(x0 + 2 * h);
    PhaseJet jet;
    jet.slope = (fm2 - 8.0 * fm + 8.0 * fp - fp2) / (12.0 * h);
    jet.curvature = (-fm2 + 16.0 * fm - 30.0 * f0 + 16.0 * fp - fp2) / (12.0 * h * h);
    return jet;
}

double first_caustic_time(const Potential& p, double x0, const PhaseJet& jet, const Units& units,
                          const CausticOptions& options) {
    require(options.dt > 0.0 && options.t_max > 0.0, "first_caustic_time: dt and t_max must be positive");
    const double m = units.mass;
    State4 s{x0, jet.slope / m, 1.0, jet.curvature / m};
    double t = 0.0;
    while (t < options.t_max) {
        const double h = std::min(options.dt, options.t_max - t);
        const State4 next = rk4_step(p, m, s, h);
        if (next[2] <= 0.0) {
            // Bisect on the step length from the bracketing state.
            double a = 0.0, b = h;
            for (int it = 0; it < 100 && b - a > 1e-15 * std::max(1.0, t); ++it) {
                const double c = 0.5 * (a + b);
                if (rk4_step(p, m, s, c)[2] > 0.0)
                    a = c;
                else
                    b = c;
            }
            return t + 0.5 * (a + b);
        }
        s = next;
        t += h;
    }
    return std::numeric_limits<double>::infinity();
}

double first_caustic_time(const Potential& p, double x0, const std::function<double(double)>& S0,
                          const Units& units, const CausticOptions& options) {
    return first_caustic_time(p, x0, phase_jet(S0, x0), units, options);
}

}  // namespace pilotlim
