#include "pilotlim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pilotlim/classical.hpp"
#include "pilotlim/error.hpp"
#include "pilotlim/evolution.hpp"
#include "pilotlim/semiclassical.hpp"
#include "pilotlim/spectral.hpp"

namespace pilotlim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Fourth-order centered derivative where the stencil is valid, second order
// when only direct neighbours are, NaN otherwise.
std::vector<double> masked_derivative(const std::vector<double>& f, const std::vector<std::uint8_t>& ok, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, kNan);
    auto good = [&](std::size_t j, std::ptrdiff_t off) {
        const auto k = static_cast<std::ptrdiff_t>(j) + off;
        return k >= 0 && k < static_cast<std::ptrdiff_t>(n) && ok[static_cast<std::size_t>(k)];
    };
    for (std::size_t j = 0; j < n; ++j) {
        if (!ok[j]) continue;
        if (good(j, -2) && good(j, -1) && good(j, 1) && good(j, 2))
            d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
        else if (good(j, -1) && good(j, 1))
            d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
        else if (good(j, 1) && good(j, 2))
            d[j] = (-3.0 * f[j] + 4.0 * f[j + 1] - f[j + 2]) / (2.0 * h);
        else if (good(j, -1) && good(j, -2))
            d[j] = (3.0 * f[j] - 4.0 * f[j - 1] + f[j - 2]) / (2.0 * h);
    }
    return d;
}

}  // namespace

double debroglie_wavelength(const ComplexField& f, const Units& units) {
    const double p2 = 2.0 * units.mass * kinetic_energy(f, units);
    const double resolution = units.hbar * f.grid.dk();
    if (!(p2 > 1e-12 * resolution * resolution))
        fail(ErrorKind::undefined_wavelength, "debroglie_wavelength: the state has no kinetic energy");
    return units.hbar / std::sqrt(p2);
}

double velocity_floor(const Grid1D& grid, const Units& units) {
    return 1e-9 * units.hbar / (units.mass * grid.dx());
}

MaskedField local_wavelength(const ComplexField& f, const Units& units, double rho_floor) {
    MaskedField v = velocity_field(f, units, rho_floor);
    const double floor = velocity_floor(f.grid, units);
    for (std::size_t j = 0; j < v.values.size(); ++j) {
        if (v.valid[j] && std::abs(v.values[j]) > floor) {
            v.values[j] = units.hbar / (units.mass * std::abs(v.values[j]));
        } else {
            v.valid[j] = 0;
            v.values[j] = kNan;
        }
    }
    return v;
}

LpwReport lpw_report(const ComplexField& f, const Units& units, const LpwThresholds& thresholds, double rho_floor) {
    const std::size_t n = f.size();
    const MaskedField vel = velocity_field(f, units, rho_floor);
    const MaskedField curv = amplitude_curvature(f, rho_floor);
    const ComplexField grad = spectral_gradient(f);
    const double floor = velocity_floor(f.grid, units);
    const double m = units.mass, hbar = units.hbar;

    LpwReport r{f.grid, f.time, std::vector<double>(n, kNan), std::vector<double>(n, kNan),
                std::vector<double>(n, kNan), std::vector<double>(n, kNan), std::vector<double>(n, kNan),
                vel.valid, 0.0, 0.0, thresholds};

    std::vector<std::uint8_t> moving(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        if (vel.valid[j] && std::abs(vel.values[j]) > floor) moving[j] = 1;
    std::vector<double> lambda(n, kNan);
    for (std::size_t j = 0; j < n; ++j)
        if (moving[j]) lambda[j] = hbar / (m * std::abs(vel.values[j]));
    const auto dlambda = masked_derivative(lambda, moving, f.grid.dx());

    double passed = 0.0, weight_total = 0.0, weight_passed = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!r.valid[j]) continue;
        ++count;
        const double rho = std::norm(f.values[j]);
        weight_total += rho;
        const double dlogR = (grad.values[j] / f.values[j]).real();
        const double U = -hbar * hbar / (2.0 * m) * curv.values[j];
        if (moving[j]) {
            const double lam = lambda[j];
            r.lambda_local[j] = lam;
            r.cond_amp_1[j] = std::abs(dlogR) * lam;
            r.cond_amp_2[j] = 0.5 * std::abs(curv.values[j]) * lam * lam;
            r.cond_lambda[j] = std::isnan(dlambda[j]) ? kInf : std::abs(dlambda[j]);
            r.qp_ratio[j] = std::abs(U) / (0.5 * m * vel.values[j] * vel.values[j]);
        } else {
            r.lambda_local[j] = kInf;
            r.cond_amp_1[j] = r.cond_amp_2[j] = r.cond_lambda[j] = r.qp_ratio[j] = kInf;
        }
        const bool ok = r.cond_amp_1[j] < thresholds.amp_1 && r.cond_amp_2[j] < thresholds.amp_2 &&
                        r.cond_lambda[j] < thresholds.lambda && r.qp_ratio[j] < thresholds.qp;
        if (ok) {
            passed += 1.0;
            weight_passed += rho;
        }
    }
    r.pass_fraction = count ? passed / static_cast<double>(count) : 0.0;
    r.weighted_pass_fraction = weight_total > 0.0 ? weight_passed / weight_total : 0.0;
    return r;
}

Trajectory macroscopic_rescale(const Trajectory& traj, double L, double lambda, const Units& units) {
    require(std::isfinite(L) && L > 0.0, "macroscopic_rescale: L must be positive and finite");
    require(std::isfinite(lambda) && lambda > 0.0, "macroscopic_rescale: lambda must be positive and finite");
    const double T = units.mass * L * lambda / units.hbar;
    Trajectory out = traj;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.times[i] = traj.times[i] / T;
        out.positions[i] = traj.positions[i] / L;
        out.velocities[i] = traj.velocities[i] * T / L;
    }
    for (auto& lam : out.local_wavelength) lam /= L;
    if (std::isfinite(out.exit_time)) out.exit_time /= T;
    return out;
}

double classicality_deviation(const Trajectory& bohm, const Trajectory& classical) {
    require(bohm.size() <= classical.size(), "classicality_deviation: lattices differ");
    double d = 0.0;
    for (std::size_t i = 0; i < bohm.size(); ++i) {
        const double t = bohm.times[i];
        require(std::abs(t - classical.times[i]) <= 1e-9 * std::max(1.0, std::abs(t)),
                "classicality_deviation: lattices differ");
        if (t > 1.0 + 1e-12) break;
        d = std::max(d, std::abs(bohm.positions[i] - classical.positions[i]));
    }
    return d;
}

std::vector<double> ConvergenceTable::eps_values() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.eps);
    return v;
}
std::vector<double> ConvergenceTable::deviation() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.deviation);
    return v;
}
std::vector<double> ConvergenceTable::l2_error() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.l2_error);
    return v;
}
std::vector<double> ConvergenceTable::qp_ratio_max() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.qp_ratio_max);
    return v;
}

ConvergenceTable epsilon_sweep(const SweepSpec& spec) {
    require(!spec.eps_list.empty(), "epsilon_sweep: eps_list is empty");
    for (std::size_t i = 0; i < spec.eps_list.size(); ++i) {
        require(spec.eps_list[i] > 0.0 && spec.eps_list[i] <= 1.0, "epsilon_sweep: eps must lie in (0, 1]");
        if (i > 0) require(spec.eps_list[i] < spec.eps_list[i - 1], "epsilon_sweep: eps_list must be strictly decreasing");
    }
    require(spec.transient_skip >= 0.0 && spec.transient_skip < 1.0, "epsilon_sweep: transient_skip must lie in [0, 1)");
    const Units& u = spec.units;

    // The unscaled profile fixes lambda, the group velocity and psi0_hat.
    const double width = std::max(spec.initial.sigma0, 1.0);
    const Grid1D micro = make_grid(spec.initial.center - 40.0 * width, spec.initial.center + 40.0 * width, 4096);
    const ComplexField psi0 = sample(spec.initial, micro);
    const MomentumAmplitude psi0_hat(psi0);

    ConvergenceTable table;
    table.lambda = debroglie_wavelength(psi0, u);
    // Group velocity: mean of the limiting velocity density, i.e. <p>/m.
    {
        const ComplexField grad = spectral_gradient(psi0);
        double p = 0.0;
        for (std::size_t j = 0; j < psi0.size(); ++j) p += (std::conj(psi0.values[j]) * grad.values[j]).imag();
        table.v0 = u.hbar * p * micro.dx() / (u.mass * norm_squared(psi0));
    }

    // Scales are fixed once, at the start point of the first row.
    table.X0 = rescale_initial_position(spec.initial.center, spec.eps_list.front());
    const double L = scale_of_variation(spec.potential, table.X0);
    table.L = std::isfinite(L) && L > 0.0 ? L : spec.reference_length;
    table.T = u.mass * table.L * table.lambda / u.hbar;
    const auto store_every = static_cast<std::size_t>(std::llround(spec.dt_store / spec.dt));

    for (double eps : spec.eps_list) {
        const ComplexField f0 = prepare_rescaled_initial(spec.initial, spec.grid, eps);
        const double X0 = rescale_initial_position(spec.initial.center, eps);
        const EvolutionHistory h = evolve_rescaled(f0, spec.potential, eps, spec.t_final, spec.dt, spec.dt_store, u);
        const GuidanceField guide(h, spec.rho_floor);
        const auto last = static_cast<std::size_t>(std::floor(std::min(spec.t_final, table.T) / spec.dt_store + 1e-9));
        Trajectory bohm = integrate_trajectory(guide, X0, {4, guide.time(last)});
        annotate(bohm, guide);
        const Trajectory classical = hamilton_flow(spec.potential, X0, table.v0, guide.time(last), spec.dt, u, store_every);

        ConvergenceRow row{};
        row.eps = eps;
        row.truncated = bohm.truncated;
        row.boundary_leak = h.boundary_leak();
        row.max_norm_drift = h.max_norm_drift();
        const auto bm = macroscopic_rescale(bohm, table.L, table.lambda, u);
        const auto cm = macroscopic_rescale(classical, table.L, table.lambda, u);
        row.deviation = classicality_deviation(bm, cm);
        row.qp_ratio_max = 0.0;
        for (std::size_t i = 0; i < bm.size(); ++i) {
            if (bm.times[i] < spec.transient_skip - 1e-12) continue;
            const double kin = 0.5 * u.mass * bohm.velocities[i] * bohm.velocities[i];
            const double q = std::abs(bohm.quantum_potential[i]) / kin;
            row.qp_ratio_max = std::max(row.qp_ratio_max, std::isnan(q) ? kInf : q);
        }
        row.l2_error = kNan;
        if (spec.semiclassical) {
            try {
                const ComplexField sc = semiclassical_field(spec.potential, psi0_hat, spec.grid, h.t_final(), eps, u);
                row.l2_error = relative_l2_error(sc, h.snapshot(h.size() - 1));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::multivalued && e.kind() != ErrorKind::no_path) throw;
                row.caustic = true;
            }
        }
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace pilotlim
