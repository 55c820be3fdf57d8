#include "pilotlim/bohm.hpp"

#include <array>
#include <cmath>

#include "pilotlim/error.hpp"
#include "pilotlim/parallel.hpp"
#include "pilotlim/statistics.hpp"

namespace pilotlim {

namespace {

std::vector<double> masked_values(const MaskedField& m) {
    std::vector<double> out(m.values.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < out.size(); ++j)
        if (m.valid[j]) out[j] = m.values[j];
    return out;
}

std::optional<double> cubic_at(const Grid1D& grid, const std::vector<double>& f, double x) {
    const double s = (x - grid.x_min()) / grid.dx();
    if (!(s >= 1.0)) return std::nullopt;
    const auto j = static_cast<std::size_t>(s);
    if (j + 2 >= f.size()) return std::nullopt;
    const double u = s - static_cast<double>(j);
    const double a = f[j - 1], b = f[j], c = f[j + 1], d = f[j + 2];
    if (std::isnan(a) || std::isnan(b) || std::isnan(c) || std::isnan(d)) return std::nullopt;
    // Lagrange weights on nodes -1, 0, 1, 2.
    const double wa = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double wb = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    const double wc = -(u + 1.0) * u * (u - 2.0) / 2.0;
    const double wd = (u + 1.0) * u * (u - 1.0) / 6.0;
    return wa * a + wb * b + wc * c + wd * d;
}

}  // namespace

GuidanceField::GuidanceField(const EvolutionHistory& history, double rho_floor)
    : grid_(history.grid()), units_(history.units()), dt_store_(history.dt_store()) {
    const std::size_t n = history.size();
    velocity_.resize(n);
    potential_.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const ComplexField f = history.snapshot(i);
        velocity_[i] = masked_values(velocity_field(f, units_, rho_floor));
        potential_[i] = masked_values(quantum_potential(f, units_, rho_floor));
    });
}

std::optional<double> GuidanceField::velocity_at(std::size_t i, double x) const {
    return cubic_at(grid_, velocity_.at(i), x);
}

std::optional<double> GuidanceField::quantum_potential_at(std::size_t i, double x) const {
    return cubic_at(grid_, potential_.at(i), x);
}

std::optional<double> GuidanceField::velocity(double x, double t) const {
    const double s = t / dt_store_;
    const double last = static_cast<double>(size() - 1);
    if (s < -1e-9 || s > last + 1e-9) return std::nullopt;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, last));
    if (i + 1 >= size()) {
        if (size() == 1) return velocity_at(0, x);
        i = size() - 2;
    }
    const double w = std::clamp(s - static_cast<double>(i), 0.0, 1.0);
    const auto v0 = velocity_at(i, x);
    if (!v0) return std::nullopt;
    if (w == 0.0) return v0;
    const auto v1 = velocity_at(i + 1, x);
    if (!v1) return std::nullopt;
    return (1.0 - w) * *v0 + w * *v1;
}

Trajectory integrate_trajectory(const GuidanceField& guide, double x0, const BohmOptions& options) {
    require(options.substeps >= 1, "integrate_trajectory: substeps must be >= 1");
    require(std::isfinite(x0), "integrate_trajectory: x0 must be finite");
    std::size_t last = guide.size() - 1;
    if (options.t_end) {
        require(*options.t_end >= 0.0, "integrate_trajectory: t_end must be >= 0");
        last = std::min(last, static_cast<std::size_t>(std::floor(*options.t_end / guide.dt_store() + 1e-9)));
    }
    const auto v_start = guide.velocity_at(0, x0);
    if (!v_start) fail(ErrorKind::invalid_argument, "integrate_trajectory: x0 lies in a masked region at t = 0");

    Trajectory tr;
    tr.label = TrajectoryLabel::bohmian;
    tr.times.reserve(last + 1);
    tr.positions.reserve(last + 1);
    tr.velocities.reserve(last + 1);
    tr.times.push_back(0.0);
    tr.positions.push_back(x0);
    tr.velocities.push_back(*v_start);

    const double h = guide.dt_store() / options.substeps;
    double x = x0;
    for (std::size_t i = 0; i < last; ++i) {
        bool ok = true;
        for (int s = 0; s < options.substeps && ok; ++s) {
            // Substage times are offsets inside [t_i, t_{i+1}] so the snapshot
            // bracket never changes within a step.
            const double t = guide.time(i) + s * h;
            const auto k1 = guide.velocity(x, t);
            const auto k2 = k1 ? guide.velocity(x + 0.5 * h * *k1, t + 0.5 * h) : std::nullopt;
            const auto k3 = k2 ? guide.velocity(x + 0.5 * h * *k2, t + 0.5 * h) : std::nullopt;
            const auto k4 = k3 ? guide.velocity(x + h * *k3, std::min(t + h, guide.time(i + 1))) : std::nullopt;
            if (!k4) {
                ok = false;
                break;
            }
            x += h / 6.0 * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
        }
        const auto v = ok ? guide.velocity_at(i + 1, x) : std::nullopt;
        if (!v) {
            tr.truncated = true;
            tr.exit_time = guide.time(i);
            break;
        }
        tr.times.push_back(guide.time(i + 1));
        tr.positions.push_back(x);
        tr.velocities.push_back(*v);
    }
    return tr;
}

Trajectory integrate_trajectory(const EvolutionHistory& h, double x0, const BohmOptions& options) {
    return integrate_trajectory(GuidanceField(h), x0, options);
}

std::size_t Ensemble::truncated_count() const {
    std::size_t n = 0;
    for (const auto& t : trajectories) n += t.truncated ? 1 : 0;
    return n;
}

std::vector<double> Ensemble::positions_at(std::size_t i) const {
    std::vector<double> out;
    out.reserve(trajectories.size());
    for (const auto& t : trajectories)
        if (!t.truncated && i < t.size()) out.push_back(t.positions[i]);
    return out;
}

std::vector<double> Ensemble::velocities_at(std::size_t i) const {
    std::vector<double> out;
    out.reserve(trajectories.size());
    for (const auto& t : trajectories)
        if (!t.truncated && i < t.size()) out.push_back(t.velocities[i]);
    return out;
}

std::vector<double> sample_initial_positions(const ComplexField& f0, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample_initial_positions: n must be >= 1");
    const double nrm = norm_squared(f0);
    require(std::abs(nrm - 1.0) < 1e-6, "sample_initial_positions: field must be normalized");
    const auto density = PiecewiseLinearDensity::from_field(f0);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = density.quantile(uniform_variate(seed, i));
    return out;
}

Ensemble integrate_ensemble(const GuidanceField& guide, const ComplexField& f0, std::size_t n, std::uint64_t seed,
                            const BohmOptions& options) {
    const auto x0 = sample_initial_positions(f0, n, seed);
    Ensemble ens;
    ens.seed = seed;
    ens.trajectories.resize(n);
    parallel_for(n, [&](std::size_t i) {
        Trajectory& slot = ens.trajectories[i];
        if (guide.velocity_at(0, x0[i])) {
            slot = integrate_trajectory(guide, x0[i], options);
        } else {
            // Drawn inside the masked tail; kept as a zero-length truncated path.
            slot.times = {0.0};
            slot.positions = {x0[i]};
            slot.velocities = {0.0};
            slot.truncated = true;
            slot.exit_time = 0.0;
        }
    });
    return ens;
}

double equivariance_distance(const Ensemble& ens, const EvolutionHistory& h, double t) {
    const std::size_t i = h.index_of(t);
    const auto positions = ens.positions_at(i);
    require(!positions.empty(), "equivariance_distance: no trajectory reaches t");
    const auto density = PiecewiseLinearDensity::from_field(h.snapshot(i));
    return ks_distance(positions, [&](double x) { return density.cdf(x); });
}

void annotate(Trajectory& traj, const GuidanceField& guide) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double floor = 1e-9 * guide.units().hbar / (guide.units().mass * guide.grid().dx());
    traj.quantum_potential.assign(traj.size(), nan);
    traj.local_wavelength.assign(traj.size(), nan);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto i = static_cast<std::size_t>(std::llround(traj.times[k] / guide.dt_store()));
        if (i >= guide.size()) break;
        if (auto u = guide.quantum_potential_at(i, traj.positions[k])) traj.quantum_potential[k] = *u;
        if (auto v = guide.velocity_at(i, traj.positions[k]); v && std::abs(*v) > floor)
            traj.local_wavelength[k] = guide.units().hbar / (guide.units().mass * std::abs(*v));
    }
}

}  // namespace pilotlim
