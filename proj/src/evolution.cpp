#include "pilotlim/evolution.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>

#include "pilotlim/bqcl.hpp"
#include "pilotlim/error.hpp"
#include "pilotlim/io.hpp"
#include "pilotlim/spectral.hpp"

namespace pilotlim {
namespace detail {

class SnapshotStore {
public:
    SnapshotStore(std::optional<std::filesystem::path> dir, Units units) : units_(units) {
        if (dir) {
            dir_ = *dir;
            std::filesystem::create_directories(dir_);
        } else {
            static std::atomic<unsigned> counter{0};
            const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
            dir_ = std::filesystem::temp_directory_path() /
                   fmt::format("pilotlim-spill-{}-{}", stamp, counter++);
            std::filesystem::create_directories(dir_);
            owns_dir_ = true;
        }
    }

    explicit SnapshotStore(Units units) : units_(units), in_memory_(true) {}

    ~SnapshotStore() {
        if (owns_dir_) {
            std::error_code ec;
            std::filesystem::remove_all(dir_, ec);
        }
    }

    SnapshotStore(const SnapshotStore&) = delete;
    SnapshotStore& operator=(const SnapshotStore&) = delete;

    void push(const ComplexField& f) {
        if (in_memory_) {
            fields_.push_back(f);
            return;
        }
        auto path = dir_ / fmt::format("snapshot_{:06d}.bqcl", files_.size());
        write_bqcl(path, f, units_);
        files_.push_back(std::move(path));
    }

    ComplexField get(std::size_t i) const {
        if (in_memory_) return fields_.at(i);
        return read_bqcl(files_.at(i)).field;
    }

    bool in_memory() const noexcept { return in_memory_; }

private:
    Units units_;
    bool in_memory_ = false;
    bool owns_dir_ = false;
    std::filesystem::path dir_;
    std::vector<ComplexField> fields_;
    std::vector<std::filesystem::path> files_;
};

/// Strang splitting with the two half kicks between consecutive steps fused.
class SplitStepper {
public:
    SplitStepper(const Grid1D& g, const Potential& p, double dt, const Units& u) {
        const std::size_t n = g.size();
        half_kick_.resize(n);
        full_kick_.resize(n);
        drift_.resize(n);
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = p.value(g.x(j));
            half_kick_[j] = std::polar(1.0, -v * dt / (2.0 * u.hbar));
            full_kick_[j] = std::polar(1.0, -v * dt / u.hbar);
            const double k = g.k(j);
            drift_[j] = std::polar(inv_n, -u.hbar * k * k * dt / (2.0 * u.mass));
        }
    }

    void advance(std::vector<Complex>& psi, std::size_t steps) const {
        if (steps == 0) return;
        multiply(psi, half_kick_);
        for (std::size_t s = 0; s < steps; ++s) {
            dft_forward(psi);
            multiply(psi, drift_);
            dft_backward(psi);
            multiply(psi, s + 1 == steps ? half_kick_ : full_kick_);
        }
    }

private:
    static void multiply(std::vector<Complex>& a, const std::vector<Complex>& b) {
        for (std::size_t j = 0; j < a.size(); ++j) a[j] *= b[j];
    }

    std::vector<Complex> half_kick_, full_kick_, drift_;
};

struct HistoryBuilder {
    static EvolutionHistory build(const ComplexField& f0, const Potential& p, double t_final,
                                  double dt, double dt_store, Units units, double eps,
                                  const EvolveOptions& options) {
        require(std::isfinite(dt) && dt > 0.0, "evolve: dt must be positive");
        require(std::isfinite(dt_store) && dt_store > 0.0, "evolve: dt_store must be positive");
        require(std::isfinite(t_final) && t_final >= 0.0, "evolve: t_final must be non-negative");
        require(units.hbar > 0.0 && units.mass > 0.0, "evolve: hbar and mass must be positive");
        for (std::size_t j = 0; j < f0.size(); ++j) {
            require(std::isfinite(p.value(f0.grid.x(j))),
                    "evolve: potential is singular on the grid (x = " + format_number(f0.grid.x(j)) + ")");
        }

        const double ratio = dt_store / dt;
        const auto substeps = static_cast<std::size_t>(std::llround(ratio));
        require(substeps >= 1 && std::abs(ratio - static_cast<double>(substeps)) <= 1e-9 * ratio,
                "evolve: dt_store must be an integer multiple of dt");
        const double intervals = t_final / dt_store;
        const auto n_intervals = static_cast<std::size_t>(std::llround(intervals));
        require(std::abs(intervals - static_cast<double>(n_intervals)) <= 1e-9 * std::max(1.0, intervals),
                "evolve: t_final must be an integer multiple of dt_store");

        EvolutionHistory h;
        h.grid_ = f0.grid;
        h.potential_ = p;
        h.units_ = units;
        h.eps_ = eps;
        h.dt_store_ = dt_store;
        h.dt_ = dt_store / static_cast<double>(substeps);
        h.count_ = n_intervals + 1;
        h.initial_norm_ = norm(f0);

        std::shared_ptr<SnapshotStore> store;
        if (h.count_ > options.snapshot_cap) {
            store = std::make_shared<SnapshotStore>(options.spill_dir, units);
        } else {
            store = std::make_shared<SnapshotStore>(units);
        }

        const SplitStepper stepper(f0.grid, p, h.dt_, units);
        ComplexField psi(f0.grid, f0.values, 0.0);
        auto record = [&](std::size_t i) {
            psi.time = h.time(i);
            const double drift = std::abs(norm(psi) - h.initial_norm_) / h.initial_norm_;
            h.max_norm_drift_ = std::max(h.max_norm_drift_, drift);
            if (boundary_leak(psi, options.leak_threshold, options.leak_margin)) h.leak_ = true;
            store->push(psi);
        };
        record(0);
        for (std::size_t i = 1; i < h.count_; ++i) {
            stepper.advance(psi.values, substeps);
            record(i);
        }
        h.store_ = std::move(store);
        return h;
    }
};

}  // namespace detail

bool EvolutionHistory::spilled() const noexcept { return store_ && !store_->in_memory(); }

ComplexField EvolutionHistory::snapshot(std::size_t i) const {
    require(i < count_, "history: snapshot index out of range");
    return store_->get(i);
}

std::size_t EvolutionHistory::index_of(double t) const {
    const double r = t / dt_store_;
    const auto i = std::llround(r);
    if (i < 0 || static_cast<std::size_t>(i) >= count_ || std::abs(r - static_cast<double>(i)) > 1e-6) {
        fail(ErrorKind::invalid_argument,
             "history: time " + format_number(t) + " is not on the snapshot lattice");
    }
    return static_cast<std::size_t>(i);
}

std::vector<std::filesystem::path> EvolutionHistory::write(const std::filesystem::path& dir,
                                                           std::size_t stride) const {
    require(stride >= 1, "history: stride must be >= 1");
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    Json snaps = Json::array();
    for (std::size_t i = 0; i < count_; i += stride) {
        const auto name = fmt::format("snapshot_{:06d}.bqcl", i);
        write_bqcl(dir / name, snapshot(i), units_);
        written.push_back(dir / name);
        snaps.push_back(Json{{"index", i}, {"time", time(i)}, {"file", name}});
    }
    Json manifest{{"format", "pilotlim-history"},
                  {"version", 1},
                  {"eps", eps_},
                  {"hbar_eff", units_.hbar},
                  {"mass", units_.mass},
                  {"dt", dt_},
                  {"dt_store", dt_store_},
                  {"grid", {{"x_min", grid_.x_min()}, {"x_max", grid_.x_max()}, {"n", grid_.size()}}},
                  {"potential", to_json(potential_)},
                  {"boundary_leak", leak_},
                  {"max_norm_drift", max_norm_drift_},
                  {"snapshots", snaps}};
    write_json(dir / "manifest.json", manifest);
    written.push_back(dir / "manifest.json");
    return written;
}

ComplexField step(const ComplexField& f, const Potential& p, double dt, const Units& units) {
    require(std::isfinite(dt) && dt > 0.0, "step: dt must be positive");
    const detail::SplitStepper stepper(f.grid, p, dt, units);
    ComplexField out(f.grid, f.values, f.time + dt);
    stepper.advance(out.values, 1);
    return out;
}

EvolutionHistory evolve(const ComplexField& f0, const Potential& p, double t_final, double dt,
                        double dt_store, const Units& units, const EvolveOptions& options) {
    return detail::HistoryBuilder::build(f0, p, t_final, dt, dt_store, units, 1.0, options);
}

EvolutionHistory evolve_rescaled(const ComplexField& f0_macroscopic, const Potential& p, double eps,
                                 double t_final, double dt, double dt_store, const Units& units,
                                 const EvolveOptions& options) {
    require(eps > 0.0 && eps <= 1.0, "evolve_rescaled: eps must lie in (0, 1]");
    Units eff = units;
    eff.hbar = units.hbar * eps;
    return detail::HistoryBuilder::build(f0_macroscopic, p, t_final, dt, dt_store, eff, eps, options);
}

bool boundary_leak(const ComplexField& f, double threshold, double margin) {
    const auto n = f.size();
    const auto edge = static_cast<std::size_t>(std::ceil(margin * static_cast<double>(n)));
    for (std::size_t j = 0; j < std::min(edge, n); ++j) {
        if (std::abs(f.values[j]) > threshold || std::abs(f.values[n - 1 - j]) > threshold) return true;
    }
    return false;
}

double kinetic_energy(const ComplexField& f, const Units& units) {
    const auto hat = fourier_transform(f);
    double num = 0.0;
    for (std::size_t j = 0; j < hat.size(); ++j) {
        const double k = hat.grid.k(j);
        num += k * k * std::norm(hat.values[j]);
    }
    num *= hat.grid.dk();
    return units.hbar * units.hbar * num / (2.0 * units.mass * norm_squared(f));
}

double energy_expectation(const ComplexField& f, const Potential& p, const Units& units) {
    double pot = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) pot += p.value(f.grid.x(j)) * std::norm(f.values[j]);
    pot *= f.grid.dx() / norm_squared(f);
    return kinetic_energy(f, units) + pot;
}

}  // namespace pilotlim
