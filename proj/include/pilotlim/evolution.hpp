#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "pilotlim/grid.hpp"
#include "pilotlim/potential.hpp"

namespace pilotlim {

struct EvolveOptions {
    /// Histories with more snapshots than this are spilled to BQCL files.
    std::size_t snapshot_cap = 4096;
    /// Directory for spilled snapshots; a temporary directory when unset.
    std::optional<std::filesystem::path> spill_dir;
    double leak_threshold = 1e-8;
    double leak_margin = 0.05;
};

namespace detail {
class SnapshotStore;
struct HistoryBuilder;
}  // namespace detail

/// Time-ordered snapshots psi(x, i * dt_store), immutable once built.
class EvolutionHistory {
public:
    std::size_t size() const noexcept { return count_; }
    double time(std::size_t i) const noexcept { return static_cast<double>(i) * dt_store_; }
    double t_final() const noexcept { return time(count_ - 1); }
    double dt_store() const noexcept { return dt_store_; }
    double dt() const noexcept { return dt_; }
    const Grid1D& grid() const noexcept { return grid_; }
    const Potential& potential() const noexcept { return potential_; }
    double hbar_eff() const noexcept { return units_.hbar; }
    double mass() const noexcept { return units_.mass; }
    /// Effective constants (hbar_eff, m) for the stored dynamics.
    Units units() const noexcept { return units_; }
    double eps() const noexcept { return eps_; }
    double initial_norm() const noexcept { return initial_norm_; }
    double max_norm_drift() const noexcept { return max_norm_drift_; }
    bool boundary_leak() const noexcept { return leak_; }
    bool spilled() const noexcept;

    ComplexField snapshot(std::size_t i) const;
    /// Index of the snapshot at time t; throws if t is off the lattice.
    std::size_t index_of(double t) const;

    /// JSON manifest (times, snapshot files, eps, potential) plus BQCL files
    /// for every stride-th snapshot, written into dir. Returns written paths.
    std::vector<std::filesystem::path> write(const std::filesystem::path& dir,
                                             std::size_t stride = 1) const;

private:
    friend struct detail::HistoryBuilder;
    EvolutionHistory() = default;

    Grid1D grid_ = make_grid(0.0, 1.0, 8);
    Potential potential_;
    Units units_;
    double eps_ = 1.0;
    double dt_store_ = 0.0;
    double dt_ = 0.0;
    std::size_t count_ = 0;
    double initial_norm_ = 0.0;
    double max_norm_drift_ = 0.0;
    bool leak_ = false;
    std::shared_ptr<const detail::SnapshotStore> store_;
};

/// One Strang step: half potential kick, exact kinetic drift in k-space,
/// half potential kick.
ComplexField step(const ComplexField& f, const Potential& p, double dt, const Units& units);

EvolutionHistory evolve(const ComplexField& f0, const Potential& p, double t_final, double dt,
                        double dt_store, const Units& units, const EvolveOptions& options = {});

/// Same stepper with hbar_eff = hbar * eps; f0 must already live on the
/// macroscopic scale (see prepare_rescaled_initial).
EvolutionHistory evolve_rescaled(const ComplexField& f0_macroscopic, const Potential& p, double eps,
                                 double t_final, double dt, double dt_store, const Units& units,
                                 const EvolveOptions& options = {});

/// True if |psi| exceeds threshold anywhere within margin * length of either edge.
bool boundary_leak(const ComplexField& f, double threshold = 1e-8, double margin = 0.05);

/// <psi|H|psi> / <psi|psi> with spectral kinetic energy.
double energy_expectation(const ComplexField& f, const Potential& p, const Units& units);

/// <p^2> / (2 m <psi|psi>).
double kinetic_energy(const ComplexField& f, const Units& units);

}  // namespace pilotlim
