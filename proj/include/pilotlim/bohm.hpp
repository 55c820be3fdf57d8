#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pilotlim/evolution.hpp"
#include "pilotlim/hydrodynamic.hpp"
#include "pilotlim/trajectory.hpp"

namespace pilotlim {

/// Velocity fields (and quantum potentials) of every snapshot in a history,
/// precomputed once so that trajectory integration is read-only.
class GuidanceField {
public:
    explicit GuidanceField(const EvolutionHistory& history, double rho_floor = kDefaultRhoFloor);

    std::size_t size() const noexcept { return velocity_.size(); }
    double time(std::size_t i) const noexcept { return static_cast<double>(i) * dt_store_; }
    double t_final() const noexcept { return time(size() - 1); }
    double dt_store() const noexcept { return dt_store_; }
    const Grid1D& grid() const noexcept { return grid_; }
    const Units& units() const noexcept { return units_; }

    /// Cubic (4-point Lagrange) interpolation of snapshot i at x; empty when
    /// any stencil point is masked or off the grid.
    std::optional<double> velocity_at(std::size_t i, double x) const;
    std::optional<double> quantum_potential_at(std::size_t i, double x) const;

    /// Linear in time between the two bracketing snapshots.
    std::optional<double> velocity(double x, double t) const;

private:
    Grid1D grid_;
    Units units_;
    double dt_store_;
    std::vector<std::vector<double>> velocity_;   // NaN where masked
    std::vector<std::vector<double>> potential_;  // NaN where masked
};

struct BohmOptions {
    int substeps = 4;  ///< RK4 steps per dt_store
    /// Stop at this time (rounded down to the snapshot lattice); the full
    /// history when unset.
    std::optional<double> t_end;
};

/// RK4 through the guidance field; positions are recorded at every snapshot
/// time. Entering a masked region truncates the path at the last recorded
/// time and sets exit_time.
Trajectory integrate_trajectory(const GuidanceField& guide, double x0, const BohmOptions& options = {});
Trajectory integrate_trajectory(const EvolutionHistory& h, double x0, const BohmOptions& options = {});

struct Ensemble {
    std::vector<Trajectory> trajectories;
    std::uint64_t seed = 0;

    std::size_t truncated_count() const;
    /// Positions of the non-truncated members at snapshot index i.
    std::vector<double> positions_at(std::size_t i) const;
    std::vector<double> velocities_at(std::size_t i) const;
};

/// Inverse-CDF draws from the piecewise-linear |f0|^2; position i depends
/// only on (seed, i). f0 must be normalized.
std::vector<double> sample_initial_positions(const ComplexField& f0, std::size_t n, std::uint64_t seed);

/// Samples from the first snapshot and integrates every member (concurrently).
Ensemble integrate_ensemble(const GuidanceField& guide, const ComplexField& f0, std::size_t n, std::uint64_t seed,
                            const BohmOptions& options = {});

/// KS distance between the ensemble positions at time t and |psi(., t)|^2.
double equivariance_distance(const Ensemble& ens, const EvolutionHistory& h, double t);

/// Fills quantum_potential and local_wavelength along the trajectory.
void annotate(Trajectory& traj, const GuidanceField& guide);

}  // namespace pilotlim
