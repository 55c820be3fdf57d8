#pragma once

#include <filesystem>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace pilotlim {

enum class TrajectoryLabel { bohmian, classical };

std::string_view to_string(TrajectoryLabel label);

/// A path sampled on a uniform time lattice.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> velocities;
    TrajectoryLabel label = TrajectoryLabel::bohmian;
    bool truncated = false;
    double exit_time = std::numeric_limits<double>::infinity();
    /// Optional annotations, either empty or aligned with times.
    std::vector<double> quantum_potential;
    std::vector<double> local_wavelength;

    std::size_t size() const noexcept { return times.size(); }
    double final_position() const { return positions.back(); }
    double final_velocity() const { return velocities.back(); }
};

/// Checks the Trajectory invariants (aligned arrays, increasing times, finite
/// samples); throws invalid_argument otherwise.
void check_trajectory(const Trajectory& traj);

/// Long-format CSV: trajectory, t, x, v, U_at_x, lambda_local_at_x.
void write_trajectories_csv(const std::filesystem::path& path, std::span<const Trajectory> trajectories);

}  // namespace pilotlim
