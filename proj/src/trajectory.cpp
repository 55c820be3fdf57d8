#include "pilotlim/trajectory.hpp"

#include <cmath>

#include "pilotlim/error.hpp"
#include "pilotlim/io.hpp"

namespace pilotlim {

std::string_view to_string(TrajectoryLabel label) {
    return label == TrajectoryLabel::bohmian ? "bohmian" : "classical";
}

void check_trajectory(const Trajectory& traj) {
    const std::size_t n = traj.times.size();
    require(n >= 1, "trajectory: empty");
    require(traj.positions.size() == n && traj.velocities.size() == n, "trajectory: arrays differ in length");
    require(traj.quantum_potential.empty() || traj.quantum_potential.size() == n,
            "trajectory: quantum-potential annotation misaligned");
    require(traj.local_wavelength.empty() || traj.local_wavelength.size() == n,
            "trajectory: wavelength annotation misaligned");
    for (std::size_t i = 0; i < n; ++i) {
        require(std::isfinite(traj.times[i]) && std::isfinite(traj.positions[i]) &&
                    std::isfinite(traj.velocities[i]),
                "trajectory: non-finite sample");
        if (i > 0) require(traj.times[i] > traj.times[i - 1], "trajectory: times must increase");
    }
}

void write_trajectories_csv(const std::filesystem::path& path, std::span<const Trajectory> trajectories) {
    CsvWriter csv(path, {"trajectory", "t", "x", "v", "U_at_x", "lambda_local_at_x"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
        const auto& tr = trajectories[k];
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const double u = tr.quantum_potential.empty() ? nan : tr.quantum_potential[i];
            const double lam = tr.local_wavelength.empty() ? nan : tr.local_wavelength[i];
            csv.row({static_cast<double>(k), tr.times[i], tr.positions[i], tr.velocities[i], u, lam});
        }
    }
    csv.close();
}

}  // namespace pilotlim
