#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pilotlim/io.hpp"
#include "pilotlim/scenario.hpp"

namespace pilotlim {

/// Summary of one pipeline run. Only the CLI adds wall time, so everything
/// else a pipeline writes is a deterministic function of the scenario.
struct RunReport {
    std::string scenario;
    std::string subcommand;
    double wall_time_s = 0.0;
    std::optional<double> max_norm_drift;
    std::optional<bool> boundary_leak;
    std::optional<std::size_t> truncated_trajectories;
    std::optional<double> continuity_residual_max;
    std::optional<double> hj_residual_max;
    std::vector<std::string> outputs;  ///< relative to the output directory

    Json to_json() const;
};

RunReport run_evolve(const ScenarioConfig& cfg, const std::filesystem::path& out);
RunReport run_trajectories(const ScenarioConfig& cfg, const std::filesystem::path& out);
RunReport run_semiclassical_compare(const ScenarioConfig& cfg, const std::filesystem::path& out);
RunReport run_sweep_epsilon(const ScenarioConfig& cfg, const std::filesystem::path& out);
RunReport run_potential_info(const ScenarioConfig& cfg, const std::filesystem::path& out);
RunReport run_diagnose(const ScenarioConfig& cfg, const std::filesystem::path& out);

/// Potential report: L, V derivatives and eps at the probe points, plus the
/// family-specific notes (sinusoidal rough value, pure Coulomb, Yukawa range).
Json potential_info(const ScenarioConfig& cfg);

/// Initial field for the scenario's first eps (plain sampling at eps = 1).
ComplexField scenario_initial_field(const ScenarioConfig& cfg);

/// Convergence table as JSON (with fitted slopes and monotonicity flags).
Json to_json(const ConvergenceTable& table);

}  // namespace pilotlim
