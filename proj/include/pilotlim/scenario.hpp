#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pilotlim/diagnostics.hpp"
#include "pilotlim/initial_state.hpp"
#include "pilotlim/io.hpp"
#include "pilotlim/potential.hpp"

namespace pilotlim {

inline constexpr int kScenarioSchema = 1;

struct TimeSpec {
    double t_final = 1.0;
    double dt = 1e-4;
    double dt_store = 1e-2;
};

struct EnsembleSpec {
    std::size_t n = 1000;
    std::uint64_t seed = 0;
};

struct SweepSettings {
    double transient_skip = 0.1;
    double reference_length = 1.0;
    bool semiclassical = true;
};

/// Launch point and initial-phase jet for the caustic report; the default is
/// the initial state's carrier at the origin (S0' = hbar k0, S0'' = 0).
struct CausticProbe {
    double x0 = 0.0;
    std::optional<double> slope;
    double curvature = 0.0;
    double t_max = 100.0;
};

/// A parsed and validated scenario file (schema 1).
struct ScenarioConfig {
    std::string name;
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t n = 1024;
    Potential potential;
    InitialState initial;
    double hbar = 1.0;
    double mass = 1.0;
    std::vector<double> eps_list{1.0};
    TimeSpec times;
    EnsembleSpec ensemble;
    LpwThresholds thresholds;
    double rho_floor = kDefaultRhoFloor;
    std::filesystem::path output_dir;
    /// Times at which residuals, LPW reports and ensemble statistics are taken.
    std::vector<double> probe_times;
    /// Explicit start points written as annotated single trajectories.
    std::vector<double> trajectory_starts;
    /// Positions reported by potential-info.
    std::vector<double> probe_points;
    /// Wavelength used by potential-info; the initial state's when unset.
    std::optional<double> lambda;
    SweepSettings sweep;
    CausticProbe caustic;
    std::size_t snapshot_stride = 0;  ///< 0 = no BQCL output

    Grid1D grid() const { return make_grid(x_min, x_max, n); }
    Units units() const { return {hbar, mass}; }
    SweepSpec sweep_spec() const;
};

struct Violation {
    std::string path;
    std::string message;

    std::string text() const { return path + ": " + message; }
};

struct ParseResult {
    std::optional<ScenarioConfig> config;  ///< set only when no violations
    std::vector<Violation> violations;
};

/// Checks every constraint and reports each violation with its field path.
ParseResult parse_scenario(const Json& j);

/// Reads and parses a file; unreadable or malformed JSON is an io error.
ParseResult load_scenario(const std::filesystem::path& path);

/// Throws a validation error listing all violations.
ScenarioConfig load_scenario_or_throw(const std::filesystem::path& path);

/// Violations that only matter when the scenario is simulated on its grid.
std::vector<Violation> simulation_violations(const ScenarioConfig& cfg);

Json to_json(const ScenarioConfig& cfg);

}  // namespace pilotlim
