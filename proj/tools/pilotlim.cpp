// pilotlim: scenario-driven runs of the quantum/classical correspondence pipelines.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pilotlim/error.hpp"
#include "pilotlim/io.hpp"
#include "pilotlim/pipelines.hpp"
#include "pilotlim/scenario.hpp"

namespace fs = std::filesystem;
using namespace pilotlim;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

Json violations_json(const std::vector<Violation>& v) {
    Json arr = Json::array();
    for (const auto& e : v) arr.push_back(Json{{"path", e.path}, {"message", e.message}});
    return arr;
}

int report_error(std::string_view kind, const std::string& message, const Json& violations = Json()) {
    Json err{{"kind", kind}, {"message", message}};
    if (!violations.is_null()) err["violations"] = violations;
    std::cerr << Json{{"error", err}}.dump(2) << '\n';
    return kind == "validation" ? kExitValidation : kExitRuntime;
}

using Pipeline = std::function<RunReport(const ScenarioConfig&, const fs::path&)>;

int run_pipeline(const Options& opt, const Pipeline& pipeline) {
    const auto start = std::chrono::steady_clock::now();
    try {
        ParseResult parsed = load_scenario(opt.config);
        if (!parsed.config) return report_error("validation", "invalid scenario " + opt.config, violations_json(parsed.violations));
        ScenarioConfig cfg = std::move(*parsed.config);
        if (opt.seed) cfg.ensemble.seed = *opt.seed;
        const fs::path out = opt.out.empty() ? cfg.output_dir : fs::path(opt.out);

        RunReport rep = pipeline(cfg, out);
        rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_json(out / "run_report.json", rep.to_json());
        if (!opt.quiet) {
            std::cout << fmt::format("{} [{}]: {} file(s) in {} ({:.2f} s)\n", rep.subcommand, rep.scenario,
                                     rep.outputs.size() + 1, out.string(), rep.wall_time_s);
            if (rep.boundary_leak && *rep.boundary_leak)
                std::cout << "warning: |psi| exceeded the boundary-leak threshold near the domain edges\n";
        }
        return 0;
    } catch (const Error& e) {
        return report_error(to_string(e.kind()), e.what());
    } catch (const std::exception& e) {
        return report_error("runtime", e.what());
    }
}

int run_validate(const Options& opt) {
    try {
        const ParseResult parsed = load_scenario(opt.config);
        std::vector<Violation> all = parsed.violations;
        if (parsed.config) {
            const auto sim = simulation_violations(*parsed.config);
            all.insert(all.end(), sim.begin(), sim.end());
        }
        const Json report{{"config", opt.config}, {"valid", all.empty()}, {"violations", violations_json(all)}};
        if (!opt.quiet) std::cout << report.dump(2) << '\n';
        return all.empty() ? 0 : kExitValidation;
    } catch (const Error& e) {
        return report_error(to_string(e.kind()), e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pilotlim: Bohmian, semiclassical and classical dynamics of one-dimensional wave packets"};
    app.require_subcommand(1);

    const std::map<std::string, std::pair<std::string, Pipeline>> pipelines{
        {"evolve", {"Split-operator evolution, moments, residuals and BQCL snapshots", run_evolve}},
        {"trajectories", {"Bohmian ensemble, equivariance and final-velocity statistics", run_trajectories}},
        {"semiclassical-compare", {"Stationary-phase wavefunction against the rescaled evolution", run_semiclassical_compare}},
        {"sweep-epsilon", {"Bohmian vs classical deviation over the eps list", run_sweep_epsilon}},
        {"potential-info", {"Scale of variation L and eps at the probe points", run_potential_info}},
        {"diagnose", {"Local plane-wave report and residuals at the probe times", run_diagnose}},
    };

    Options opt;
    std::string chosen;
    auto add_common = [&](CLI::App* sub, bool outputs) {
        sub->add_option("--config", opt.config, "Scenario JSON file")->required();
        if (outputs) {
            sub->add_option("--out", opt.out, "Output directory (overrides output_dir)");
            sub->add_option("--seed", opt.seed, "Ensemble seed (overrides ensemble.seed)");
        }
        sub->add_flag("--quiet", opt.quiet, "Suppress console output");
    };
    for (const auto& [name, entry] : pipelines) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        add_common(sub, true);
        sub->callback([&chosen, name = name] { chosen = name; });
    }
    CLI::App* validate = app.add_subcommand("validate", "Check a scenario file without running it");
    add_common(validate, false);
    validate->callback([&chosen] { chosen = "validate"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }
    if (chosen == "validate") return run_validate(opt);
    return run_pipeline(opt, pipelines.at(chosen).second);
}
