#include "pilotlim/pipelines.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pilotlim/bohm.hpp"
#include "pilotlim/classical.hpp"
#include "pilotlim/diagnostics.hpp"
#include "pilotlim/error.hpp"
#include "pilotlim/evolution.hpp"
#include "pilotlim/hydrodynamic.hpp"
#include "pilotlim/semiclassical.hpp"
#include "pilotlim/statistics.hpp"

namespace pilotlim {

namespace fs = std::filesystem;

namespace {

void require_simulable(const ScenarioConfig& cfg) {
    const auto v = simulation_violations(cfg);
    if (v.empty()) return;
    std::string msg = "scenario cannot be simulated:";
    for (const auto& e : v) msg += "\n  " + e.text();
    fail(ErrorKind::validation, msg);
}

EvolutionHistory run_history(const ScenarioConfig& cfg) {
    require_simulable(cfg);
    const double eps = cfg.eps_list.front();
    const ComplexField f0 = scenario_initial_field(cfg);
    if (eps == 1.0) return evolve(f0, cfg.potential, cfg.times.t_final, cfg.times.dt, cfg.times.dt_store, cfg.units());
    return evolve_rescaled(f0, cfg.potential, eps, cfg.times.t_final, cfg.times.dt, cfg.times.dt_store, cfg.units());
}

struct Residuals {
    Json rows = Json::array();
    std::optional<double> continuity_max;
    std::optional<double> hj_max;
};

Residuals probe_residuals(const EvolutionHistory& h, const std::vector<double>& times, double rho_floor) {
    Residuals r;
    for (double t : times) {
        Json row{{"t", t}};
        try {
            const double c = continuity_residual(h, t, rho_floor);
            const double s = hj_residual(h, t, rho_floor);
            row["continuity_residual"] = json_number(c);
            row["hj_residual"] = json_number(s);
            r.continuity_max = std::max(r.continuity_max.value_or(0.0), c);
            r.hj_max = std::max(r.hj_max.value_or(0.0), s);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::needs_interior_time && e.kind() != ErrorKind::time_resolution) throw;
            row["skipped"] = std::string(to_string(e.kind()));
        }
        r.rows.push_back(row);
    }
    return r;
}

RunReport start_report(const ScenarioConfig& cfg, std::string subcommand) {
    RunReport rep;
    rep.scenario = cfg.name;
    rep.subcommand = std::move(subcommand);
    return rep;
}

void note_output(RunReport& rep, const fs::path& out, const fs::path& file) {
    rep.outputs.push_back(fs::relative(file, out).generic_string());
}

Json history_summary(const EvolutionHistory& h) {
    return Json{{"snapshots", h.size()},
                {"t_final", h.t_final()},
                {"dt", h.dt()},
                {"dt_store", h.dt_store()},
                {"eps", h.eps()},
                {"hbar_eff", h.hbar_eff()},
                {"max_norm_drift", h.max_norm_drift()},
                {"boundary_leak", h.boundary_leak()}};
}

}  // namespace

Json RunReport::to_json() const {
    Json j{{"scenario", scenario}, {"subcommand", subcommand}, {"wall_time_s", wall_time_s}};
    j["max_norm_drift"] = max_norm_drift ? json_number(*max_norm_drift) : Json(nullptr);
    j["boundary_leak"] = boundary_leak ? Json(*boundary_leak) : Json(nullptr);
    j["truncated_trajectories"] = truncated_trajectories ? Json(*truncated_trajectories) : Json(nullptr);
    j["residual_maxima"] = Json{
        {"continuity", continuity_residual_max ? json_number(*continuity_residual_max) : Json(nullptr)},
        {"hamilton_jacobi", hj_residual_max ? json_number(*hj_residual_max) : Json(nullptr)}};
    j["outputs"] = outputs;
    return j;
}

ComplexField scenario_initial_field(const ScenarioConfig& cfg) {
    const double eps = cfg.eps_list.front();
    if (eps == 1.0) return sample(cfg.initial, cfg.grid());
    return prepare_rescaled_initial(cfg.initial, cfg.grid(), eps);
}

RunReport run_evolve(const ScenarioConfig& cfg, const fs::path& out) {
    RunReport rep = start_report(cfg, "evolve");
    fs::create_directories(out);
    const EvolutionHistory h = run_history(cfg);
    const Units u = h.units();

    std::vector<std::vector<double>> cols(6);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const ComplexField f = h.snapshot(i);
        cols[0].push_back(h.time(i));
        cols[1].push_back(norm_squared(f));
        cols[2].push_back(position_mean(f));
        cols[3].push_back(position_width(f));
        cols[4].push_back(energy_expectation(f, cfg.potential, u));
        cols[5].push_back(boundary_leak(f) ? 1.0 : 0.0);
    }
    const fs::path moments = out / "moments.csv";
    write_csv_columns(moments, {"t", "norm", "mean", "width", "energy", "leak"}, cols);
    note_output(rep, out, moments);

    const Residuals res = probe_residuals(h, cfg.probe_times, cfg.rho_floor);
    Json summary = history_summary(h);
    summary["residuals"] = res.rows;
    const fs::path sp = out / "evolve_summary.json";
    write_json(sp, summary);
    note_output(rep, out, sp);

    if (cfg.snapshot_stride > 0) {
        for (const auto& f : h.write(out / "snapshots", cfg.snapshot_stride)) note_output(rep, out, f);
    }
    rep.max_norm_drift = h.max_norm_drift();
    rep.boundary_leak = h.boundary_leak();
    rep.continuity_residual_max = res.continuity_max;
    rep.hj_residual_max = res.hj_max;
    return rep;
}

RunReport run_trajectories(const ScenarioConfig& cfg, const fs::path& out) {
    RunReport rep = start_report(cfg, "trajectories");
    fs::create_directories(out);
    const EvolutionHistory h = run_history(cfg);
    const GuidanceField guide(h, cfg.rho_floor);
    const ComplexField f0 = h.snapshot(0);

    std::vector<Trajectory> singles;
    for (double x0 : cfg.trajectory_starts) {
        Trajectory t = integrate_trajectory(guide, x0);
        annotate(t, guide);
        singles.push_back(std::move(t));
    }
    if (!singles.empty()) {
        const fs::path p = out / "trajectories.csv";
        write_trajectories_csv(p, singles);
        note_output(rep, out, p);
    }

    const Ensemble ens = integrate_ensemble(guide, f0, cfg.ensemble.n, cfg.ensemble.seed);
    {
        CsvWriter csv(out / "ensemble_final.csv", {"index", "x0", "x_final", "v_final", "truncated", "exit_time"});
        for (std::size_t i = 0; i < ens.trajectories.size(); ++i) {
            const auto& t = ens.trajectories[i];
            csv.row({static_cast<double>(i), t.positions.front(), t.positions.back(), t.velocities.back(),
                     t.truncated ? 1.0 : 0.0, t.exit_time});
        }
        csv.close();
        note_output(rep, out, csv.path());
    }

    std::vector<double> probes = cfg.probe_times;
    if (probes.empty()) probes = {0.0, h.t_final()};
    std::vector<std::vector<double>> cols(3);
    for (double t : probes) {
        cols[0].push_back(t);
        cols[1].push_back(equivariance_distance(ens, h, t));
        cols[2].push_back(static_cast<double>(ens.positions_at(h.index_of(t)).size()));
    }
    const fs::path eq = out / "equivariance.csv";
    write_csv_columns(eq, {"t", "ks_distance", "n_used"}, cols);
    note_output(rep, out, eq);

    // Final velocities against the limiting velocity distribution.
    const auto vel = ens.velocities_at(h.size() - 1);
    const auto rho_v = limiting_velocity_distribution(f0, h.units());
    Json summary = history_summary(h);
    summary["ensemble"] = Json{{"n", cfg.ensemble.n},
                               {"seed", cfg.ensemble.seed},
                               {"truncated", ens.truncated_count()},
                               {"final_velocity_ks", json_number(ks_distance(vel, [&](double v) { return rho_v.cdf(v); }))}};
    const fs::path sp = out / "trajectories_summary.json";
    write_json(sp, summary);
    note_output(rep, out, sp);

    rep.max_norm_drift = h.max_norm_drift();
    rep.boundary_leak = h.boundary_leak();
    rep.truncated_trajectories = ens.truncated_count();
    return rep;
}

RunReport run_semiclassical_compare(const ScenarioConfig& cfg, const fs::path& out) {
    RunReport rep = start_report(cfg, "semiclassical-compare");
    require_simulable(cfg);
    fs::create_directories(out);
    const Units u = cfg.units();
    const Grid1D grid = cfg.grid();
    const double width = std::max(cfg.initial.sigma0, 1.0);
    const ComplexField psi0 = sample(cfg.initial, make_grid(cfg.initial.center - 40.0 * width,
                                                            cfg.initial.center + 40.0 * width, 4096));
    const MomentumAmplitude psi0_hat(psi0);
    const double t = cfg.times.t_final;

    const PhaseJet jet{cfg.caustic.slope.value_or(u.hbar * cfg.initial.k0), cfg.caustic.curvature};
    const double caustic = first_caustic_time(cfg.potential, cfg.caustic.x0, jet, u, {cfg.caustic.t_max, 1e-3});

    // Van Vleck data from the origin to each probe point at t.
    Json van_vleck = Json::array();
    for (double x : cfg.probe_points) {
        try {
            const ActionData a = classical_action(cfg.potential, 0.0, x, t, u);
            van_vleck.push_back(Json{{"x", x}, {"t", t}, {"S0", a.S0}, {"C", a.C}, {"C_jacobi", a.C_jacobi},
                                     {"v0", a.v0}, {"v_final", a.v_final}, {"branch_count", a.branch_count}});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::multivalued && e.kind() != ErrorKind::no_path) throw;
            van_vleck.push_back(Json{{"x", x}, {"t", t}, {"error", std::string(to_string(e.kind()))}});
        }
    }

    std::vector<double> eps_ok, err_ok;
    std::vector<std::vector<double>> cols(2);
    double max_drift = 0.0;
    bool leak = false;
    std::optional<ComplexField> last_exact, last_sc;
    for (double eps : cfg.eps_list) {
        const ComplexField f0 = prepare_rescaled_initial(cfg.initial, grid, eps);
        const EvolutionHistory h = evolve_rescaled(f0, cfg.potential, eps, t, cfg.times.dt, cfg.times.dt_store, u);
        max_drift = std::max(max_drift, h.max_norm_drift());
        leak = leak || h.boundary_leak();
        last_exact = h.snapshot(h.size() - 1);
        last_sc = semiclassical_field(cfg.potential, psi0_hat, grid, t, eps, u);
        const double err = relative_l2_error(*last_sc, *last_exact);
        cols[0].push_back(eps);
        cols[1].push_back(err);
        eps_ok.push_back(eps);
        err_ok.push_back(err);
    }
    const fs::path ep = out / "semiclassical_errors.csv";
    write_csv_columns(ep, {"eps", "l2_error"}, cols);
    note_output(rep, out, ep);

    {
        CsvWriter csv(out / "density_curves.csv", {"x", "exact", "semiclassical", "limiting"});
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = grid.x(j);
            csv.row({x, std::norm(last_exact->values[j]), std::norm(last_sc->values[j]),
                     limiting_position_density(cfg.potential, psi0_hat, x, t, u)});
        }
        csv.close();
        note_output(rep, out, csv.path());
    }

    Json summary{{"t", t},
                 {"caustic_probe", {{"x0", cfg.caustic.x0}, {"slope", jet.slope}, {"curvature", jet.curvature}}},
                 {"first_caustic_time", json_number(caustic)},
                 {"van_vleck", van_vleck},
                 {"eps", eps_ok},
                 {"l2_error", err_ok},
                 {"log_log_slope", eps_ok.size() >= 2 ? json_number(log_log_slope(eps_ok, err_ok)) : Json(nullptr)},
                 {"max_norm_drift", max_drift},
                 {"boundary_leak", leak}};
    const fs::path sp = out / "semiclassical_summary.json";
    write_json(sp, summary);
    note_output(rep, out, sp);
    rep.max_norm_drift = max_drift;
    rep.boundary_leak = leak;
    return rep;
}

Json to_json(const ConvergenceTable& table) {
    Json rows = Json::array();
    for (const auto& r : table.rows) {
        rows.push_back(Json{{"eps", r.eps},
                            {"deviation", json_number(r.deviation)},
                            {"l2_error", json_number(r.l2_error)},
                            {"qp_ratio_max", json_number(r.qp_ratio_max)},
                            {"truncated", r.truncated},
                            {"caustic", r.caustic},
                            {"boundary_leak", r.boundary_leak},
                            {"max_norm_drift", r.max_norm_drift}});
    }
    Json ratios = Json::array();
    bool dev_decreasing = true, qp_decreasing = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        ratios.push_back(json_number(table.rows[i].deviation / table.rows[i - 1].deviation));
        dev_decreasing = dev_decreasing && table.rows[i].deviation < table.rows[i - 1].deviation;
        qp_decreasing = qp_decreasing && table.rows[i].qp_ratio_max < table.rows[i - 1].qp_ratio_max;
    }
    Json j{{"L", json_number(table.L)},
           {"lambda", table.lambda},
           {"T", table.T},
           {"X0", table.X0},
           {"v0", table.v0},
           {"rows", rows},
           {"deviation_ratios", ratios},
           {"deviation_strictly_decreasing", dev_decreasing},
           {"qp_ratio_max_decreasing", qp_decreasing}};
    const auto eps = table.eps_values();
    const auto dev = table.deviation();
    const auto l2 = table.l2_error();
    bool dev_positive = eps.size() >= 2, l2_finite = eps.size() >= 2;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        dev_positive = dev_positive && dev[i] > 0.0;
        l2_finite = l2_finite && std::isfinite(l2[i]) && l2[i] > 0.0;
    }
    j["deviation_slope"] = dev_positive ? json_number(log_log_slope(eps, dev)) : Json(nullptr);
    j["l2_error_slope"] = l2_finite ? json_number(log_log_slope(eps, l2)) : Json(nullptr);
    return j;
}

RunReport run_sweep_epsilon(const ScenarioConfig& cfg, const fs::path& out) {
    RunReport rep = start_report(cfg, "sweep-epsilon");
    require_simulable(cfg);
    fs::create_directories(out);
    const ConvergenceTable table = epsilon_sweep(cfg.sweep_spec());
    {
        CsvWriter csv(out / "convergence.csv", {"eps", "deviation", "l2_error", "qp_ratio_max", "truncated", "caustic"});
        for (const auto& r : table.rows)
            csv.row({r.eps, r.deviation, r.l2_error, r.qp_ratio_max, r.truncated ? 1.0 : 0.0, r.caustic ? 1.0 : 0.0});
        csv.close();
        note_output(rep, out, csv.path());
    }
    const fs::path jp = out / "convergence.json";
    write_json(jp, to_json(table));
    note_output(rep, out, jp);
    double drift = 0.0;
    bool leak = false;
    std::size_t truncated = 0;
    for (const auto& r : table.rows) {
        drift = std::max(drift, r.max_norm_drift);
        leak = leak || r.boundary_leak;
        truncated += r.truncated ? 1 : 0;
    }
    rep.max_norm_drift = drift;
    rep.boundary_leak = leak;
    rep.truncated_trajectories = truncated;
    return rep;
}

Json potential_info(const ScenarioConfig& cfg) {
    const Potential& p = cfg.potential;
    double lambda;
    std::string lambda_source;
    if (cfg.lambda) {
        lambda = *cfg.lambda;
        lambda_source = "config";
    } else {
        lambda = debroglie_wavelength(sample(cfg.initial, cfg.grid()), cfg.units());
        lambda_source = "initial_state";
    }
    std::vector<double> points = cfg.probe_points;
    if (points.empty()) points = {0.5 * (cfg.x_min + cfg.x_max)};

    Json rows = Json::array();
    for (double x : points) {
        Json r{{"x", x}};
        const double V = p.value(x);
        r["V"] = json_number(V);
        r["dV"] = json_number(p.d1(x));
        r["d3V"] = json_number(p.d3(x));
        const double L = scale_of_variation(p, x);
        r["L"] = json_number(L);
        r["eps"] = std::isnan(L) ? json_number(L) : json_number(epsilon(lambda, L));
        if (p.kind() == PotentialKind::soft_coulomb) r["L_pure_coulomb"] = json_number(coulomb_scale_of_variation(x));
        rows.push_back(r);
    }
    Json notes = Json::array();
    switch (p.kind()) {
        case PotentialKind::free:
        case PotentialKind::linear:
        case PotentialKind::harmonic:
            notes.push_back("V''' vanishes identically: L = +inf and eps = 0 for any wavelength");
            break;
        case PotentialKind::sinusoidal: {
            const double a = p.param(1) * p.stretch();
            notes.push_back(fmt::format(
                "canonical L = sqrt(|V'|/|V'''|) = a/(2 pi) = {} for period a = {}; the rough estimate L = a = {} "
                "differs by the factor 2 pi",
                format_number(a / (2.0 * std::numbers::pi)), format_number(a), format_number(a)));
            break;
        }
        case PotentialKind::soft_coulomb:
            notes.push_back("L_pure_coulomb is the unsoftened 1/r value |r|/sqrt(6), of order r");
            break;
        case PotentialKind::yukawa:
            notes.push_back(fmt::format("far-field L tends to the range 1/mu = {}",
                                        format_number(p.stretch() / p.param(1))));
            break;
    }
    return Json{{"potential", to_json(p)},
                {"lambda", lambda},
                {"lambda_source", lambda_source},
                {"points", rows},
                {"notes", notes}};
}

RunReport run_potential_info(const ScenarioConfig& cfg, const fs::path& out) {
    RunReport rep = start_report(cfg, "potential-info");
    fs::create_directories(out);
    const fs::path jp = out / "potential_info.json";
    write_json(jp, potential_info(cfg));
    note_output(rep, out, jp);
    return rep;
}

RunReport run_diagnose(const ScenarioConfig& cfg, const fs::path& out) {
    RunReport rep = start_report(cfg, "diagnose");
    fs::create_directories(out);
    const EvolutionHistory h = run_history(cfg);
    const Units u = h.units();
    std::vector<double> probes = cfg.probe_times;
    if (probes.empty()) probes = {0.0, h.t_final()};

    Json reports = Json::array();
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const ComplexField f = h.snapshot(h.index_of(probes[k]));
        const LpwReport r = lpw_report(f, u, cfg.thresholds, cfg.rho_floor);
        CsvWriter csv(out / fmt::format("lpw_{:03d}.csv", k),
                      {"x", "lambda_local", "cond_amp_1", "cond_amp_2", "cond_lambda", "qp_ratio", "valid"});
        for (std::size_t j = 0; j < f.size(); ++j)
            csv.row({f.grid.x(j), r.lambda_local[j], r.cond_amp_1[j], r.cond_amp_2[j], r.cond_lambda[j], r.qp_ratio[j],
                     r.valid[j] ? 1.0 : 0.0});
        csv.close();
        note_output(rep, out, csv.path());
        reports.push_back(Json{{"t", probes[k]},
                               {"pass_fraction", r.pass_fraction},
                               {"weighted_pass_fraction", r.weighted_pass_fraction},
                               {"valid_points", std::count(r.valid.begin(), r.valid.end(), 1)},
                               {"debroglie_wavelength", debroglie_wavelength(f, u)}});
    }
    const Residuals res = probe_residuals(h, probes, cfg.rho_floor);
    Json summary = history_summary(h);
    summary["thresholds"] = Json{{"amp_1", cfg.thresholds.amp_1},
                                 {"amp_2", cfg.thresholds.amp_2},
                                 {"lambda", cfg.thresholds.lambda},
                                 {"qp", cfg.thresholds.qp}};
    summary["lpw"] = reports;
    summary["residuals"] = res.rows;
    const fs::path sp = out / "diagnose_summary.json";
    write_json(sp, summary);
    note_output(rep, out, sp);
    rep.max_norm_drift = h.max_norm_drift();
    rep.boundary_leak = h.boundary_leak();
    rep.continuity_residual_max = res.continuity_max;
    rep.hj_residual_max = res.hj_max;
    return rep;
}

}  // namespace pilotlim
