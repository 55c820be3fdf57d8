#include "pilotlim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pilotlim/error.hpp"

namespace pilotlim {

namespace {

class Reader {
public:
    explicit Reader(std::vector<Violation>& out) : out_(out) {}

    void violation(const std::string& path, const std::string& message) { out_.push_back({path, message}); }

    const Json* child(const Json& parent, const std::string& key, const std::string& path, bool required) {
        if (!parent.is_object() || !parent.contains(key)) {
            if (required) violation(path, "is required");
            return nullptr;
        }
        return &parent.at(key);
    }

    std::optional<double> number(const Json& parent, const std::string& key, const std::string& path,
                                 bool required = true) {
        const Json* j = child(parent, key, path, required);
        if (!j) return std::nullopt;
        if (j->is_number()) {
            const double v = j->get<double>();
            if (!std::isfinite(v)) {
                violation(path, "must be finite");
                return std::nullopt;
            }
            return v;
        }
        if (j->is_string()) {
            try {
                return number_from_json(*j);
            } catch (const std::exception&) {
            }
        }
        violation(path, "must be a number");
        return std::nullopt;
    }

    std::optional<std::uint64_t> unsigned_integer(const Json& parent, const std::string& key, const std::string& path,
                                                  bool required = true) {
        const Json* j = child(parent, key, path, required);
        if (!j) return std::nullopt;
        if (j->is_number_unsigned()) return j->get<std::uint64_t>();
        if (j->is_number_integer()) {
            if (const auto v = j->get<std::int64_t>(); v >= 0) return static_cast<std::uint64_t>(v);
            violation(path, "must be non-negative");
            return std::nullopt;
        }
        if (j->is_number_float()) {
            const double v = j->get<double>();
            if (v >= 0.0 && v == std::floor(v) && v < 1.8e19) return static_cast<std::uint64_t>(v);
        }
        violation(path, "must be a non-negative integer");
        return std::nullopt;
    }

    std::optional<std::string> string(const Json& parent, const std::string& key, const std::string& path,
                                      bool required = true) {
        const Json* j = child(parent, key, path, required);
        if (!j) return std::nullopt;
        if (!j->is_string()) {
            violation(path, "must be a string");
            return std::nullopt;
        }
        return j->get<std::string>();
    }

    std::vector<double> numbers(const Json& parent, const std::string& key, const std::string& path) {
        std::vector<double> out;
        const Json* j = child(parent, key, path, false);
        if (!j) return out;
        if (!j->is_array()) {
            violation(path, "must be an array of numbers");
            return out;
        }
        for (std::size_t i = 0; i < j->size(); ++i) {
            const std::string p = fmt::format("{}[{}]", path, i);
            const Json& e = (*j)[i];
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                violation(p, "must be a finite number");
                continue;
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::optional<bool> boolean(const Json& parent, const std::string& key, const std::string& path) {
        const Json* j = child(parent, key, path, false);
        if (!j) return std::nullopt;
        if (!j->is_boolean()) {
            violation(path, "must be true or false");
            return std::nullopt;
        }
        return j->get<bool>();
    }

private:
    std::vector<Violation>& out_;
};

bool is_multiple(double a, double b) {
    const double r = a / b;
    return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r));
}

void parse_potential(Reader& rd, const Json& root, ScenarioConfig& cfg) {
    const Json* pj = rd.child(root, "potential", "potential", true);
    if (!pj) return;
    if (!pj->is_object()) {
        rd.violation("potential", "must be an object");
        return;
    }
    const auto kind_name = rd.string(*pj, "kind", "potential.kind");
    const auto stretch = rd.number(*pj, "stretch", "potential.stretch", false).value_or(1.0);
    if (!(stretch > 0.0)) rd.violation("potential.stretch", "must be > 0");
    if (!kind_name) return;
    const auto kind = parse_potential_kind(*kind_name);
    if (!kind) {
        rd.violation("potential.kind", "not in catalog");
        return;
    }
    static const Json empty = Json::object();
    const Json* params = rd.child(*pj, "params", "potential.params", false);
    if (params && !params->is_object()) {
        rd.violation("potential.params", "must be an object");
        params = nullptr;
    }
    const Json& pr = params ? *params : empty;
    auto param = [&](const char* key) { return rd.number(pr, key, std::string("potential.params.") + key); };
    std::optional<Potential> p;
    switch (*kind) {
        case PotentialKind::free: p = Potential::free(); break;
        case PotentialKind::linear:
            if (auto a = param("slope")) p = Potential::linear(*a);
            break;
        case PotentialKind::harmonic:
            if (auto a = param("coefficient")) p = Potential::harmonic(*a);
            break;
        case PotentialKind::sinusoidal: {
            auto a = param("amplitude");
            auto per = param("period");
            if (per && !(*per > 0.0)) rd.violation("potential.params.period", "must be > 0");
            else if (a && per) p = Potential::sinusoidal(*a, *per);
            break;
        }
        case PotentialKind::soft_coulomb: {
            auto q = param("coupling");
            auto s = param("softening");
            if (s && !(*s > 0.0)) rd.violation("potential.params.softening", "must be > 0");
            else if (q && s) p = Potential::soft_coulomb(*q, *s);
            break;
        }
        case PotentialKind::yukawa: {
            auto g = param("coupling");
            auto mu = param("screening");
            if (mu && !(*mu > 0.0)) rd.violation("potential.params.screening", "must be > 0");
            else if (g && mu) p = Potential::yukawa(*g, *mu);
            break;
        }
    }
    if (p && stretch > 0.0) cfg.potential = rescale_slowly_varying(*p, stretch);
}

void parse_initial(Reader& rd, const Json& root, ScenarioConfig& cfg) {
    const Json* ij = rd.child(root, "initial_state", "initial_state", true);
    if (!ij) return;
    if (!ij->is_object()) {
        rd.violation("initial_state", "must be an object");
        return;
    }
    const auto kind_name = rd.string(*ij, "kind", "initial_state.kind");
    if (!kind_name) return;
    const auto kind = parse_initial_kind(*kind_name);
    if (!kind) {
        rd.violation("initial_state.kind", "not in catalog");
        return;
    }
    const double center = rd.number(*ij, "center", "initial_state.center", false).value_or(0.0);
    const double k0 = rd.number(*ij, "k0", "initial_state.k0", false).value_or(0.0);
    switch (*kind) {
        case InitialKind::gaussian: {
            const auto s = rd.number(*ij, "sigma0", "initial_state.sigma0");
            if (s && !(*s > 0.0)) rd.violation("initial_state.sigma0", "must be > 0");
            else if (s) cfg.initial = InitialState::gaussian(*s, center, k0);
            break;
        }
        case InitialKind::coherent: {
            auto omega = rd.number(*ij, "omega", "initial_state.omega", false);
            if (!omega) {
                if (cfg.potential.kind() != PotentialKind::harmonic || !(cfg.potential.param(0) > 0.0)) {
                    rd.violation("initial_state.omega", "is required unless the potential is a confining harmonic well");
                    return;
                }
                const double L = cfg.potential.stretch();
                omega = std::sqrt(2.0 * cfg.potential.param(0) / cfg.mass) / L;
            }
            if (!(*omega > 0.0)) rd.violation("initial_state.omega", "must be > 0");
            else if (cfg.hbar > 0.0 && cfg.mass > 0.0)
                cfg.initial = InitialState::coherent(cfg.units(), *omega, center, k0);
            break;
        }
        case InitialKind::plane_modulated: {
            const double mod = rd.number(*ij, "modulation", "initial_state.modulation", false).value_or(0.0);
            const double kappa = rd.number(*ij, "kappa", "initial_state.kappa", false).value_or(0.0);
            if (!(std::abs(mod) < 1.0)) rd.violation("initial_state.modulation", "must satisfy |modulation| < 1");
            else cfg.initial = InitialState::plane_modulated(k0, mod, kappa);
            break;
        }
    }
}

}  // namespace

SweepSpec ScenarioConfig::sweep_spec() const {
    SweepSpec s;
    s.grid = grid();
    s.potential = potential;
    s.initial = initial;
    s.units = units();
    s.t_final = times.t_final;
    s.dt = times.dt;
    s.dt_store = times.dt_store;
    s.eps_list = eps_list;
    s.reference_length = sweep.reference_length;
    s.transient_skip = sweep.transient_skip;
    s.semiclassical = sweep.semiclassical;
    s.rho_floor = rho_floor;
    return s;
}

ParseResult parse_scenario(const Json& j) {
    ParseResult result;
    Reader rd(result.violations);
    if (!j.is_object()) {
        rd.violation("$", "scenario must be a JSON object");
        return result;
    }
    ScenarioConfig cfg;

    if (auto schema = rd.unsigned_integer(j, "schema", "schema"); schema && *schema != kScenarioSchema)
        rd.violation("schema", fmt::format("unsupported version {} (expected {})", *schema, kScenarioSchema));
    if (auto name = rd.string(j, "name", "name")) {
        if (name->empty()) rd.violation("name", "must not be empty");
        cfg.name = *name;
    }

    if (const Json* g = rd.child(j, "grid", "grid", true)) {
        const auto lo = rd.number(*g, "x_min", "grid.x_min");
        const auto hi = rd.number(*g, "x_max", "grid.x_max");
        const auto n = rd.unsigned_integer(*g, "n", "grid.n");
        if (lo && hi && !(*hi > *lo)) rd.violation("grid.x_max", "must exceed grid.x_min");
        if (n && *n < 8) rd.violation("grid.n", "must be ≥ 8");
        if (n && *n > (1u << 24)) rd.violation("grid.n", "must be ≤ 16777216");
        if (lo) cfg.x_min = *lo;
        if (hi) cfg.x_max = *hi;
        if (n) cfg.n = static_cast<std::size_t>(*n);
    }

    cfg.hbar = rd.number(j, "hbar", "hbar", false).value_or(1.0);
    cfg.mass = rd.number(j, "mass", "mass", false).value_or(1.0);
    if (!(cfg.hbar > 0.0)) rd.violation("hbar", "must be > 0");
    if (!(cfg.mass > 0.0)) rd.violation("mass", "must be > 0");

    parse_potential(rd, j, cfg);
    parse_initial(rd, j, cfg);

    if (j.contains("eps_list")) {
        cfg.eps_list = rd.numbers(j, "eps_list", "eps_list");
        if (cfg.eps_list.empty()) rd.violation("eps_list", "must not be empty");
        for (std::size_t i = 0; i < cfg.eps_list.size(); ++i)
            if (!(cfg.eps_list[i] > 0.0 && cfg.eps_list[i] <= 1.0))
                rd.violation(fmt::format("eps_list[{}]", i), "must lie in (0, 1]");
        for (std::size_t i = 1; i < cfg.eps_list.size(); ++i)
            if (!(cfg.eps_list[i] < cfg.eps_list[i - 1])) {
                rd.violation("eps_list", "must be strictly decreasing");
                break;
            }
    }

    if (const Json* t = rd.child(j, "times", "times", true)) {
        const auto tf = rd.number(*t, "t_final", "times.t_final");
        const auto ds = rd.number(*t, "dt_store", "times.dt_store");
        auto dt = rd.number(*t, "dt", "times.dt", false);
        if (tf && !(*tf >= 0.0)) rd.violation("times.t_final", "must be ≥ 0");
        if (ds && !(*ds > 0.0)) rd.violation("times.dt_store", "must be > 0");
        if (dt && !(*dt > 0.0)) rd.violation("times.dt", "must be > 0");
        if (tf && ds && *ds > 0.0 && *tf >= 0.0) {
            if (!dt && *tf > 0.0) {
                // Default t_final / 10^4, rounded so that it divides dt_store.
                const double per_store = std::ceil(*ds / (*tf * 1e-4) - 1e-9);
                dt = *ds / std::max(1.0, per_store);
            } else if (!dt) {
                dt = *ds;
            }
            if (*dt > 0.0 && !is_multiple(*ds, *dt)) rd.violation("times.dt_store", "must be an integer multiple of times.dt");
            if (!is_multiple(*tf, *ds)) rd.violation("times.t_final", "must be an integer multiple of times.dt_store");
            cfg.times = {*tf, *dt, *ds};
        }
    }

    if (const Json* e = rd.child(j, "ensemble", "ensemble", false)) {
        if (auto n = rd.unsigned_integer(*e, "n", "ensemble.n", false)) {
            if (*n < 1) rd.violation("ensemble.n", "must be ≥ 1");
            if (*n > 1000000) rd.violation("ensemble.n", "must be ≤ 1000000");
            cfg.ensemble.n = static_cast<std::size_t>(*n);
        }
        if (auto s = rd.unsigned_integer(*e, "seed", "ensemble.seed", false)) cfg.ensemble.seed = *s;
    }

    if (const Json* th = rd.child(j, "thresholds", "thresholds", false)) {
        auto read = [&](const char* key, double& slot) {
            if (auto v = rd.number(*th, key, std::string("thresholds.") + key, false)) {
                if (!(*v > 0.0)) rd.violation(std::string("thresholds.") + key, "must be > 0");
                slot = *v;
            }
        };
        read("amp_1", cfg.thresholds.amp_1);
        read("amp_2", cfg.thresholds.amp_2);
        read("lambda", cfg.thresholds.lambda);
        read("qp", cfg.thresholds.qp);
    }

    cfg.rho_floor = rd.number(j, "rho_floor", "rho_floor", false).value_or(kDefaultRhoFloor);
    if (!(cfg.rho_floor > 0.0 && cfg.rho_floor < 1.0)) rd.violation("rho_floor", "must lie in (0, 1)");

    cfg.output_dir = rd.string(j, "output_dir", "output_dir", false).value_or("out/" + cfg.name);

    cfg.probe_times = rd.numbers(j, "probe_times", "probe_times");
    for (std::size_t i = 0; i < cfg.probe_times.size(); ++i) {
        const double t = cfg.probe_times[i];
        const std::string p = fmt::format("probe_times[{}]", i);
        if (t < 0.0 || t > cfg.times.t_final * (1.0 + 1e-12)) rd.violation(p, "must lie in [0, times.t_final]");
        else if (cfg.times.dt_store > 0.0 && !is_multiple(t, cfg.times.dt_store))
            rd.violation(p, "must be a multiple of times.dt_store");
    }
    cfg.trajectory_starts = rd.numbers(j, "trajectory_starts", "trajectory_starts");
    for (std::size_t i = 0; i < cfg.trajectory_starts.size(); ++i)
        if (cfg.trajectory_starts[i] < cfg.x_min || cfg.trajectory_starts[i] >= cfg.x_max)
            rd.violation(fmt::format("trajectory_starts[{}]", i), "must lie inside the grid");
    cfg.probe_points = rd.numbers(j, "probe_points", "probe_points");
    if (auto lam = rd.number(j, "lambda", "lambda", false)) {
        if (!(*lam > 0.0)) rd.violation("lambda", "must be > 0");
        cfg.lambda = *lam;
    }

    if (const Json* s = rd.child(j, "sweep", "sweep", false)) {
        if (auto v = rd.number(*s, "transient_skip", "sweep.transient_skip", false)) {
            if (!(*v >= 0.0 && *v < 1.0)) rd.violation("sweep.transient_skip", "must lie in [0, 1)");
            cfg.sweep.transient_skip = *v;
        }
        if (auto v = rd.number(*s, "reference_length", "sweep.reference_length", false)) {
            if (!(*v > 0.0)) rd.violation("sweep.reference_length", "must be > 0");
            cfg.sweep.reference_length = *v;
        }
        if (auto v = rd.boolean(*s, "semiclassical", "sweep.semiclassical")) cfg.sweep.semiclassical = *v;
    }

    if (const Json* c = rd.child(j, "caustic_probe", "caustic_probe", false)) {
        cfg.caustic.x0 = rd.number(*c, "x0", "caustic_probe.x0", false).value_or(0.0);
        cfg.caustic.slope = rd.number(*c, "slope", "caustic_probe.slope", false);
        cfg.caustic.curvature = rd.number(*c, "curvature", "caustic_probe.curvature", false).value_or(0.0);
        cfg.caustic.t_max = rd.number(*c, "t_max", "caustic_probe.t_max", false).value_or(100.0);
        if (!(cfg.caustic.t_max > 0.0)) rd.violation("caustic_probe.t_max", "must be > 0");
    }

    if (const Json* o = rd.child(j, "output", "output", false)) {
        if (auto v = rd.unsigned_integer(*o, "snapshot_stride", "output.snapshot_stride", false))
            cfg.snapshot_stride = static_cast<std::size_t>(*v);
    }

    if (result.violations.empty()) result.config = std::move(cfg);
    return result;
}

ParseResult load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot read scenario file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    Json j;
    try {
        j = Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        fail(ErrorKind::io, "malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_scenario(j);
}

ScenarioConfig load_scenario_or_throw(const std::filesystem::path& path) {
    auto r = load_scenario(path);
    if (!r.config) {
        std::string msg = "invalid scenario " + path.string() + ":";
        for (const auto& v : r.violations) msg += "\n  " + v.text();
        fail(ErrorKind::validation, msg);
    }
    return std::move(*r.config);
}

std::vector<Violation> simulation_violations(const ScenarioConfig& cfg) {
    std::vector<Violation> out;
    if (!cfg.potential.is_regular() && cfg.x_min <= 0.0 && cfg.x_max > 0.0)
        out.push_back({"potential.kind", "yukawa is singular at x = 0, which lies inside the grid"});
    return out;
}

Json to_json(const ScenarioConfig& cfg) {
    Json thresholds{{"amp_1", cfg.thresholds.amp_1},
                    {"amp_2", cfg.thresholds.amp_2},
                    {"lambda", cfg.thresholds.lambda},
                    {"qp", cfg.thresholds.qp}};
    return Json{{"schema", kScenarioSchema},
                {"name", cfg.name},
                {"grid", {{"x_min", cfg.x_min}, {"x_max", cfg.x_max}, {"n", cfg.n}}},
                {"potential", to_json(cfg.potential)},
                {"initial_state",
                 {{"kind", std::string(to_string(cfg.initial.kind))},
                  {"sigma0", cfg.initial.sigma0},
                  {"center", cfg.initial.center},
                  {"k0", cfg.initial.k0}}},
                {"hbar", cfg.hbar},
                {"mass", cfg.mass},
                {"eps_list", cfg.eps_list},
                {"times", {{"t_final", cfg.times.t_final}, {"dt", cfg.times.dt}, {"dt_store", cfg.times.dt_store}}},
                {"ensemble", {{"n", cfg.ensemble.n}, {"seed", cfg.ensemble.seed}}},
                {"thresholds", thresholds},
                {"rho_floor", cfg.rho_floor}};
}

}  // namespace pilotlim
