#include "pilotlim/initial_state.hpp"

#include <cmath>
#include <numbers>

#include "pilotlim/error.hpp"

namespace pilotlim {

std::string_view to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::gaussian: return "gaussian";
        case InitialKind::coherent: return "coherent";
        case InitialKind::plane_modulated: return "plane_modulated";
    }
    return "unknown";
}

std::optional<InitialKind> parse_initial_kind(std::string_view name) {
    for (auto k : {InitialKind::gaussian, InitialKind::coherent, InitialKind::plane_modulated}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

InitialState InitialState::gaussian(double sigma0, double center, double k0) {
    require(sigma0 > 0.0 && std::isfinite(sigma0), "gaussian: sigma0 must be positive");
    InitialState s;
    s.kind = InitialKind::gaussian;
    s.sigma0 = sigma0;
    s.center = center;
    s.k0 = k0;
    return s;
}

InitialState InitialState::coherent(const Units& units, double omega, double center, double k0) {
    require(omega > 0.0, "coherent: omega must be positive");
    InitialState s = gaussian(std::sqrt(units.hbar / (2.0 * units.mass * omega)), center, k0);
    s.kind = InitialKind::coherent;
    return s;
}

InitialState InitialState::plane_modulated(double k0, double modulation, double kappa) {
    require(std::abs(modulation) < 1.0, "plane_modulated: |modulation| must be < 1");
    InitialState s;
    s.kind = InitialKind::plane_modulated;
    s.k0 = k0;
    s.modulation = modulation;
    s.kappa = kappa;
    return s;
}

Complex InitialState::value(double x) const {
    if (kind == InitialKind::plane_modulated) {
        return std::polar(1.0 + modulation * std::cos(kappa * x), k0 * x);
    }
    const double d = x - center;
    const double amp = std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.25) *
                       std::exp(-d * d / (4.0 * sigma0 * sigma0));
    return std::polar(amp, k0 * d);
}

namespace {

double snap_to_lattice(double k, const Grid1D& g) { return std::round(k / g.dk()) * g.dk(); }

}  // namespace

ComplexField sample(const InitialState& state, const Grid1D& grid) {
    InitialState s = state;
    if (s.kind == InitialKind::plane_modulated) {
        s.k0 = snap_to_lattice(s.k0, grid);
        s.kappa = snap_to_lattice(s.kappa, grid);
    }
    ComplexField f(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) f.values[j] = s.value(grid.x(j));
    return normalized(std::move(f));
}

ComplexField prepare_rescaled_initial(const InitialState& state, const Grid1D& grid, double eps) {
    require(eps > 0.0 && eps <= 1.0, "prepare_rescaled_initial: eps must lie in (0, 1]");
    ComplexField f(grid);
    const double pre = 1.0 / std::sqrt(eps);
    for (std::size_t j = 0; j < grid.size(); ++j) f.values[j] = pre * state.value(grid.x(j) / eps);
    return normalized(std::move(f));
}

double rescale_initial_position(double x0, double eps) {
    require(eps > 0.0 && eps <= 1.0, "rescale_initial_position: eps must lie in (0, 1]");
    return eps * x0;
}

}  // namespace pilotlim
