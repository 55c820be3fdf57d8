#include "pilotlim/hydrodynamic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "pilotlim/error.hpp"
#include "pilotlim/spectral.hpp"

namespace pilotlim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Segment {
    std::size_t begin;
    std::size_t end;  // one past the last valid index
};

std::vector<Segment> valid_segments(const std::vector<std::uint8_t>& valid) {
    std::vector<Segment> out;
    std::size_t j = 0;
    while (j < valid.size()) {
        if (!valid[j]) {
            ++j;
            continue;
        }
        std::size_t e = j;
        while (e < valid.size() && valid[e]) ++e;
        out.push_back({j, e});
        j = e;
    }
    return out;
}

void require_interior(const EvolutionHistory& h, std::size_t i) {
    if (i == 0 || i + 1 >= h.size()) {
        fail(ErrorKind::needs_interior_time,
             "residual: time index " + std::to_string(i) + " has no snapshot on both sides");
    }
}

// Fourth-order centered differencing needs two snapshots on each side.
bool has_wide_stencil(const EvolutionHistory& h, std::size_t i) { return i >= 2 && i + 2 < h.size(); }

}  // namespace

std::size_t PolarField::valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> amplitude_mask(const ComplexField& f, double rho_floor) {
    require(rho_floor > 0.0 && rho_floor < 1.0, "rho_floor must lie in (0, 1)");
    double rho_max = 0.0;
    for (const auto& z : f.values) rho_max = std::max(rho_max, std::norm(z));
    if (!(rho_max > 0.0)) fail(ErrorKind::degenerate_field, "field vanishes identically");
    std::vector<std::uint8_t> valid(f.size());
    std::size_t count = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        valid[j] = std::norm(f.values[j]) >= rho_floor * rho_max ? 1 : 0;
        count += valid[j];
    }
    if (count == 0) fail(ErrorKind::degenerate_field, "every point is below the amplitude floor");
    return valid;
}

PolarField polar_decompose(const ComplexField& f, const Units& units, double rho_floor) {
    PolarField out{f.grid, {}, {}, amplitude_mask(f, rho_floor), rho_floor, units.hbar, 0};
    const std::size_t n = f.size();
    out.amplitude.resize(n);
    out.phase.assign(n, kNaN);
    for (std::size_t j = 0; j < n; ++j) out.amplitude[j] = std::abs(f.values[j]);
    out.anchor = static_cast<std::size_t>(
        std::max_element(out.amplitude.begin(), out.amplitude.end()) - out.amplitude.begin());

    for (const auto& seg : valid_segments(out.valid)) {
        std::size_t a = seg.begin;
        if (out.anchor >= seg.begin && out.anchor < seg.end) {
            a = out.anchor;
        } else {
            for (std::size_t j = seg.begin; j < seg.end; ++j) {
                if (out.amplitude[j] > out.amplitude[a]) a = j;
            }
        }
        out.phase[a] = units.hbar * std::arg(f.values[a]);
        for (std::size_t j = a + 1; j < seg.end; ++j) {
            out.phase[j] = out.phase[j - 1] + units.hbar * std::arg(f.values[j] * std::conj(f.values[j - 1]));
        }
        for (std::size_t j = a; j-- > seg.begin;) {
            out.phase[j] = out.phase[j + 1] + units.hbar * std::arg(f.values[j] * std::conj(f.values[j + 1]));
        }
    }
    return out;
}

ComplexField reconstruct(const PolarField& polar) {
    ComplexField f(polar.grid);
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (polar.valid[j]) f.values[j] = std::polar(polar.amplitude[j], polar.phase[j] / polar.hbar);
    }
    return f;
}

std::vector<double> phase_gradient(const PolarField& polar) {
    const auto& S = polar.phase;
    const double h = polar.grid.dx();
    std::vector<double> out(S.size(), kNaN);
    for (const auto& seg : valid_segments(polar.valid)) {
        const std::size_t len = seg.end - seg.begin;
        if (len < 2) continue;
        for (std::size_t j = seg.begin; j < seg.end; ++j) {
            const std::size_t left = j - seg.begin;
            const std::size_t right = seg.end - 1 - j;
            const std::size_t reach = std::min(left, right);
            if (reach >= 3) {
                out[j] = (45.0 * (S[j + 1] - S[j - 1]) - 9.0 * (S[j + 2] - S[j - 2]) + (S[j + 3] - S[j - 3])) /
                         (60.0 * h);
            } else if (reach == 2) {
                out[j] = (8.0 * (S[j + 1] - S[j - 1]) - (S[j + 2] - S[j - 2])) / (12.0 * h);
            } else if (reach == 1) {
                out[j] = (S[j + 1] - S[j - 1]) / (2.0 * h);
            } else if (len == 2) {
                out[j] = (S[seg.begin + 1] - S[seg.begin]) / h;
            } else if (left == 0) {
                out[j] = (-3.0 * S[j] + 4.0 * S[j + 1] - S[j + 2]) / (2.0 * h);
            } else {
                out[j] = (3.0 * S[j] - 4.0 * S[j - 1] + S[j - 2]) / (2.0 * h);
            }
        }
    }
    return out;
}

MaskedField amplitude_curvature(const ComplexField& f, double rho_floor) {
    MaskedField out{f.grid, std::vector<double>(f.size(), kNaN), amplitude_mask(f, rho_floor), f.time};
    const auto d1 = spectral_gradient(f);
    const auto d2 = spectral_laplacian(f);
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (!out.valid[j]) continue;
        const Complex r1 = d1.values[j] / f.values[j];
        const Complex r2 = d2.values[j] / f.values[j];
        out.values[j] = r2.real() + r1.imag() * r1.imag();
    }
    return out;
}

MaskedField quantum_potential(const ComplexField& f, const Units& units, double rho_floor) {
    auto out = amplitude_curvature(f, rho_floor);
    const double pre = -units.hbar * units.hbar / (2.0 * units.mass);
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        if (out.valid[j]) out.values[j] *= pre;
    }
    return out;
}

VelocityField velocity_field(const ComplexField& f, const Units& units, double rho_floor) {
    VelocityField out{f.grid, std::vector<double>(f.size(), kNaN), amplitude_mask(f, rho_floor), f.time};
    const auto d1 = spectral_gradient(f);
    const double pre = units.hbar / units.mass;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (out.valid[j]) out.values[j] = pre * (d1.values[j] / f.values[j]).imag();
    }
    return out;
}

std::vector<double> probability_current(const ComplexField& f, const Units& units) {
    const auto d1 = spectral_gradient(f);
    std::vector<double> j(f.size());
    const double pre = units.hbar / units.mass;
    for (std::size_t i = 0; i < f.size(); ++i) j[i] = pre * (std::conj(f.values[i]) * d1.values[i]).imag();
    return j;
}

double kinetic_energy_scale(const ComplexField& f, const Units& units) {
    const double w = f.grid.length();
    const double floor = units.hbar * units.hbar / (2.0 * units.mass * w * w);
    return std::max(kinetic_energy(f, units), floor);
}

double continuity_residual(const EvolutionHistory& h, double t, double rho_floor) {
    const std::size_t i = h.index_of(t);
    require_interior(h, i);
    const bool wide = has_wide_stencil(h, i);
    const auto curr = h.snapshot(i);
    const auto prev = h.snapshot(i - 1);
    const auto next = h.snapshot(i + 1);
    std::optional<ComplexField> prev2, next2;
    if (wide) {
        prev2 = h.snapshot(i - 2);
        next2 = h.snapshot(i + 2);
    }
    const Units units = h.units();

    const auto current = probability_current(curr, units);
    const auto div = spectral_derivative(curr.grid, current, 1);
    const auto valid = amplitude_mask(curr, rho_floor);
    const double dt = h.dt_store();

    double sup = 0.0, rho_max = 0.0;
    for (std::size_t j = 0; j < curr.size(); ++j) {
        rho_max = std::max(rho_max, std::norm(curr.values[j]));
        if (!valid[j]) continue;
        const double dn = std::norm(next.values[j]) - std::norm(prev.values[j]);
        double drho = dn / (2.0 * dt);
        if (wide) {
            const double dw = std::norm(next2->values[j]) - std::norm(prev2->values[j]);
            drho = (8.0 * dn - dw) / (12.0 * dt);
        }
        sup = std::max(sup, std::abs(drho + div[j]));
    }
    const double scale = rho_max * kinetic_energy_scale(curr, units) / units.hbar;
    return sup / scale;
}

MaskedField hj_residual_field(const EvolutionHistory& h, double t, double rho_floor,
                              bool include_quantum_potential) {
    const std::size_t i = h.index_of(t);
    require_interior(h, i);
    const bool wide = has_wide_stencil(h, i);
    const std::size_t reach = wide ? 2 : 1;
    // window[reach] is the snapshot at t.
    std::vector<ComplexField> window;
    for (std::size_t k = i - reach; k <= i + reach; ++k) window.push_back(h.snapshot(k));
    const auto& curr = window[reach];
    const Units units = h.units();

    auto valid = amplitude_mask(curr, rho_floor);
    for (const auto& w : window) {
        const auto vw = amplitude_mask(w, rho_floor);
        for (std::size_t j = 0; j < valid.size(); ++j) valid[j] = valid[j] && vw[j];
    }

    std::size_t anchor = 0;
    for (std::size_t j = 0; j < curr.size(); ++j) {
        if (std::abs(curr.values[j]) > std::abs(curr.values[anchor])) anchor = j;
    }
    // increments[k] = arg(psi_{k+1} conj(psi_k)) = (S_{k+1} - S_k) / hbar
    auto increments = [&](std::size_t j) {
        std::vector<double> d(window.size() - 1);
        for (std::size_t k = 0; k + 1 < window.size(); ++k) {
            d[k] = std::arg(window[k + 1].values[j] * std::conj(window[k].values[j]));
        }
        return d;
    };
    for (double d : increments(anchor)) {
        if (std::abs(d) > std::numbers::pi / 2) {
            fail(ErrorKind::time_resolution,
                 "hj_residual: phase advance per snapshot exceeds pi/2 at the anchor; reduce dt_store");
        }
    }

    const auto velocity = velocity_field(curr, units, rho_floor);
    const auto qp = quantum_potential(curr, units, rho_floor);
    const double dt = h.dt_store();

    MaskedField out{curr.grid, std::vector<double>(curr.size(), kNaN), valid, curr.time};
    for (std::size_t j = 0; j < curr.size(); ++j) {
        if (!valid[j]) continue;
        const auto d = increments(j);
        const double dS_dt = wide ? units.hbar * (7.0 * (d[1] + d[2]) - d[0] - d[3]) / (12.0 * dt)
                                  : units.hbar * (d[0] + d[1]) / (2.0 * dt);
        const double grad_S = units.mass * velocity.values[j];
        double r = dS_dt + grad_S * grad_S / (2.0 * units.mass) + h.potential().value(curr.grid.x(j));
        if (include_quantum_potential) r += qp.values[j];
        out.values[j] = r;
    }
    return out;
}

double hj_residual(const EvolutionHistory& h, double t, double rho_floor, bool include_quantum_potential) {
    const auto field = hj_residual_field(h, t, rho_floor, include_quantum_potential);
    double sup = 0.0;
    for (std::size_t j = 0; j < field.values.size(); ++j) {
        if (field.valid[j]) sup = std::max(sup, std::abs(field.values[j]));
    }
    const auto curr = h.snapshot(h.index_of(t));
    return sup / kinetic_energy_scale(curr, h.units());
}

}  // namespace pilotlim
