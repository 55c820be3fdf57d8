#include "pilotlim/potential.hpp"

#include <cmath>
#include <numbers>

#include "pilotlim/error.hpp"

namespace pilotlim {

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::free: return "free";
        case PotentialKind::linear: return "linear";
        case PotentialKind::harmonic: return "harmonic";
        case PotentialKind::sinusoidal: return "sinusoidal";
        case PotentialKind::soft_coulomb: return "soft_coulomb";
        case PotentialKind::yukawa: return "yukawa";
    }
    return "unknown";
}

std::optional<PotentialKind> parse_potential_kind(std::string_view name) {
    for (auto k : {PotentialKind::free, PotentialKind::linear, PotentialKind::harmonic,
                   PotentialKind::sinusoidal, PotentialKind::soft_coulomb, PotentialKind::yukawa}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

Potential::Potential(PotentialKind kind, double a, double b) : kind_(kind), params_{a, b} {
    require(std::isfinite(a) && std::isfinite(b), "potential: parameters must be finite");
}

Potential Potential::free() { return Potential(PotentialKind::free, 0.0, 0.0); }
Potential Potential::linear(double slope) { return Potential(PotentialKind::linear, slope, 0.0); }
Potential Potential::harmonic(double coefficient) {
    return Potential(PotentialKind::harmonic, coefficient, 0.0);
}
Potential Potential::sinusoidal(double amplitude, double period) {
    require(period > 0.0, "sinusoidal potential: period must be positive");
    return Potential(PotentialKind::sinusoidal, amplitude, period);
}
Potential Potential::soft_coulomb(double coupling, double softening) {
    require(softening > 0.0, "soft_coulomb potential: softening must be positive");
    return Potential(PotentialKind::soft_coulomb, coupling, softening);
}
Potential Potential::yukawa(double coupling, double screening) {
    require(screening >= 0.0, "yukawa potential: screening must be non-negative");
    return Potential(PotentialKind::yukawa, coupling, screening);
}

Potential Potential::with_stretch(double stretch) const {
    require(std::isfinite(stretch) && stretch > 0.0, "potential: stretch must be positive and finite");
    Potential p = *this;
    p.stretch_ = stretch;
    return p;
}

double Potential::raw(double u, int order) const {
    const double a = params_[0];
    const double b = params_[1];
    switch (kind_) {
        case PotentialKind::free:
            return 0.0;
        case PotentialKind::linear:
            return order == 0 ? a * u : (order == 1 ? a : 0.0);
        case PotentialKind::harmonic:
            switch (order) {
                case 0: return a * u * u;
                case 1: return 2.0 * a * u;
                case 2: return 2.0 * a;
                default: return 0.0;
            }
        case PotentialKind::sinusoidal: {
            const double q = 2.0 * std::numbers::pi / b;
            switch (order) {
                case 0: return a * std::sin(q * u);
                case 1: return a * q * std::cos(q * u);
                case 2: return -a * q * q * std::sin(q * u);
                default: return -a * q * q * q * std::cos(q * u);
            }
        }
        case PotentialKind::soft_coulomb: {
            const double r2 = u * u + b * b;
            const double r = std::sqrt(r2);
            switch (order) {
                case 0: return a / r;
                case 1: return -a * u / (r2 * r);
                case 2: return a * (2.0 * u * u - b * b) / (r2 * r2 * r);
                default: return 3.0 * a * u * (3.0 * b * b - 2.0 * u * u) / (r2 * r2 * r2 * r);
            }
        }
        case PotentialKind::yukawa: {
            // Radial derivatives of g e^{-mu r}/r; odd orders pick up sign(x).
            const double r = std::abs(u);
            const double mr = b * r;
            const double e = a * std::exp(-mr);
            const double s = u < 0.0 ? -1.0 : 1.0;
            switch (order) {
                case 0: return e / r;
                case 1: return -s * e * (mr + 1.0) / (r * r);
                case 2: return e * (mr * mr + 2.0 * mr + 2.0) / (r * r * r);
                default: return -s * e * (mr * mr * mr + 3.0 * mr * mr + 6.0 * mr + 6.0) / (r * r * r * r);
            }
        }
    }
    return 0.0;
}

double Potential::value(double x) const { return raw(x / stretch_, 0); }
double Potential::d1(double x) const { return raw(x / stretch_, 1) / stretch_; }
double Potential::d2(double x) const { return raw(x / stretch_, 2) / (stretch_ * stretch_); }
double Potential::d3(double x) const {
    return raw(x / stretch_, 3) / (stretch_ * stretch_ * stretch_);
}

double evaluate(const Potential& p, double x) { return p.value(x); }
double evaluate_d1(const Potential& p, double x) { return p.d1(x); }
double evaluate_d3(const Potential& p, double x) { return p.d3(x); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed forms of sqrt(|V'|/|V'''|) for the unstretched families, which are
// also the continuous extensions through simultaneous zeros.
double unstretched_scale(const Potential& p, double u) {
    const double b = p.param(1);
    switch (p.kind()) {
        case PotentialKind::free:
        case PotentialKind::linear:
        case PotentialKind::harmonic:
            return kInf;
        case PotentialKind::sinusoidal:
            return p.param(0) == 0.0 ? kInf : b / (2.0 * std::numbers::pi);
        case PotentialKind::soft_coulomb: {
            if (p.param(0) == 0.0) return kInf;
            const double r2 = u * u + b * b;
            const double den = 3.0 * std::abs(3.0 * b * b - 2.0 * u * u);
            if (den == 0.0) return kInf;
            return std::sqrt(r2 * r2 / den);
        }
        case PotentialKind::yukawa: {
            if (p.param(0) == 0.0) return kInf;
            const double r = std::abs(u);
            const double mr = b * r;
            const double num = (mr + 1.0) * r * r;
            const double den = mr * mr * mr + 3.0 * mr * mr + 6.0 * mr + 6.0;
            return std::sqrt(num / den);
        }
    }
    return kIndeterminateScale;
}

}  // namespace

double scale_of_variation(const Potential& p, double x) {
    const double v1 = p.d1(x);
    const double v3 = p.d3(x);
    if (v3 != 0.0 && std::isfinite(v1) && std::isfinite(v3)) {
        return std::sqrt(std::abs(v1) / std::abs(v3));
    }
    if (v3 == 0.0 && v1 != 0.0) return kInf;
    // Both vanish (or the point is singular): fall back to the family limit.
    return p.stretch() * unstretched_scale(p, x / p.stretch());
}

double coulomb_scale_of_variation(double r) { return std::abs(r) / std::sqrt(6.0); }

double epsilon(double lambda, double L) {
    require(std::isfinite(lambda) && lambda > 0.0, "epsilon: lambda must be positive");
    require(!(L <= 0.0), "epsilon: L must be positive");
    if (std::isinf(L)) return 0.0;
    return lambda / L;
}

Potential rescale_slowly_varying(const Potential& p, double stretch) {
    require(std::isfinite(stretch) && stretch > 0.0, "rescale_slowly_varying: stretch must be positive");
    return p.with_stretch(p.stretch() * stretch);
}

}  // namespace pilotlim
