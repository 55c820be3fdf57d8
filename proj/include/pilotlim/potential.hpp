#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace pilotlim {

enum class PotentialKind { free, linear, harmonic, sinusoidal, soft_coulomb, yukawa };

std::string_view to_string(PotentialKind kind);
std::optional<PotentialKind> parse_potential_kind(std::string_view name);

/// Value returned by scale_of_variation when V' and V''' vanish together and
/// no limit along x exists.
inline constexpr double kIndeterminateScale = std::numeric_limits<double>::quiet_NaN();

/// Analytic external potential with closed-form derivatives.
///
/// Catalog (before stretching, r = |x|):
///   free          V = 0
///   linear        V = slope * x
///   harmonic      V = coefficient * x^2          (coefficient = m w^2 / 2)
///   sinusoidal    V = amplitude * sin(2 pi x / period)
///   soft_coulomb  V = coupling / sqrt(x^2 + softening^2), softening > 0
///   yukawa        V = coupling * exp(-screening r) / r  (singular at x = 0)
///
/// A stretch L evaluates V(x / L); derivatives carry the chain-rule factors.
class Potential {
public:
    Potential() = default;

    static Potential free();
    static Potential linear(double slope);
    static Potential harmonic(double coefficient);
    static Potential sinusoidal(double amplitude, double period);
    static Potential soft_coulomb(double coupling, double softening);
    static Potential yukawa(double coupling, double screening);

    PotentialKind kind() const noexcept { return kind_; }
    double param(std::size_t i) const noexcept { return params_[i]; }
    double stretch() const noexcept { return stretch_; }

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    double d3(double x) const;

    /// True if the closed forms are finite everywhere on the real line.
    bool is_regular() const noexcept { return kind_ != PotentialKind::yukawa; }

    Potential with_stretch(double stretch) const;

    bool operator==(const Potential&) const = default;

private:
    Potential(PotentialKind kind, double a, double b);

    // Derivative of the unstretched profile at u = x / stretch.
    double raw(double u, int order) const;

    PotentialKind kind_ = PotentialKind::free;
    std::array<double, 2> params_{0.0, 0.0};
    double stretch_ = 1.0;
};

double evaluate(const Potential& p, double x);
double evaluate_d1(const Potential& p, double x);
double evaluate_d3(const Potential& p, double x);

/// L(x) = sqrt(|V'| / |V'''|). +inf where V''' = 0 and V' != 0; where both
/// vanish, the limit along x for the catalog family, else kIndeterminateScale.
double scale_of_variation(const Potential& p, double x);

/// Closed-form scale of variation of the pure 1/r Coulomb potential, r / sqrt(6).
double coulomb_scale_of_variation(double r);

/// epsilon = lambda / L; 0 when L is infinite.
double epsilon(double lambda, double L);

Potential rescale_slowly_varying(const Potential& p, double stretch);

}  // namespace pilotlim
