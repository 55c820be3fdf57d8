#include "pilotlim/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "pilotlim/error.hpp"

namespace pilotlim {
namespace {

// fftw_plan creation is not thread safe; execution of an existing plan on
// new arrays is.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        auto* buf = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void execute(std::span<Complex> data, int sign) {
    if (data.empty()) return;
    fftw_plan p = plan_cache().get(data.size(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, ptr, ptr);
}

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

}  // namespace

void dft_forward(std::span<Complex> data) { execute(data, FFTW_FORWARD); }
void dft_backward(std::span<Complex> data) { execute(data, FFTW_BACKWARD); }

MomentumField fourier_transform(const ComplexField& f) {
    const auto& g = f.grid;
    std::vector<Complex> v = f.values;
    dft_forward(v);
    const double scale = g.dx() * kInvSqrt2Pi;
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] *= scale * std::polar(1.0, -g.k(j) * g.x_min());
    }
    return MomentumField(g, std::move(v));
}

ComplexField inverse_fourier_transform(const MomentumField& f, double time) {
    const auto& g = f.grid;
    std::vector<Complex> v = f.values;
    const double scale = g.dk() * kInvSqrt2Pi;
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] *= scale * std::polar(1.0, g.k(j) * g.x_min());
    }
    dft_backward(v);
    return ComplexField(g, std::move(v), time);
}

namespace {

// Multiplies the spectrum by (ik)^order; drops the Nyquist bin for odd orders.
std::vector<Complex> differentiate(const Grid1D& g, std::vector<Complex> v, int order) {
    const std::size_t n = g.size();
    dft_forward(v);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = g.k(j);
        Complex factor;
        if (order == 1) {
            factor = (n % 2 == 0 && j == n / 2) ? Complex{0.0, 0.0} : Complex{0.0, k};
        } else {
            factor = Complex{-k * k, 0.0};
        }
        v[j] *= factor * inv_n;
    }
    dft_backward(v);
    return v;
}

}  // namespace

ComplexField spectral_gradient(const ComplexField& f) {
    return ComplexField(f.grid, differentiate(f.grid, f.values, 1), f.time);
}

ComplexField spectral_laplacian(const ComplexField& f) {
    return ComplexField(f.grid, differentiate(f.grid, f.values, 2), f.time);
}

std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> f, int order) {
    require(order == 1 || order == 2, "spectral_derivative: order must be 1 or 2");
    require(f.size() == grid.size(), "spectral_derivative: size mismatch");
    std::vector<Complex> v(f.begin(), f.end());
    v = differentiate(grid, std::move(v), order);
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j].real();
    return out;
}

MomentumAmplitude::MomentumAmplitude(ComplexField position_space) : field_(std::move(position_space)) {}

MomentumAmplitude::MomentumAmplitude(const MomentumField& momentum_space)
    : field_(inverse_fourier_transform(momentum_space)) {}

Complex MomentumAmplitude::operator()(double k) const {
    const auto& g = field_.grid;
    // e^{-ik x_j} by recurrence from e^{-ik x_min}, re-seeded periodically to
    // bound accumulated rounding.
    Complex sum{0.0, 0.0};
    const Complex step = std::polar(1.0, -k * g.dx());
    Complex phase{};
    for (std::size_t j = 0; j < field_.size(); ++j) {
        if (j % 64 == 0) phase = std::polar(1.0, -k * g.x(j));
        sum += field_.values[j] * phase;
        phase *= step;
    }
    return sum * (g.dx() * kInvSqrt2Pi);
}

}  // namespace pilotlim
