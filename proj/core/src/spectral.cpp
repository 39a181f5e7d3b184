#include "breather/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "breather/detail/fft.hpp"

namespace mkdv {
namespace detail {
namespace {

struct PlanPair {
    fftw_plan forward;
    fftw_plan inverse;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanPair plans_for(std::size_t n) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const int len = static_cast<int>(n);
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_r2c_1d(len, real, cplx, flags),
               fftw_plan_dft_c2r_1d(len, cplx, real, flags)};
    fftw_free(real);
    fftw_free(cplx);
    if (p.forward == nullptr || p.inverse == nullptr) {
        throw std::runtime_error("RealFft: FFTW planning failed");
    }
    cache.emplace(n, p);
    return p;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    const PlanPair p = plans_for(n);
    forward_plan_ = p.forward;
    inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<std::complex<double>> in, std::span<double> out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                         reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

}  // namespace detail

Spectrum to_spectrum(const Field& f) {
    const std::size_t n = f.size();
    detail::RealFft fft(n);
    Spectrum c(fft.spectrum_size());
    fft.forward(f.samples(), c);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : c) v *= scale;
    return c;
}

Field from_spectrum(const GridSpec& grid, Spectrum coefficients) {
    detail::RealFft fft(grid.size());
    if (coefficients.size() != fft.spectrum_size()) {
        throw std::invalid_argument("from_spectrum: coefficient count does not match grid");
    }
    std::vector<double> out(grid.size());
    fft.inverse(coefficients, out);
    return Field(grid, std::move(out));
}

Field derivative(const Field& f, int order) {
    if (order < 1 || order > 4) {
        throw std::invalid_argument("derivative: order must be 1, 2, 3 or 4");
    }
    const GridSpec& g = f.grid();
    Spectrum c = to_spectrum(f);
    const std::size_t nyq = g.size() / 2;
    const std::complex<double> i_unit(0.0, 1.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double k = g.wavenumber(j);
        std::complex<double> symbol = 1.0;
        for (int p = 0; p < order; ++p) symbol *= i_unit * k;
        c[j] *= symbol;
    }
    if (order % 2 == 1) c[nyq] = 0.0;
    return from_spectrum(g, std::move(c));
}

double integrate(const Field& f, TailPolicy policy) {
    check_tails(f, policy, "integrate");
    double s = 0.0;
    for (double v : f.samples()) s += v;
    return s * f.grid().spacing();
}

double inner(const Field& a, const Field& b) {
    require_same_grid(a, b, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid().spacing();
}

Field cumulative_integral(const Field& f, TailPolicy policy) {
    if (policy == TailPolicy::strict) {
        const double left = std::abs(f[0]);
        if (left > kTailThreshold) {
            throw TailError("cumulative_integral: field does not decay at the left end", left);
        }
    }
    const GridSpec& g = f.grid();
    Spectrum c = to_spectrum(f);
    const double mean = c[0].real();
    const std::size_t nyq = g.size() / 2;
    const std::complex<double> i_unit(0.0, 1.0);
    c[0] = 0.0;
    c[nyq] = 0.0;
    for (std::size_t j = 1; j < nyq; ++j) c[j] /= i_unit * g.wavenumber(j);
    const Field periodic = from_spectrum(g, std::move(c));
    const double start = periodic[0];
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = mean * (g.point(i) + g.half_width()) + periodic[i] - start;
    }
    out[0] = 0.0;
    return Field(g, std::move(out));
}

double spectral_energy(const Field& f) {
    const Spectrum c = to_spectrum(f);
    const std::size_t nyq = f.size() / 2;
    double s = std::norm(c[0]) + std::norm(c[nyq]);
    for (std::size_t j = 1; j < nyq; ++j) s += 2.0 * std::norm(c[j]);
    return s * f.grid().length();
}

double sobolev_norm(const Field& f, int k) {
    if (k < 0 || k > 2) throw std::invalid_argument("sobolev_norm: k must be 0, 1 or 2");
    double s = inner(f, f);
    if (k >= 1) {
        const Field fx = derivative(f, 1);
        s += inner(fx, fx);
    }
    if (k >= 2) {
        const Field fxx = derivative(f, 2);
        s += inner(fxx, fxx);
    }
    return std::sqrt(s);
}

Field band_limit(const Field& f, double k_max) {
    const GridSpec& g = f.grid();
    Spectrum c = to_spectrum(f);
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (g.wavenumber(j) > k_max) c[j] = 0.0;
    }
    c[g.size() / 2] = 0.0;
    return from_spectrum(g, std::move(c));
}

}  // namespace mkdv
