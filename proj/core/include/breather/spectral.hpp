#pragma once

#include <complex>
#include <vector>

#include "breather/grid.hpp"

namespace mkdv {

/// r2c Fourier coefficients (N/2 + 1 entries), normalized so that
/// f(x_i) = sum_k c_k exp(i k (x_i + L)) over the full symmetric spectrum.
using Spectrum = std::vector<std::complex<double>>;

Spectrum to_spectrum(const Field& f);
Field from_spectrum(const GridSpec& grid, Spectrum coefficients);

/**
 * Fourier differentiation of order 1..4.
 *
 * Odd orders drop the Nyquist mode so that the operator stays real and
 * antisymmetric; even orders keep it.
 */
Field derivative(const Field& f, int order);

/// Trapezoid sum h * sum f_i over the periodic box.
double integrate(const Field& f, TailPolicy policy = TailPolicy::lenient);

/// L2 inner product, h * sum a_i b_i.
double inner(const Field& a, const Field& b);

/// g(x_i) = integral of f from -L to x_i, computed spectrally; g(x_0) = 0.
Field cumulative_integral(const Field& f, TailPolicy policy = TailPolicy::lenient);

/// sqrt(sum_{j<=k} integral (d^j f)^2) for k in {0, 1, 2}.
double sobolev_norm(const Field& f, int k);

/// Integral of f^2 evaluated from the Fourier coefficients.
double spectral_energy(const Field& f);

/// Zeroes every mode with |wavenumber| > k_max (and the Nyquist mode).
Field band_limit(const Field& f, double k_max);

}  // namespace mkdv
