#pragma once

#include "breather/grid.hpp"

namespace mkdv {

/// Shape (alpha, beta) and shift (x1, x2) parameters of an mKdV breather.
struct BreatherParams {
    double alpha = 1.0;
    double beta = 1.0;
    double x1 = 0.0;
    double x2 = 0.0;

    /// Phase velocity parameter alpha^2 - 3 beta^2.
    double delta() const noexcept { return alpha * alpha - 3.0 * beta * beta; }
    /// Envelope velocity parameter 3 alpha^2 - beta^2 (the envelope moves at -gamma).
    double gamma() const noexcept { return 3.0 * alpha * alpha - beta * beta; }
    /// (alpha^2 + beta^2)^2, the constant term of the linearized operator.
    double scale4() const noexcept {
        const double s = alpha * alpha + beta * beta;
        return s * s;
    }
};

struct SolitonParams {
    double c = 1.0;
    double x0 = 0.0;
};

struct VelocityParams {
    double delta;
    double gamma;
};

enum class Shift { x1, x2 };
enum class Scale { alpha, beta };

VelocityParams velocity_params(const BreatherParams& p) noexcept;

/// Internal period in the frame moving with the envelope: pi / (alpha (alpha^2 + beta^2)).
double internal_period(const BreatherParams& p);

/**
 * Samples of 2 sqrt(2) d/dx arctan((beta/alpha) sin(alpha(x + delta t + x1)) /
 * cosh(beta(x + gamma t + x2))), with the x-derivative expanded in closed form.
 *
 * The profile is evaluated at the periodic image whose envelope centre lies in
 * the box, and is rolled off to zero by a C-infinity taper over the outermost
 * units of that image (only where the profile is below ~1e-10), so the sampled
 * field is smooth and periodic.
 */
Field breather(const BreatherParams& p, double t, const GridSpec& g,
               TailPolicy policy = TailPolicy::lenient);

/// Exact partial derivative with respect to x1 or x2 (B1, B2).
Field breather_dshift(const BreatherParams& p, double t, const GridSpec& g, Shift which);

/// Exact mixed second derivative with respect to two shifts.
Field breather_dshift2(const BreatherParams& p, double t, const GridSpec& g, Shift first,
                       Shift second);

/// Exact partial derivative with respect to alpha or beta.
Field breather_dscale(const BreatherParams& p, double t, const GridSpec& g, Scale which);

/// (alpha Lambda_beta B + beta Lambda_alpha B) / (8 alpha beta (alpha^2 + beta^2)).
Field breather_b0(const BreatherParams& p, double t, const GridSpec& g);

/// Time derivative delta B1 + gamma B2.
Field breather_dt(const BreatherParams& p, double t, const GridSpec& g);

/// sqrt(c) sqrt(2) sech(sqrt(c) (x - c t - x0)), periodic image centred in the box.
Field soliton(const SolitonParams& sp, double t, const GridSpec& g,
              TailPolicy policy = TailPolicy::lenient);

/// Width of the roll-off band for a profile decaying like exp(-rate |x|).
double taper_width(const GridSpec& g, double rate) noexcept;

}  // namespace mkdv
