#include "breather/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "breather/detail/dual.hpp"

namespace mkdv {
namespace {

using detail::Dual;
using detail::value_of;

constexpr double kTwoSqrt2 = 2.0 * std::numbers::sqrt2;
// Distance (in decay lengths) from the centre at which the roll-off may start.
constexpr double kTaperStartDecayLengths = 25.0;
constexpr double kMaxTaperWidth = 6.0;

void validate(const BreatherParams& p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
        throw std::invalid_argument("breather: alpha and beta must be positive");
    }
}

// Offset that moves `xi` into [-L, L).
double wrap_offset(double xi, double L) {
    return 2.0 * L * std::floor((xi + L) / (2.0 * L));
}

// Smooth roll-off: 1 inside |xi| <= L - w, 0 at |xi| = L, C-infinity in between.
template <typename S>
S taper(const S& xi, double L, double w) {
    using std::exp;
    if (w <= 0.0) return S(1.0);
    const double a = std::abs(value_of(xi));
    if (a <= L - w) return S(1.0);
    const S abs_xi = value_of(xi) < 0.0 ? -xi : xi;
    const S u = (abs_xi - (L - w)) / w;
    if (value_of(u) >= 1.0) return S(0.0);
    const S rising = exp(-1.0 / u);
    const S falling = exp(-1.0 / (1.0 - u));
    return falling / (rising + falling);
}

// One sample of the breather.  S is double or a (nested) dual number carrying
// derivatives with respect to the parameters.
template <typename S>
S breather_point(double x, double t, const S& a, const S& b, const S& x1, const S& x2,
                 double L, double w) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::tanh;
    const S delta = a * a - 3.0 * b * b;
    const S gamma = 3.0 * a * a - b * b;
    const S shift = gamma * t + x2;
    const double offset = wrap_offset(x + value_of(shift), L);
    const S xi = (x - offset) + shift;
    const S theta = a * ((x - offset) + delta * t + x1);
    const S phi = b * xi;

    const S amp = b / a;
    const S s = sin(theta);
    const S c = cos(theta);
    const S sech = 1.0 / cosh(phi);
    const S th = tanh(phi);
    const S g = amp * s * sech;
    const S gx = amp * sech * (a * c - b * s * th);
    return taper(xi, L, w) * (kTwoSqrt2 * gx / (1.0 + g * g));
}

template <typename Fn>
Field sample(const GridSpec& g, Fn&& fn) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g.point(i));
    return Field(g, std::move(v));
}

struct Seeds {
    double a = 0.0, b = 0.0, x1 = 0.0, x2 = 0.0;
};

Seeds seed_for(Shift s) {
    Seeds out;
    (s == Shift::x1 ? out.x1 : out.x2) = 1.0;
    return out;
}

Seeds seed_for(Scale s) {
    Seeds out;
    (s == Scale::alpha ? out.a : out.b) = 1.0;
    return out;
}

Field first_derivative(const BreatherParams& p, double t, const GridSpec& g, Seeds sd) {
    validate(p);
    using D1 = Dual<double>;
    const double L = g.half_width();
    const double w = taper_width(g, p.beta);
    const D1 a{p.alpha, sd.a}, b{p.beta, sd.b}, x1{p.x1, sd.x1}, x2{p.x2, sd.x2};
    return sample(g, [&](double x) { return breather_point(x, t, a, b, x1, x2, L, w).d; });
}

}  // namespace

VelocityParams velocity_params(const BreatherParams& p) noexcept {
    return {p.delta(), p.gamma()};
}

double internal_period(const BreatherParams& p) {
    validate(p);
    return std::numbers::pi / (p.alpha * (p.alpha * p.alpha + p.beta * p.beta));
}

double taper_width(const GridSpec& g, double rate) noexcept {
    const double L = g.half_width();
    return std::clamp(L - kTaperStartDecayLengths / rate, 0.0, kMaxTaperWidth);
}

Field breather(const BreatherParams& p, double t, const GridSpec& g, TailPolicy policy) {
    validate(p);
    const double L = g.half_width();
    const double w = taper_width(g, p.beta);
    Field f = sample(g, [&](double x) {
        return breather_point(x, t, p.alpha, p.beta, p.x1, p.x2, L, w);
    });
    check_tails(f, policy, "breather");
    return f;
}

Field breather_dshift(const BreatherParams& p, double t, const GridSpec& g, Shift which) {
    return first_derivative(p, t, g, seed_for(which));
}

Field breather_dshift2(const BreatherParams& p, double t, const GridSpec& g, Shift first,
                       Shift second) {
    validate(p);
    using D1 = Dual<double>;
    using D2 = Dual<D1>;
    const Seeds outer = seed_for(first);
    const Seeds inner = seed_for(second);
    const double L = g.half_width();
    const double w = taper_width(g, p.beta);
    const D2 a{D1{p.alpha, 0.0}, D1{0.0, 0.0}};
    const D2 b{D1{p.beta, 0.0}, D1{0.0, 0.0}};
    const D2 x1{D1{p.x1, inner.x1}, D1{outer.x1, 0.0}};
    const D2 x2{D1{p.x2, inner.x2}, D1{outer.x2, 0.0}};
    return sample(g, [&](double x) { return breather_point(x, t, a, b, x1, x2, L, w).d.d; });
}

Field breather_dscale(const BreatherParams& p, double t, const GridSpec& g, Scale which) {
    return first_derivative(p, t, g, seed_for(which));
}

Field breather_b0(const BreatherParams& p, double t, const GridSpec& g) {
    validate(p);
    const Field la = breather_dscale(p, t, g, Scale::alpha);
    const Field lb = breather_dscale(p, t, g, Scale::beta);
    const double denom = 8.0 * p.alpha * p.beta * (p.alpha * p.alpha + p.beta * p.beta);
    return (p.alpha / denom) * lb + (p.beta / denom) * la;
}

Field breather_dt(const BreatherParams& p, double t, const GridSpec& g) {
    const Field b1 = breather_dshift(p, t, g, Shift::x1);
    const Field b2 = breather_dshift(p, t, g, Shift::x2);
    return p.delta() * b1 + p.gamma() * b2;
}

Field soliton(const SolitonParams& sp, double t, const GridSpec& g, TailPolicy policy) {
    if (!(sp.c > 0.0)) throw std::invalid_argument("soliton: speed c must be positive");
    const double L = g.half_width();
    const double root_c = std::sqrt(sp.c);
    const double w = taper_width(g, root_c);
    const double amplitude = root_c * std::numbers::sqrt2;
    Field f = sample(g, [&](double x) {
        const double raw = x - sp.c * t - sp.x0;
        const double xi = raw - wrap_offset(raw, L);
        return taper(xi, L, w) * amplitude / std::cosh(root_c * xi);
    });
    check_tails(f, policy, "soliton");
    return f;
}

}  // namespace mkdv
