#include "breather/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "breather/spectral.hpp"

namespace mkdv {
namespace {

template <typename Fn>
Field pointwise(const GridSpec& g, Fn&& fn) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(i);
    return Field(g, std::move(v));
}

double sum_times_h(const GridSpec& g, const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s * g.spacing();
}

}  // namespace

double mass(const Field& u, TailPolicy policy) {
    check_tails(u, policy, "mass");
    return 0.5 * inner(u, u);
}

double energy(const Field& u, TailPolicy policy) {
    check_tails(u, policy, "energy");
    const Field ux = derivative(u, 1);
    std::vector<double> dens(u.size());
    for (std::size_t i = 0; i < dens.size(); ++i) {
        const double u2 = u[i] * u[i];
        dens[i] = 0.5 * ux[i] * ux[i] - 0.25 * u2 * u2;
    }
    return sum_times_h(u.grid(), dens);
}

double second_energy(const Field& u, TailPolicy policy) {
    check_tails(u, policy, "second_energy");
    const Field ux = derivative(u, 1);
    const Field uxx = derivative(u, 2);
    std::vector<double> dens(u.size());
    for (std::size_t i = 0; i < dens.size(); ++i) {
        const double u2 = u[i] * u[i];
        dens[i] = 0.5 * uxx[i] * uxx[i] - 2.5 * u2 * ux[i] * ux[i] + 0.25 * u2 * u2 * u2;
    }
    return sum_times_h(u.grid(), dens);
}

double lyapunov_from(double m, double e, double f, double alpha, double beta) noexcept {
    const double a2 = alpha * alpha;
    const double b2 = beta * beta;
    return f + 2.0 * (b2 - a2) * e + (a2 + b2) * (a2 + b2) * m;
}

double lyapunov(const Field& u, double alpha, double beta) {
    return lyapunov_from(mass(u), energy(u), second_energy(u), alpha, beta);
}

FunctionalValues evaluate_functionals(const Field& u, double alpha, double beta, double t) {
    FunctionalValues fv;
    fv.mass = mass(u);
    fv.energy = energy(u);
    fv.f_value = second_energy(u);
    fv.lyapunov = lyapunov_from(fv.mass, fv.energy, fv.f_value, alpha, beta);
    fv.at_time = t;
    return fv;
}

Field elliptic_residual(const Field& b, double alpha, double beta) {
    if (alpha < 0.0) throw std::invalid_argument("elliptic_residual: alpha must be >= 0");
    const double w = beta * beta - alpha * alpha;
    const double s = (alpha * alpha + beta * beta) * (alpha * alpha + beta * beta);
    const Field bx = derivative(b, 1);
    const Field bxx = derivative(b, 2);
    const Field b4 = derivative(b, 4);
    return pointwise(b.grid(), [&](std::size_t i) {
        const double v = b[i];
        const double v2 = v * v;
        return b4[i] - 2.0 * w * (bxx[i] + v2 * v) + s * v + 5.0 * v * bx[i] * bx[i] +
               5.0 * v2 * bxx[i] + 1.5 * v2 * v2 * v;
    });
}

Field second_order_identity_residual(const BreatherParams& p, double t, const GridSpec& g,
                                     TailPolicy policy) {
    const Field b = breather(p, t, g);
    const Field bt = breather_dt(p, t, g);
    const Field bxt = derivative(bt, 1);
    const Field int_bbt = cumulative_integral(b * bt, policy);
    const Field int_bt = cumulative_integral(bt, policy);
    const double w = p.beta * p.beta - p.alpha * p.alpha;
    const double s = p.scale4();
    return pointwise(g, [&](std::size_t i) {
        return bxt[i] + 2.0 * b[i] * int_bbt[i] - s * b[i] - 2.0 * w * int_bt[i];
    });
}

Field soliton_ode_residual(const Field& q, double c) {
    const Field qxx = derivative(q, 2);
    return pointwise(q.grid(), [&](std::size_t i) {
        return qxx[i] - c * q[i] + q[i] * q[i] * q[i];
    });
}

MassDerivative soliton_mass_derivative(double c, const GridSpec& g, double step) {
    if (!(c > 0.0)) throw std::invalid_argument("soliton_mass_derivative: c must be positive");
    if (!(step > 0.0) || c - step <= 0.5 * c) {
        throw std::invalid_argument("soliton_mass_derivative: c too small for the stencil");
    }
    const double up = mass(soliton({c + step, 0.0}, 0.0, g));
    const double down = mass(soliton({c - step, 0.0}, 0.0, g));
    return {(up - down) / (2.0 * step), 1.0 / std::sqrt(c)};
}

double soliton_quadratic_form(double c, const Field& z) {
    const Field q = soliton({c, 0.0}, 0.0, z.grid());
    const Field zx = derivative(z, 1);
    std::vector<double> dens(z.size());
    for (std::size_t i = 0; i < dens.size(); ++i) {
        dens[i] = zx[i] * zx[i] + (c - 3.0 * q[i] * q[i]) * z[i] * z[i];
    }
    return 0.5 * sum_times_h(z.grid(), dens);
}

double soliton_expansion_remainder(double c, const Field& z) {
    const Field q = soliton({c, 0.0}, 0.0, z.grid());
    const Field qz = q + z;
    const double h_qz = energy(qz) + c * mass(qz);
    const double h_q = energy(q) + c * mass(q);
    return h_qz - h_q - soliton_quadratic_form(c, z);
}

}  // namespace mkdv
