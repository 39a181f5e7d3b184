#pragma once

#include "breather/closed_forms.hpp"
#include "breather/grid.hpp"

namespace mkdv {

/// Conserved quantities of one snapshot, with the Lyapunov combination for a
/// given (alpha, beta).
struct FunctionalValues {
    double mass = 0.0;
    double energy = 0.0;
    double f_value = 0.0;
    double lyapunov = 0.0;
    double at_time = 0.0;
};

/// M[u] = 1/2 int u^2.
double mass(const Field& u, TailPolicy policy = TailPolicy::lenient);
/// E[u] = 1/2 int u_x^2 - 1/4 int u^4.
double energy(const Field& u, TailPolicy policy = TailPolicy::lenient);
/// F[u] = 1/2 int u_xx^2 - 5/2 int u^2 u_x^2 + 1/4 int u^6.
double second_energy(const Field& u, TailPolicy policy = TailPolicy::lenient);

/// H[u] = F + 2(beta^2 - alpha^2) E + (alpha^2 + beta^2)^2 M.
double lyapunov(const Field& u, double alpha, double beta);
double lyapunov_from(double mass, double energy, double f_value, double alpha, double beta) noexcept;

FunctionalValues evaluate_functionals(const Field& u, double alpha, double beta, double t = 0.0);

/// B_4x - 2(beta^2-alpha^2)(B_xx + B^3) + (alpha^2+beta^2)^2 B + 5 B B_x^2
/// + 5 B^2 B_xx + 3/2 B^5, pointwise.  alpha = 0 is admitted (soliton limit).
Field elliptic_residual(const Field& b, double alpha, double beta);

/// B_xt + 2B int_{-L}^x B B_t - (alpha^2+beta^2)^2 B - 2(beta^2-alpha^2) int_{-L}^x B_t.
Field second_order_identity_residual(const BreatherParams& p, double t, const GridSpec& g,
                                     TailPolicy policy = TailPolicy::lenient);

/// Q'' - c Q + Q^3, pointwise.
Field soliton_ode_residual(const Field& q, double c);

struct MassDerivative {
    double numeric;
    double analytic;
};

/// Centred difference of M[Q_c] in c against c^{-1/2}.
MassDerivative soliton_mass_derivative(double c, const GridSpec& g, double step = 1e-4);

/// 1/2 int [z_x^2 + (c - 3 Q_c^2) z^2], the Hessian of E + cM at Q_c.
double soliton_quadratic_form(double c, const Field& z);

/// (E + cM)[Q_c + z] - (E + cM)[Q_c] - soliton_quadratic_form(c, z).
double soliton_expansion_remainder(double c, const Field& z);

}  // namespace mkdv
