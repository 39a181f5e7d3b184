#include "breather/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "breather/functionals.hpp"
#include "breather/spectral.hpp"

namespace mkdv {
namespace {

constexpr int kPackets = 6;
// A Gaussian of width sigma has spectral amplitude exp(-(sigma dk)^2 / 2); a
// margin sigma * dk >= 7.5 keeps the band-limit cut below ~1e-12.
constexpr double kSpectralMargin = 7.5;

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Field packets(std::uint64_t seed, double k_max, double spread, const GridSpec& g) {
    const double nyquist = g.nyquist();
    if (!(k_max > 0.0) || k_max > 2.0 * nyquist / 3.0) {
        throw std::invalid_argument("make_perturbation: k_max must lie in (0, 2/3 of Nyquist]");
    }
    const double L = g.half_width();
    // Keep every packet 7.5 widths inside the box from its furthest centre.
    const double sigma_hi = std::min(2.6, (L - spread) / kSpectralMargin);
    if (!(sigma_hi > 0.0)) throw std::invalid_argument("make_perturbation: box too small");
    const double sigma_lo = 0.77 * sigma_hi;

    std::mt19937_64 gen(seed);
    std::vector<double> v(g.size(), 0.0);
    for (int p = 0; p < kPackets; ++p) {
        const double amp = 2.0 * uniform(gen) - 1.0;
        const double centre = (2.0 * uniform(gen) - 1.0) * spread;
        const double sigma = sigma_lo + (sigma_hi - sigma_lo) * uniform(gen);
        const double k = uniform(gen) * std::max(0.0, k_max - kSpectralMargin / sigma);
        const double phase = 2.0 * std::numbers::pi * uniform(gen);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double y = g.point(i) - centre;
            v[i] += amp * std::exp(-0.5 * y * y / (sigma * sigma)) * std::cos(k * y + phase);
        }
    }
    Field f = band_limit(Field(g, std::move(v)), k_max);
    const double norm = sobolev_norm(f, 2);
    if (!(norm > 0.0)) throw std::runtime_error("make_perturbation: degenerate draw");
    return (1.0 / norm) * f;
}

struct FitState {
    Field b;
    Field z;
    Field b1;
    Field b2;
    std::array<double, 2> r;

    double rnorm() const { return std::max(std::abs(r[0]), std::abs(r[1])); }
};

FitState fit_state(const Field& u, double t, double alpha, double beta, double x1, double x2) {
    const BreatherParams p{alpha, beta, x1, x2};
    const GridSpec& g = u.grid();
    Field b = breather(p, t, g);
    Field z = u - b;
    Field b1 = breather_dshift(p, t, g, Shift::x1);
    Field b2 = breather_dshift(p, t, g, Shift::x2);
    const std::array<double, 2> r{inner(b1, z), inner(b2, z)};
    return {std::move(b), std::move(z), std::move(b1), std::move(b2), r};
}

ShiftFit snapshot(const FitState& s, double x1, double x2, int iters, double tol) {
    ShiftFit f;
    f.x1 = x1;
    f.x2 = x2;
    f.ortho_residuals = s.r;
    f.newton_iters = iters;
    f.tolerance = tol;
    f.z_h2 = sobolev_norm(s.z, 2);
    return f;
}

double relative_gap(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

}  // namespace

Field make_perturbation(std::uint64_t seed, double eta, double k_max, const GridSpec& g) {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("make_perturbation: eta must be positive");
    }
    return eta * packets(seed, k_max, g.half_width() / 3.0, g);
}

Field random_direction(std::uint64_t seed, double k_max, double spread, const GridSpec& g) {
    if (!(spread >= 0.0)) throw std::invalid_argument("random_direction: negative spread");
    return packets(seed, k_max, spread, g);
}

const char* to_string(FitError::Reason r) noexcept {
    switch (r) {
        case FitError::Reason::far_from_orbit: return "far_from_orbit";
        case FitError::Reason::ill_conditioned: return "ill_conditioned";
        case FitError::Reason::max_iterations: return "max_iterations";
    }
    return "unknown";
}

ShiftFit fit_shifts(const Field& u, double t, double alpha, double beta,
                    std::array<double, 2> guess, const FitOptions& opts) {
    double x1 = guess[0];
    double x2 = guess[1];
    FitState s = fit_state(u, t, alpha, beta, x1, x2);
    const GridSpec& g = u.grid();
    const double b1_norm = std::sqrt(inner(s.b1, s.b1));
    // Residuals cannot be resolved below rounding of the products B_i * z.
    const double floor = 1e-14 * std::sqrt(inner(s.b, s.b)) * b1_norm;

    auto tolerance = [&](const FitState& st) {
        return std::max(opts.relative_tolerance * std::sqrt(inner(st.z, st.z)) * b1_norm, floor);
    };
    auto fail = [&](FitError::Reason reason, const FitState& st, int iters, const std::string& why) {
        ShiftFit last = snapshot(st, x1, x2, iters, tolerance(st));
        if (reason != FitError::Reason::far_from_orbit && last.z_h2 > opts.far_threshold) {
            reason = FitError::Reason::far_from_orbit;
        }
        std::ostringstream msg;
        msg << "fit_shifts: " << to_string(reason) << " (" << why << ", |z|_H2 = " << last.z_h2
            << ", residual = " << st.rnorm() << ")";
        return FitError(reason, last, msg.str());
    };

    int iters = 0;
    while (s.rnorm() > tolerance(s)) {
        if (iters >= opts.max_iterations) throw fail(FitError::Reason::max_iterations, s, iters, "iteration cap");
        const BreatherParams p{alpha, beta, x1, x2};
        const Field b11 = breather_dshift2(p, t, g, Shift::x1, Shift::x1);
        const Field b12 = breather_dshift2(p, t, g, Shift::x1, Shift::x2);
        const Field b22 = breather_dshift2(p, t, g, Shift::x2, Shift::x2);
        const double j11 = inner(b11, s.z) - inner(s.b1, s.b1);
        const double j12 = inner(b12, s.z) - inner(s.b1, s.b2);
        const double j22 = inner(b22, s.z) - inner(s.b2, s.b2);
        const double det = j11 * j22 - j12 * j12;
        const double scale = j11 * j11 + 2.0 * j12 * j12 + j22 * j22;
        if (!(std::abs(det) > 1e-12 * scale)) {
            throw fail(FitError::Reason::ill_conditioned, s, iters, "singular Jacobian");
        }
        const double d1 = -(j22 * s.r[0] - j12 * s.r[1]) / det;
        const double d2 = -(j11 * s.r[1] - j12 * s.r[0]) / det;

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving) {
            FitState trial = fit_state(u, t, alpha, beta, x1 + lambda * d1, x2 + lambda * d2);
            if (trial.rnorm() < s.rnorm()) {
                x1 += lambda * d1;
                x2 += lambda * d2;
                s = std::move(trial);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        ++iters;
        if (!accepted) throw fail(FitError::Reason::max_iterations, s, iters, "no descent along the Newton step");
    }

    ShiftFit out = snapshot(s, x1, x2, iters, tolerance(s));
    if (out.z_h2 > opts.far_threshold) {
        throw fail(FitError::Reason::far_from_orbit, s, iters, "orthogonal but not close");
    }
    return out;
}

Decomposition decompose(const Field& u, double t, double alpha, double beta,
                        std::array<double, 2> guess, const FitOptions& opts) {
    ShiftFit fit = fit_shifts(u, t, alpha, beta, guess, opts);
    Field z = u - breather({alpha, beta, fit.x1, fit.x2}, t, u.grid());
    return {std::move(z), fit};
}

void StabilityConfig::validate() const {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
        throw std::invalid_argument("stability: alpha and beta must be positive");
    }
    if (!(eta >= 0.0) || eta > kMaxEta) {
        std::ostringstream msg;
        msg << "stability: eta = " << eta << " outside [0, " << kMaxEta
            << "] (small-perturbation regime)";
        throw std::invalid_argument(msg.str());
    }
    if (!(t_end > 0.0)) throw std::invalid_argument("stability: t_end must be positive");
    EvolutionConfig ev = evolution;
    ev.t_end = t_end;
    ev.validate();
}

bool StabilityReport::passed() const noexcept {
    if (!complete) return false;
    if (eta == 0.0) return sup_z <= 1e-6;
    return sup_ratio <= sup_ratio_limit && growth_ratio <= growth_limit;
}

StabilityReport run_stability(const StabilityConfig& cfg, const GridSpec& g) {
    cfg.validate();
    StabilityReport rep;
    rep.eta = cfg.eta;
    rep.sup_ratio_limit = cfg.sup_ratio_limit;
    rep.growth_limit = cfg.growth_limit;

    Field u0 = breather(cfg.p, 0.0, g);
    if (cfg.eta > 0.0) {
        const Field pert = make_perturbation(cfg.seed, cfg.eta, cfg.k_max, g);
        u0 = cfg.flip_sign ? u0 - pert : u0 + pert;
    }

    EvolutionConfig ev = cfg.evolution;
    ev.t_end = cfg.t_end;
    ev.alpha = cfg.p.alpha;
    ev.beta = cfg.p.beta;
    Trajectory traj;
    bool evolved = true;
    try {
        traj = evolve(u0, ev);
    } catch (const EvolutionFault& e) {
        traj = e.partial();
        rep.failure = e.what();
        evolved = false;
    }

    std::array<double, 2> guess{cfg.p.x1, cfg.p.x2};
    bool fitted = true;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        try {
            const Decomposition d =
                decompose(traj.snapshots[i], traj.times[i], cfg.p.alpha, cfg.p.beta, guess, cfg.fit);
            guess = {d.fit.x1, d.fit.x2};
            rep.times.push_back(traj.times[i]);
            rep.z_h2_norms.push_back(d.fit.z_h2);
            rep.shift_tracks.push_back(d.fit);
            rep.conserved.push_back(traj.conserved_series[i]);
            rep.snapshots.push_back(traj.snapshots[i]);
        } catch (const FitError& e) {
            std::ostringstream msg;
            msg << e.what() << " at t = " << traj.times[i];
            rep.failure = msg.str();
            fitted = false;
            break;
        }
    }
    rep.complete = evolved && fitted;

    if (!rep.z_h2_norms.empty()) {
        rep.sup_z = *std::max_element(rep.z_h2_norms.begin(), rep.z_h2_norms.end());
        rep.sup_ratio = cfg.eta > 0.0 ? rep.sup_z / cfg.eta : 0.0;
        const double z0 = rep.z_h2_norms.front();
        rep.growth_ratio = z0 > 0.0 ? rep.sup_z / z0 : 0.0;
    }
    if (!traj.empty()) rep.drift = conservation_drift(traj, cfg.p.alpha, cfg.p.beta);
    return rep;
}

std::vector<BreatherParams> default_suite_params() {
    return {{1.0, 1.0, 0.0, 0.0}, {1.0, 2.0, 0.0, 0.0}, {2.0, 1.0, 0.0, 0.0}, {0.7, 1.3, 0.0, 0.0}};
}

std::vector<double> default_suite_times() { return {0.0, 0.37}; }

std::vector<CheckResult> run_identity_suite(const std::vector<BreatherParams>& params,
                                            const std::vector<double>& times, const GridSpec& g,
                                            const IdentitySuiteOptions& opts) {
    std::vector<CheckResult> out;
    for (const BreatherParams& p : params) {
        for (double t : times) {
            auto add = [&](const char* name, double value, double tol, bool relative = false) {
                out.push_back({name, p, t, value, tol, relative, value <= tol});
            };
            const Field b = breather(p, t, g);
            const double a = p.alpha;
            const double be = p.beta;
            add("mass", std::abs(mass(b) - 4.0 * be), 1e-10);
            add("energy", std::abs(energy(b) - 4.0 / 3.0 * be * p.gamma()), 1e-9);
            add("elliptic", elliptic_residual(opts.amplitude_scale * b, a, be).sup_norm(), 1e-6);
            add("second_order", second_order_identity_residual(p, t, g).sup_norm(), 1e-6);

            const StructureResiduals r = verify_structure(p, t, g);
            add("kernel_x1", r.kernel_x1, 1e-6);
            add("kernel_x2", r.kernel_x2, 1e-6);
            add("scale_alpha", r.scale_alpha, 1e-5);
            add("scale_beta", r.scale_beta, 1e-5);
            add("b0", r.b0, 1e-5);

            const double target = 32.0 * a * a * be;
            const double qa = quadratic_form(breather_dscale(p, t, g, Scale::alpha), b, a, be);
            const double qb = quadratic_form(breather_dscale(p, t, g, Scale::beta), b, a, be);
            add("qform_alpha", relative_gap(qa, target), 1e-4, true);
            add("qform_beta", relative_gap(qb, -target), 1e-4, true);
        }
    }
    return out;
}

SpectrumExperiment run_spectrum_experiment(const BreatherParams& p, double t, const GridSpec& g,
                                           std::size_t k) {
    const Field b = breather(p, t, g);
    const OperatorMatrix m = assemble_L(g, b, p.alpha, p.beta, t);
    SpectrumExperiment ex;
    ex.symmetry_defect = m.symmetry_defect();
    ex.report = spectrum(m, k);
    const SpectrumReport& r = ex.report;
    const std::size_t classified = r.n_negative + r.kernel_count;
    ex.min_above_kernel = classified < r.eigenvalues.size() ? r.eigenvalues[classified]
                                                            : std::numeric_limits<double>::infinity();
    ex.classification_ok = r.n_negative == 1 && r.kernel_count == 2 &&
                           ex.min_above_kernel >= 0.98 * r.essential_edge_theory;
    return ex;
}

double loglog_slope(const std::vector<double>& eps, const std::vector<double>& r) {
    if (eps.size() != r.size() || eps.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two matching samples");
    }
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        mx += std::log(eps[i]) / n;
        my += std::log(std::abs(r[i])) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double dx = std::log(eps[i]) - mx;
        sxy += dx * (std::log(std::abs(r[i])) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<double> breather_remainders(const BreatherParams& p, double t, const Field& direction,
                                        const std::vector<double>& eps) {
    std::vector<double> out;
    out.reserve(eps.size());
    for (double e : eps) out.push_back(expansion_remainder(p, t, e * direction));
    return out;
}

GridSpec grid_for_rate(double rate, const GridSpec& base) {
    if (!(rate > 0.0)) throw std::invalid_argument("grid_for_rate: rate must be positive");
    const double L0 = base.half_width();
    const double L = std::max(L0, L0 / rate);
    const double half_n = 0.5 * static_cast<double>(base.size()) * L / L0;
    return GridSpec::make(L, 2 * static_cast<std::size_t>(std::ceil(half_n - 1e-9)));
}

SolitonCase run_soliton_case(double c, const GridSpec& g, std::uint64_t seed) {
    SolitonCase sc;
    sc.c = c;
    sc.half_width = g.half_width();
    sc.n_points = g.size();
    const Field q = soliton({c, 0.0}, 0.0, g);
    sc.mass = mass(q);
    sc.mass_error = std::abs(sc.mass - 2.0 * std::sqrt(c));
    sc.mass_derivative = soliton_mass_derivative(c, g);
    sc.ode_residual = soliton_ode_residual(q, c).sup_norm();
    sc.elliptic_limit = elliptic_residual(q, 0.0, std::sqrt(c)).sup_norm();
    sc.kernel_form = soliton_quadratic_form(c, derivative(q, 1));

    const Field w = random_direction(seed, 4.0, 2.0 / std::sqrt(c), g);
    std::vector<double> rem;
    for (double e : kExpansionEps) rem.push_back(soliton_expansion_remainder(c, e * w));
    sc.expansion_slope = loglog_slope(kExpansionEps, rem);
    return sc;
}

}  // namespace mkdv
