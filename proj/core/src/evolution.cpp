#include "breather/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "breather/detail/fft.hpp"
#include "breather/spectral.hpp"

namespace mkdv {
namespace {

using cplx = std::complex<double>;

constexpr std::size_t kContourPoints = 64;

// Spectral state and scratch space for one trajectory.  Coefficients are
// normalized: u(x_i) = sum_j v_j exp(i k_j (x_i + L)) over the full spectrum.
class Stepper {
public:
    Stepper(const GridSpec& g, bool dealias)
        : n_(g.size()),
          dealias_(dealias),
          fft_(n_),
          fft_pad_(dealias ? 2 * n_ : n_),
          ik_(fft_.spectrum_size()),
          phys_(fft_pad_.size()),
          spec_pad_(fft_pad_.spectrum_size()) {
        for (std::size_t j = 0; j < ik_.size(); ++j) ik_[j] = cplx(0.0, g.wavenumber(j));
        ik_[n_ / 2] = 0.0;
    }

    std::size_t modes() const noexcept { return ik_.size(); }
    const std::vector<cplx>& ik() const noexcept { return ik_; }

    // -ik * FFT(u^3), Nyquist excluded.
    void nonlinear(const std::vector<cplx>& v, std::vector<cplx>& out) {
        const std::size_t m = fft_pad_.size();
        std::fill(spec_pad_.begin(), spec_pad_.end(), cplx(0.0));
        const std::size_t keep = dealias_ ? n_ / 2 : n_ / 2 + 1;
        std::copy_n(v.begin(), keep, spec_pad_.begin());
        fft_pad_.inverse(spec_pad_, phys_);
        for (double& u : phys_) u = u * u * u;
        fft_pad_.forward(phys_, spec_pad_);
        const double scale = 1.0 / static_cast<double>(m);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = -ik_[j] * (spec_pad_[j] * scale);
    }

    std::vector<cplx> to_coefficients(const Field& u) const {
        std::vector<cplx> v(modes());
        fft_.forward(u.samples(), v);
        const double scale = 1.0 / static_cast<double>(n_);
        for (cplx& c : v) c *= scale;
        return v;
    }

    std::vector<double> to_samples(const std::vector<cplx>& v) const {
        std::vector<cplx> tmp = v;
        std::vector<double> out(n_);
        fft_.inverse(tmp, out);
        return out;
    }

private:
    std::size_t n_;
    bool dealias_;
    detail::RealFft fft_;
    detail::RealFft fft_pad_;
    std::vector<cplx> ik_;
    std::vector<double> phys_;
    std::vector<cplx> spec_pad_;
};

// Linear symbol of u_t = -u_xxx: i k^3 (zero at Nyquist).
std::vector<cplx> linear_symbol(const Stepper& s) {
    std::vector<cplx> lin(s.modes());
    for (std::size_t j = 0; j < lin.size(); ++j) {
        const double k = s.ik()[j].imag();
        lin[j] = cplx(0.0, k * k * k);
    }
    return lin;
}

struct EtdCoefficients {
    std::vector<cplx> e, e2, q, f1, f2, f3;
};

// Kassam-Trefethen contour averages over a full circle of radius 1 around dt*L.
EtdCoefficients etd_coefficients(const std::vector<cplx>& lin, double dt) {
    EtdCoefficients c;
    const std::size_t n = lin.size();
    for (auto* v : {&c.e, &c.e2, &c.q, &c.f1, &c.f2, &c.f3}) v->resize(n);
    std::vector<cplx> roots(kContourPoints);
    for (std::size_t m = 0; m < kContourPoints; ++m) {
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(m) + 0.5) /
                             static_cast<double>(kContourPoints);
        roots[m] = std::polar(1.0, theta);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const cplx z = dt * lin[j];
        c.e[j] = std::exp(z);
        c.e2[j] = std::exp(0.5 * z);
        cplx q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
        for (const cplx& r : roots) {
            const cplx lr = z + r;
            const cplx el = std::exp(lr);
            const cplx lr3 = lr * lr * lr;
            q += (std::exp(0.5 * lr) - 1.0) / lr;
            f1 += (-4.0 - lr + el * (4.0 - 3.0 * lr + lr * lr)) / lr3;
            f2 += (2.0 + lr + el * (-2.0 + lr)) / lr3;
            f3 += (-4.0 - 3.0 * lr - lr * lr + el * (4.0 - lr)) / lr3;
        }
        const double w = dt / static_cast<double>(kContourPoints);
        c.q[j] = w * q;
        c.f1[j] = w * f1;
        c.f2[j] = w * f2;
        c.f3[j] = w * f3;
    }
    return c;
}

// phi_1..phi_3 of z and z/2 for the Hochbruck-Ostermann scheme, same contour.
struct PhiTable {
    std::vector<cplx> e, e2, p1, p2, p3, h1, h2, h3;  // h* are phi_j(z/2)
};

PhiTable phi_table(const std::vector<cplx>& lin, double dt) {
    PhiTable t;
    const std::size_t n = lin.size();
    for (auto* v : {&t.e, &t.e2, &t.p1, &t.p2, &t.p3, &t.h1, &t.h2, &t.h3}) v->resize(n);
    std::vector<cplx> roots(kContourPoints);
    for (std::size_t m = 0; m < kContourPoints; ++m) {
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(m) + 0.5) /
                             static_cast<double>(kContourPoints);
        roots[m] = std::polar(1.0, theta);
    }
    auto phis = [&](cplx z, cplx& f1, cplx& f2, cplx& f3) {
        f1 = f2 = f3 = 0.0;
        for (const cplx& r : roots) {
            const cplx w = z + r;
            const cplx em1 = std::exp(w) - 1.0;
            f1 += em1 / w;
            f2 += (em1 - w) / (w * w);
            f3 += (em1 - w - 0.5 * w * w) / (w * w * w);
        }
        const double inv = 1.0 / static_cast<double>(kContourPoints);
        f1 *= inv;
        f2 *= inv;
        f3 *= inv;
    };
    for (std::size_t j = 0; j < n; ++j) {
        const cplx z = dt * lin[j];
        t.e[j] = std::exp(z);
        t.e2[j] = std::exp(0.5 * z);
        phis(z, t.p1[j], t.p2[j], t.p3[j]);
        phis(0.5 * z, t.h1[j], t.h2[j], t.h3[j]);
    }
    return t;
}

bool all_finite(const std::vector<cplx>& v) {
    return std::all_of(v.begin(), v.end(), [](const cplx& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

}  // namespace

std::string_view to_string(Scheme s) noexcept {
    switch (s) {
        case Scheme::etdrk4: return "etdrk4";
        case Scheme::etdrk4_ho: return "etdrk4_ho";
        case Scheme::ifrk4: return "ifrk4";
    }
    return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
    for (Scheme s : {Scheme::etdrk4, Scheme::etdrk4_ho, Scheme::ifrk4}) {
        if (to_string(s) == name) return s;
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (etdrk4, etdrk4_ho or ifrk4)");
}

void EvolutionConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("evolution: dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("evolution: t_end must be positive");
    }
    if (output_stride == 0) throw std::invalid_argument("evolution: output_stride must be >= 1");
}

std::size_t EvolutionConfig::steps() const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t_end / dt)));
}

Field rhs(const Field& u, bool dealias) {
    Stepper s(u.grid(), dealias);
    const std::vector<cplx> v = s.to_coefficients(u);
    std::vector<cplx> out(v.size());
    s.nonlinear(v, out);
    const std::vector<cplx> lin = linear_symbol(s);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += lin[j] * v[j];
    return Field(u.grid(), s.to_samples(out));
}

Trajectory evolve(const Field& u0, const EvolutionConfig& cfg) {
    cfg.validate();
    const GridSpec& g = u0.grid();
    Stepper s(g, cfg.dealias);
    const std::vector<cplx> lin = linear_symbol(s);
    const std::size_t steps = cfg.steps();
    const std::size_t m = s.modes();

    Trajectory traj;
    const std::size_t outputs = steps / cfg.output_stride + 1;
    traj.times.reserve(outputs);
    traj.snapshots.reserve(outputs);
    traj.conserved_series.reserve(outputs);

    auto record = [&](const Field& u, double t) {
        if (cfg.strict_tails) {
            try {
                check_tails(u, TailPolicy::strict, "evolve");
            } catch (const TailError& e) {
                const double last = traj.empty() ? 0.0 : traj.times.back();
                throw EvolutionFault(EvolutionFault::Reason::tail_breach, last, std::move(traj),
                                     std::string(e.what()) + " at t = " + std::to_string(t));
            }
        }
        traj.times.push_back(t);
        traj.conserved_series.push_back(evaluate_functionals(u, cfg.alpha, cfg.beta, t));
        traj.snapshots.push_back(u);
    };

    std::vector<cplx> v = s.to_coefficients(u0);
    record(u0, 0.0);

    std::vector<cplx> nv(m), na(m), nb(m), nc(m), a(m), b(m), c(m);
    const double dt = cfg.dt;
    EtdCoefficients etd;
    PhiTable ph;
    std::vector<cplx> e(m), e2(m), d(m), nd(m);
    if (cfg.scheme == Scheme::etdrk4) {
        etd = etd_coefficients(lin, dt);
    } else if (cfg.scheme == Scheme::etdrk4_ho) {
        ph = phi_table(lin, dt);
    } else {
        for (std::size_t j = 0; j < m; ++j) {
            e[j] = std::exp(dt * lin[j]);
            e2[j] = std::exp(0.5 * dt * lin[j]);
        }
    }

    double last_valid = 0.0;
    for (std::size_t step = 1; step <= steps; ++step) {
        if (cfg.scheme == Scheme::etdrk4) {
            s.nonlinear(v, nv);
            for (std::size_t j = 0; j < m; ++j) a[j] = etd.e2[j] * v[j] + etd.q[j] * nv[j];
            s.nonlinear(a, na);
            for (std::size_t j = 0; j < m; ++j) b[j] = etd.e2[j] * v[j] + etd.q[j] * na[j];
            s.nonlinear(b, nb);
            for (std::size_t j = 0; j < m; ++j) {
                c[j] = etd.e2[j] * a[j] + etd.q[j] * (2.0 * nb[j] - nv[j]);
            }
            s.nonlinear(c, nc);
            for (std::size_t j = 0; j < m; ++j) {
                v[j] = etd.e[j] * v[j] + nv[j] * etd.f1[j] + 2.0 * (na[j] + nb[j]) * etd.f2[j] +
                       nc[j] * etd.f3[j];
            }
        } else if (cfg.scheme == Scheme::etdrk4_ho) {
            s.nonlinear(v, nv);
            for (std::size_t j = 0; j < m; ++j) a[j] = ph.e2[j] * v[j] + 0.5 * dt * ph.h1[j] * nv[j];
            s.nonlinear(a, na);
            for (std::size_t j = 0; j < m; ++j) {
                b[j] = ph.e2[j] * v[j] + dt * ((0.5 * ph.h1[j] - ph.h2[j]) * nv[j] + ph.h2[j] * na[j]);
            }
            s.nonlinear(b, nb);
            for (std::size_t j = 0; j < m; ++j) {
                c[j] = ph.e[j] * v[j] + dt * ((ph.p1[j] - 2.0 * ph.p2[j]) * nv[j] + ph.p2[j] * (na[j] + nb[j]));
            }
            s.nonlinear(c, nc);
            for (std::size_t j = 0; j < m; ++j) {
                const cplx a52 = 0.5 * ph.h2[j] - ph.p3[j] + 0.25 * ph.p2[j] - 0.5 * ph.h3[j];
                const cplx a54 = 0.25 * ph.h2[j] - a52;
                d[j] = ph.e2[j] * v[j] +
                       dt * ((0.5 * ph.h1[j] - 2.0 * a52 - a54) * nv[j] + a52 * (na[j] + nb[j]) + a54 * nc[j]);
            }
            s.nonlinear(d, nd);
            for (std::size_t j = 0; j < m; ++j) {
                v[j] = ph.e[j] * v[j] +
                       dt * ((ph.p1[j] - 3.0 * ph.p2[j] + 4.0 * ph.p3[j]) * nv[j] +
                             (4.0 * ph.p3[j] - ph.p2[j]) * nc[j] + (4.0 * ph.p2[j] - 8.0 * ph.p3[j]) * nd[j]);
            }
        } else {
            s.nonlinear(v, nv);
            for (std::size_t j = 0; j < m; ++j) a[j] = e2[j] * (v[j] + 0.5 * dt * nv[j]);
            s.nonlinear(a, na);
            for (std::size_t j = 0; j < m; ++j) b[j] = e2[j] * v[j] + 0.5 * dt * na[j];
            s.nonlinear(b, nb);
            for (std::size_t j = 0; j < m; ++j) c[j] = e[j] * v[j] + dt * e2[j] * nb[j];
            s.nonlinear(c, nc);
            for (std::size_t j = 0; j < m; ++j) {
                v[j] = e[j] * v[j] +
                       dt / 6.0 * (e[j] * nv[j] + 2.0 * e2[j] * (na[j] + nb[j]) + nc[j]);
            }
        }

        const double t = static_cast<double>(step) * dt;
        if (!all_finite(v)) {
            std::ostringstream msg;
            msg << "evolve: non-finite state at step " << step << " (t = " << t
                << "), last valid t = " << last_valid;
            throw EvolutionFault(EvolutionFault::Reason::non_finite, last_valid, std::move(traj),
                                 msg.str());
        }
        last_valid = t;
        if (step % cfg.output_stride == 0) record(Field(g, s.to_samples(v)), t);
    }
    return traj;
}

double ConservationDrift::max() const noexcept {
    return std::max({mass, energy, f_value, lyapunov});
}

ConservationDrift conservation_drift(const Trajectory& traj, double alpha, double beta) {
    if (traj.empty()) throw std::invalid_argument("conservation_drift: empty trajectory");
    auto rel = [](double x, double x0) { return std::abs(x - x0) / std::max(std::abs(x0), 1e-12); };
    const FunctionalValues& f0 = traj.conserved_series.front();
    const double h0 = lyapunov_from(f0.mass, f0.energy, f0.f_value, alpha, beta);
    ConservationDrift d;
    for (const FunctionalValues& f : traj.conserved_series) {
        d.mass = std::max(d.mass, rel(f.mass, f0.mass));
        d.energy = std::max(d.energy, rel(f.energy, f0.energy));
        d.f_value = std::max(d.f_value, rel(f.f_value, f0.f_value));
        const double h = lyapunov_from(f.mass, f.energy, f.f_value, alpha, beta);
        d.lyapunov = std::max(d.lyapunov, rel(h, h0));
    }
    return d;
}

}  // namespace mkdv
