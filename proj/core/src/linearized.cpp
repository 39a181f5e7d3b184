#include "breather/linearized.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "breather/detail/fft.hpp"
#include "breather/functionals.hpp"
#include "breather/spectral.hpp"

namespace mkdv {
namespace {

double sup(const Field& f) { return f.sup_norm(); }

// First row of a circulant matrix with real even Fourier symbol `symbol(k)`.
// Entries are mirrored so that c[m] == c[n - m] holds exactly.
template <typename Symbol>
std::vector<double> even_circulant_row(const GridSpec& g, Symbol symbol) {
    const std::size_t n = g.size();
    detail::RealFft fft(n);
    std::vector<std::complex<double>> c(fft.spectrum_size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = symbol(g.wavenumber(j)) / static_cast<double>(n);
    std::vector<double> row(n);
    fft.inverse(c, row);
    for (std::size_t m = n / 2 + 1; m < n; ++m) row[m] = row[n - m];
    return row;
}

// First column of the spectral first-derivative matrix (Nyquist dropped),
// made exactly antisymmetric: col[n - m] == -col[m].
std::vector<double> derivative_column(const GridSpec& g) {
    const std::size_t n = g.size();
    detail::RealFft fft(n);
    std::vector<std::complex<double>> c(fft.spectrum_size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] = std::complex<double>(0.0, g.wavenumber(j)) / static_cast<double>(n);
    }
    c[n / 2] = 0.0;
    std::vector<double> col(n);
    fft.inverse(c, col);
    col[0] = 0.0;
    col[n / 2] = 0.0;
    for (std::size_t m = n / 2 + 1; m < n; ++m) col[m] = -col[n - m];
    return col;
}

std::vector<double> potential(const Field& b, double alpha, double beta) {
    const double w = beta * beta - alpha * alpha;
    const Field bx = derivative(b, 1);
    const Field bxx = derivative(b, 2);
    std::vector<double> v(b.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double b2 = b[i] * b[i];
        v[i] = 5.0 * bx[i] * bx[i] + 10.0 * b[i] * bxx[i] + 7.5 * b2 * b2 - 6.0 * w * b2;
    }
    return v;
}

// Multiplies every column of `a` by the circulant with positive even symbol
// `weight(k)`.
template <typename Weight>
void apply_circulant_to_columns(Eigen::MatrixXd& a, const GridSpec& g, Weight weight) {
    const std::size_t n = g.size();
    detail::RealFft fft(n);
    std::vector<std::complex<double>> c(fft.spectrum_size());
    std::vector<double> w(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) w[j] = weight(g.wavenumber(j)) / static_cast<double>(n);
    std::vector<double> col(n);
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        std::copy(a.col(j).data(), a.col(j).data() + n, col.begin());
        fft.forward(col, c);
        for (std::size_t q = 0; q < c.size(); ++q) c[q] *= w[q];
        fft.inverse(c, col);
        std::copy(col.begin(), col.end(), a.col(j).data());
    }
}

}  // namespace

double essential_edge(double alpha, double beta) noexcept {
    const double s = alpha * alpha + beta * beta;
    return beta >= alpha ? s * s : 4.0 * alpha * alpha * beta * beta;
}

Field apply_L(const Field& z, const Field& b, double alpha, double beta) {
    require_same_grid(z, b, "apply_L");
    const double w = beta * beta - alpha * alpha;
    const double s = (alpha * alpha + beta * beta) * (alpha * alpha + beta * beta);
    const Field z1 = derivative(z, 1);
    const Field z2 = derivative(z, 2);
    const Field z4 = derivative(z, 4);
    const Field bx = derivative(b, 1);
    const std::vector<double> v = potential(b, alpha, beta);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = z4[i] - 2.0 * w * z2[i] + s * z[i] + 5.0 * b[i] * b[i] * z2[i] +
                 10.0 * b[i] * bx[i] * z1[i] + v[i] * z[i];
    }
    return Field(z.grid(), std::move(out));
}

OperatorMatrix assemble_L(const GridSpec& g, const Field& b, double alpha, double beta,
                          double built_at) {
    if (!(b.grid() == g)) throw std::invalid_argument("assemble_L: profile lives on another grid");
    const std::size_t n = g.size();
    if (n > kMaxDenseSize) {
        throw std::invalid_argument("assemble_L: " + std::to_string(n) +
                                    " points exceeds the dense assembly budget");
    }
    const double w = beta * beta - alpha * alpha;
    const double s = (alpha * alpha + beta * beta) * (alpha * alpha + beta * beta);
    const auto row = even_circulant_row(g, [&](double k) {
        const double k2 = k * k;
        return k2 * k2 + 2.0 * w * k2 + s;
    });
    const auto d1 = derivative_column(g);
    const std::vector<double> v = potential(b, alpha, beta);

    const Eigen::Index en = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a(en, en);
    for (Eigen::Index j = 0; j < en; ++j) {
        for (Eigen::Index i = 0; i < en; ++i) {
            const std::size_t m = static_cast<std::size_t>((i - j + en) % en);
            a(i, j) = std::sqrt(5.0) * std::abs(b[static_cast<std::size_t>(i)]) * d1[m];
        }
    }

    OperatorMatrix out{n, Eigen::MatrixXd(en, en), g, alpha, beta, built_at};
    Eigen::MatrixXd& m = out.entries;
    for (Eigen::Index j = 0; j < en; ++j) {
        for (Eigen::Index i = j; i < en; ++i) {
            m(i, j) = row[static_cast<std::size_t>(i - j)];
        }
        m(j, j) += v[static_cast<std::size_t>(j)];
    }
    m.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose(), -1.0);
    m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
    return out;
}

Field OperatorMatrix::apply(const Field& z) const {
    if (!(z.grid() == grid)) throw std::invalid_argument("OperatorMatrix::apply: grid mismatch");
    const Eigen::Map<const Eigen::VectorXd> zv(z.samples().data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd r = entries * zv;
    return Field(grid, std::vector<double>(r.data(), r.data() + r.size()));
}

double OperatorMatrix::symmetry_defect() const {
    return (entries - entries.transpose()).cwiseAbs().maxCoeff();
}

double quadratic_form(const Field& z, const Field& b, double alpha, double beta) {
    return inner(z, apply_L(z, b, alpha, beta));
}

StructureResiduals verify_structure(const BreatherParams& p, double t, const GridSpec& g) {
    const double a = p.alpha;
    const double be = p.beta;
    const double s2 = a * a + be * be;
    const Field b = breather(p, t, g);
    const Field bxx = derivative(b, 2);
    const Field b3 = b * b * b;

    StructureResiduals r;
    r.kernel_x1 = sup(apply_L(breather_dshift(p, t, g, Shift::x1), b, a, be));
    r.kernel_x2 = sup(apply_L(breather_dshift(p, t, g, Shift::x2), b, a, be));
    const Field la = apply_L(breather_dscale(p, t, g, Scale::alpha), b, a, be);
    r.scale_alpha = sup(la + (4.0 * a) * (bxx + b3 + s2 * b));
    const Field lb = apply_L(breather_dscale(p, t, g, Scale::beta), b, a, be);
    r.scale_beta = sup(lb - (4.0 * be) * (bxx + b3 - s2 * b));
    r.b0 = sup(apply_L(breather_b0(p, t, g), b, a, be) + b);
    return r;
}

std::vector<double> lowest_eigenvalues(const Eigen::MatrixXd& symmetric, std::size_t k) {
    const lapack_int n = static_cast<lapack_int>(symmetric.rows());
    if (symmetric.rows() != symmetric.cols()) {
        throw std::invalid_argument("lowest_eigenvalues: matrix is not square");
    }
    if (k == 0 || static_cast<lapack_int>(k) > n) {
        throw std::invalid_argument("lowest_eigenvalues: need 1 <= k <= n");
    }
    Eigen::MatrixXd work = symmetric;
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    double unused = 0.0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, 'N', 'I', 'L', n, work.data(), n, 0.0, 0.0, 1,
        static_cast<lapack_int>(k), LAPACKE_dlamch('S'), &found, w.data(), &unused, 1,
        support.data());
    if (info != 0 || found != static_cast<lapack_int>(k)) {
        throw std::runtime_error("lowest_eigenvalues: dsyevr failed (info " +
                                 std::to_string(info) + ", found " + std::to_string(found) + ")");
    }
    w.resize(k);
    return w;
}

SpectrumReport spectrum(const OperatorMatrix& m, std::size_t k) {
    if (k > m.n) throw std::invalid_argument("spectrum: k exceeds matrix size");
    SpectrumReport rep;
    rep.eigenvalues = lowest_eigenvalues(m.entries, k);
    const double s = (m.alpha * m.alpha + m.beta * m.beta) * (m.alpha * m.alpha + m.beta * m.beta);
    rep.tol_negative = 1e-3 * s;
    rep.tol_kernel = 1e-6 * s;
    rep.essential_edge_theory = essential_edge(m.alpha, m.beta);
    rep.lowest_eigenvalue = rep.eigenvalues.front();
    for (double lam : rep.eigenvalues) {
        if (lam < -rep.tol_negative) ++rep.n_negative;
        else if (std::abs(lam) <= rep.tol_kernel) ++rep.kernel_count;
    }
    return rep;
}

double coercivity_estimate(const OperatorMatrix& m, std::span<const Field> constraints,
                           Metric metric) {
    const GridSpec& g = m.grid;
    const Eigen::Index n = static_cast<Eigen::Index>(m.n);
    auto inv_sqrt_gram = [metric](double k) {
        if (metric == Metric::l2) return 1.0;
        const double k2 = k * k;
        return 1.0 / std::sqrt(1.0 + k2 + k2 * k2);
    };
    // The H2 Gram symbol drops the k^2 term at Nyquist, matching the first-derivative convention.
    auto weight = [&](double k) {
        if (metric == Metric::h2 && std::abs(k - g.nyquist()) < 1e-12 * g.nyquist()) {
            return 1.0 / std::sqrt(1.0 + k * k * k * k);
        }
        return inv_sqrt_gram(k);
    };

    Eigen::MatrixXd a = m.entries;
    if (metric != Metric::l2) {
        apply_circulant_to_columns(a, g, weight);
        a.transposeInPlace();
        apply_circulant_to_columns(a, g, weight);
        a = 0.5 * (a + a.transpose()).eval();
    }
    if (constraints.empty()) return lowest_eigenvalues(a, 1).front();

    const Eigen::Index nc = static_cast<Eigen::Index>(constraints.size());
    if (nc >= n) throw std::invalid_argument("coercivity_estimate: too many constraints");
    Eigen::MatrixXd c(n, nc);
    for (Eigen::Index j = 0; j < nc; ++j) {
        const Field& f = constraints[static_cast<std::size_t>(j)];
        if (!(f.grid() == g)) throw std::invalid_argument("coercivity_estimate: constraint grid mismatch");
        for (Eigen::Index i = 0; i < n; ++i) c(i, j) = f[static_cast<std::size_t>(i)];
    }
    if (metric != Metric::l2) apply_circulant_to_columns(c, g, weight);

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(nc).triangularView<Eigen::Upper>();
    const double largest = r.diagonal().cwiseAbs().maxCoeff();
    if (!(largest > 0.0) || r.diagonal().cwiseAbs().minCoeff() <= 1e-10 * largest) {
        throw std::invalid_argument("coercivity_estimate: constraints are rank deficient");
    }
    a.applyOnTheLeft(qr.householderQ().transpose());
    a.applyOnTheRight(qr.householderQ());
    Eigen::MatrixXd block = a.bottomRightCorner(n - nc, n - nc);
    block = 0.5 * (block + block.transpose()).eval();
    return lowest_eigenvalues(block, 1).front();
}

double expansion_remainder(const BreatherParams& p, double t, const Field& z) {
    const Field b = breather(p, t, z.grid());
    const double dh = lyapunov(b + z, p.alpha, p.beta) - lyapunov(b, p.alpha, p.beta);
    return dh - 0.5 * quadratic_form(z, b, p.alpha, p.beta);
}

}  // namespace mkdv
