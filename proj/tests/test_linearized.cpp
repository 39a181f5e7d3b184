#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "breather/closed_forms.hpp"
#include "breather/experiments.hpp"
#include "breather/functionals.hpp"
#include "breather/linearized.hpp"
#include "breather/spectral.hpp"
#include "support.hpp"

using namespace mkdv;
using testing_support::sup_diff;

namespace {

// Lowest eigenvalue for (1,1), L = 30: N = 1024 gives -8.6059121173, N = 2048 gives -8.6059121108.
constexpr double kLowestEigenvalueB11 = -8.60591211;
// Constrained H^2 minimum over {B1, B2, B}^perp for (1,1), L = 30, N = 1024.
constexpr double kCoercivityB11 = 0.054263935;

GridSpec matrix_grid() { return GridSpec::make(30.0, 1024); }

struct Assembled {
    GridSpec g;
    BreatherParams p;
    Field b;
    OperatorMatrix m;
};

const Assembled& assembled_b11() {
    static const Assembled a = [] {
        const GridSpec g = matrix_grid();
        const BreatherParams p{1.0, 1.0};
        Field b = breather(p, 0.0, g);
        OperatorMatrix m = assemble_L(g, b, p.alpha, p.beta);
        return Assembled{g, p, b, std::move(m)};
    }();
    return a;
}

}  // namespace

TEST(ApplyL, ZeroAndKernel) {
    const GridSpec g = testing_support::standard_grid();
    const BreatherParams p{1.0, 1.0};
    const Field b = breather(p, 0.0, g);
    EXPECT_EQ(apply_L(Field::zeros(g), b, 1.0, 1.0).sup_norm(), 0.0);
    EXPECT_LE(apply_L(breather_dshift(p, 0.0, g, Shift::x1), b, 1.0, 1.0).sup_norm(), 1e-6);
    EXPECT_LE(apply_L(breather_dshift(p, 0.0, g, Shift::x2), b, 1.0, 1.0).sup_norm(), 1e-6);
    EXPECT_LE((apply_L(breather_b0(p, 0.0, g), b, 1.0, 1.0) + b).sup_norm(), 1e-5);
}

TEST(ApplyL, RejectsGridMismatch) {
    const Field b = breather({1.0, 1.0}, 0.0, GridSpec::make(30.0, 512));
    EXPECT_THROW(apply_L(Field::zeros(GridSpec::make(30.0, 256)), b, 1.0, 1.0), std::invalid_argument);
}

TEST(VerifyStructure, IdentitiesHold) {
    const GridSpec g = testing_support::standard_grid();
    const struct {
        BreatherParams p;
        double t;
    } cases[] = {{{1.0, 1.0}, 0.0}, {{2.0, 1.0}, 0.5}, {{1.0, std::sqrt(3.0)}, 0.0}, {{0.7, 1.3}, 0.37}};
    for (const auto& c : cases) {
        const StructureResiduals r = verify_structure(c.p, c.t, g);
        EXPECT_LE(r.kernel_x1, 1e-6);
        EXPECT_LE(r.kernel_x2, 1e-6);
        EXPECT_LE(r.scale_alpha, 1e-5);
        EXPECT_LE(r.scale_beta, 1e-5);
        EXPECT_LE(r.b0, 1e-5);
    }
}

TEST(VerifyStructure, TimeIndependent) {
    const GridSpec g = testing_support::standard_grid();
    // Lambda_a B and Lambda_b B grow linearly in t (the phases carry delta t and gamma t),
    // and so do the absolute residuals of the scaling identities.  Kernel and B0
    // residuals are checked absolutely; the scaling ones relative to the field size
    // (1e-7 of sup|Lambda B|).
    const BreatherParams p{1.0, 2.0};
    for (double t : {0.0, 0.25, 1.3, 7.9}) {
        const StructureResiduals r = verify_structure(p, t, g);
        EXPECT_LE(std::max({r.kernel_x1, r.kernel_x2}), 1e-6) << "t=" << t;
        EXPECT_LE(r.b0, 1e-5) << "t=" << t;
        const double la = breather_dscale(p, t, g, Scale::alpha).sup_norm();
        const double lb = breather_dscale(p, t, g, Scale::beta).sup_norm();
        EXPECT_LE(r.scale_alpha, 1e-7 * std::max(1.0, la)) << "t=" << t;
        EXPECT_LE(r.scale_beta, 1e-7 * std::max(1.0, lb)) << "t=" << t;
    }
}

TEST(QuadraticForm, ScalingDirections) {
    const GridSpec g = testing_support::standard_grid();
    const BreatherParams p{1.0, 2.0};
    const Field b = breather(p, 0.0, g);
    const double want = 32.0 * p.alpha * p.alpha * p.beta;
    const double qa = quadratic_form(breather_dscale(p, 0.0, g, Scale::alpha), b, p.alpha, p.beta);
    const double qb = quadratic_form(breather_dscale(p, 0.0, g, Scale::beta), b, p.alpha, p.beta);
    EXPECT_NEAR(qa, want, 1e-4 * want);
    EXPECT_NEAR(qb, -want, 1e-4 * want);
    const Field b1 = breather_dshift(p, 0.0, g, Shift::x1);
    EXPECT_LE(std::abs(quadratic_form(b1, b, p.alpha, p.beta)), 1e-8 * inner(b1, b1));
}

TEST(QuadraticForm, SelfAdjoint) {
    const GridSpec g = GridSpec::make(30.0, 1024);
    const BreatherParams p{1.0, 1.0};
    const Field b = breather(p, 0.2, g);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const Field w = random_direction(100 + k, 8.0, 6.0, g);
        const Field z = random_direction(200 + k, 8.0, 6.0, g);
        const double wz = inner(w, apply_L(z, b, 1.0, 1.0));
        const double zw = inner(z, apply_L(w, b, 1.0, 1.0));
        EXPECT_NEAR(wz, zw, 1e-9 * std::max(std::abs(wz), 1.0));
    }
}

TEST(Assemble, Symmetric) {
    const Assembled& a = assembled_b11();
    EXPECT_LE(a.m.symmetry_defect(), 1e-12);
    EXPECT_EQ(a.m.n, a.g.size());
}

TEST(Assemble, MatchesApplyOnBandLimitedFields) {
    const Assembled& a = assembled_b11();
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Field z = random_direction(seed, 6.0, 8.0, a.g);
        const Field want = apply_L(z, a.b, 1.0, 1.0);
        EXPECT_LE(sup_diff(a.m.apply(z), want), 1e-10 * std::max(1.0, want.sup_norm()));
    }
}

TEST(Assemble, FreeSymbolMinimum) {
    const GridSpec g = GridSpec::make(30.0, 256);
    for (const BreatherParams& p : {BreatherParams{1.0, 1.0}, BreatherParams{1.0, 2.0}, BreatherParams{2.0, 1.0}}) {
        const OperatorMatrix m = assemble_L(g, Field::zeros(g), p.alpha, p.beta);
        const double lowest = lowest_eigenvalues(m.entries, 1)[0];
        double grid_min = 1e300;
        for (std::size_t j = 0; j <= g.size() / 2; ++j) {
            const double k2 = g.wavenumber(j) * g.wavenumber(j);
            grid_min = std::min(grid_min, k2 * k2 + 2.0 * (p.beta * p.beta - p.alpha * p.alpha) * k2 + p.scale4());
        }
        EXPECT_NEAR(lowest, grid_min, 1e-6 * p.scale4());
        // The continuous minimiser k^2 = alpha^2 - beta^2 need not be a grid wavenumber.
        const double edge = essential_edge(p.alpha, p.beta);
        const double dk = g.wavenumber(1);
        EXPECT_GE(lowest, edge - 1e-9);
        EXPECT_LE(lowest - edge, std::pow(2.0 * p.alpha * dk, 2) + 1e-6);
    }
}

TEST(Assemble, RefusesLargeGrids) {
    const GridSpec g = GridSpec::make(30.0, kMaxDenseSize + 2);
    EXPECT_THROW(assemble_L(g, Field::zeros(g), 1.0, 1.0), std::invalid_argument);
}

TEST(Spectrum, ClassificationB11) {
    const Assembled& a = assembled_b11();
    const SpectrumReport r = spectrum(a.m, 10);
    EXPECT_EQ(r.n_negative, 1u);
    EXPECT_EQ(r.kernel_count, 2u);
    EXPECT_NEAR(r.lowest_eigenvalue, kLowestEigenvalueB11, 1e-4 * std::abs(kLowestEigenvalueB11));
    EXPECT_DOUBLE_EQ(r.tol_negative, 1e-3 * 4.0);
    EXPECT_DOUBLE_EQ(r.tol_kernel, 1e-6 * 4.0);
    ASSERT_EQ(r.eigenvalues.size(), 10u);
    EXPECT_TRUE(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
    for (std::size_t i = 3; i < r.eigenvalues.size(); ++i) {
        EXPECT_GE(r.eigenvalues[i], 0.98 * r.essential_edge_theory);
    }
}

TEST(Spectrum, LowestEigenvalueResolutionDoubling) {
    const BreatherParams p{1.0, 1.0};
    const GridSpec fine = GridSpec::make(30.0, 2048);
    const double coarse = spectrum(assembled_b11().m, 1).lowest_eigenvalue;
    const double refined = spectrum(assemble_L(fine, breather(p, 0.0, fine), 1.0, 1.0), 1).lowest_eigenvalue;
    EXPECT_NEAR(coarse, refined, 1e-4 * std::abs(refined));
}

TEST(Spectrum, EssentialEdges) {
    EXPECT_DOUBLE_EQ(essential_edge(1.0, 2.0), 25.0);
    EXPECT_DOUBLE_EQ(essential_edge(2.0, 1.0), 16.0);
    EXPECT_DOUBLE_EQ(essential_edge(1.0, 1.0), 4.0);
}

TEST(Spectrum, RejectsOversizedK) {
    const GridSpec g = GridSpec::make(10.0, 32);
    const OperatorMatrix m = assemble_L(g, Field::zeros(g), 1.0, 1.0);
    EXPECT_THROW(spectrum(m, 33), std::invalid_argument);
}

TEST(LowestEigenvalues, KnownMatrix) {
    Eigen::MatrixXd a(3, 3);
    a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
    const std::vector<double> ev = lowest_eigenvalues(a, 3);
    EXPECT_NEAR(ev[0], 2.0 - std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(ev[1], 2.0, 1e-14);
    EXPECT_NEAR(ev[2], 2.0 + std::sqrt(2.0), 1e-14);
    EXPECT_THROW(lowest_eigenvalues(a, 0), std::invalid_argument);
    EXPECT_THROW(lowest_eigenvalues(a, 4), std::invalid_argument);
}

TEST(Coercivity, ConstrainedMinimum) {
    const Assembled& a = assembled_b11();
    const Field b1 = breather_dshift(a.p, 0.0, a.g, Shift::x1);
    const Field b2 = breather_dshift(a.p, 0.0, a.g, Shift::x2);
    const std::vector<Field> full = {b1, b2, a.b};
    const std::vector<Field> kernel = {b1, b2};
    const double with_b = coercivity_estimate(a.m, full, Metric::h2);
    EXPECT_GT(with_b, 0.0);
    EXPECT_NEAR(with_b, kCoercivityB11, 1e-4 * kCoercivityB11);
    EXPECT_LT(coercivity_estimate(a.m, kernel, Metric::h2), 0.0);
}

TEST(Coercivity, UnconstrainedIsLowestEigenvalue) {
    const Assembled& a = assembled_b11();
    const double lowest = spectrum(a.m, 1).lowest_eigenvalue;
    EXPECT_NEAR(coercivity_estimate(a.m, {}, Metric::l2), lowest, 1e-10 * std::abs(lowest));
}

TEST(Coercivity, MonotoneInConstraints) {
    const Assembled& a = assembled_b11();
    const Field b1 = breather_dshift(a.p, 0.0, a.g, Shift::x1);
    const Field b2 = breather_dshift(a.p, 0.0, a.g, Shift::x2);
    for (Metric metric : {Metric::l2, Metric::h2}) {
        std::vector<Field> set;
        double previous = coercivity_estimate(a.m, set, metric);
        for (const Field& c : {b1, b2, a.b}) {
            set.push_back(c);
            const double next = coercivity_estimate(a.m, set, metric);
            EXPECT_GE(next, previous - 1e-10 * std::abs(previous));
            previous = next;
        }
    }
}

TEST(Coercivity, RankDeficientConstraints) {
    const Assembled& a = assembled_b11();
    const Field b1 = breather_dshift(a.p, 0.0, a.g, Shift::x1);
    const std::vector<Field> twice = {b1, 2.0 * b1};
    EXPECT_THROW(coercivity_estimate(a.m, twice, Metric::h2), std::invalid_argument);
}

TEST(Expansion, RemainderIsCubic) {
    const GridSpec g = testing_support::standard_grid();
    const BreatherParams p{1.0, 1.0};
    EXPECT_EQ(expansion_remainder(p, 0.0, Field::zeros(g)), 0.0);
    for (std::uint64_t seed : {21u, 22u}) {
        const Field w = random_direction(seed, 6.0, 6.0, g);
        EXPECT_NEAR(loglog_slope(kExpansionEps, breather_remainders(p, 0.0, w, kExpansionEps)), 3.0, 0.2);
    }
}

TEST(Expansion, NoLinearTerm) {
    const GridSpec g = testing_support::standard_grid();
    const BreatherParams p{1.0, 1.0};
    const Field b = breather(p, 0.0, g);
    const double h0 = lyapunov(b, 1.0, 1.0);
    const Field w = random_direction(9, 6.0, 6.0, g);
    std::vector<double> d;
    for (double eps : kExpansionEps) d.push_back(lyapunov(b + eps * w, 1.0, 1.0) - h0);
    EXPECT_NEAR(loglog_slope(kExpansionEps, d), 2.0, 0.2);
}

TEST(Expansion, TranslationDirectionHasNoQuadraticPart) {
    const GridSpec g = testing_support::standard_grid();
    const BreatherParams p{1.0, 1.0};
    const Field b = breather(p, 0.0, g);
    const Field b1 = breather_dshift(p, 0.0, g, Shift::x1);
    const double h0 = lyapunov(b, 1.0, 1.0);
    std::vector<double> d;
    for (double eps : kExpansionEps) d.push_back(lyapunov(b + eps * b1, 1.0, 1.0) - h0);
    // At least cubic; H is shift invariant, so the cubic term cancels too and the decay is quartic.
    EXPECT_GE(loglog_slope(kExpansionEps, d), 2.8);
}
