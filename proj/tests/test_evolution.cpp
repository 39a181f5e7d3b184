#include <gtest/gtest.h>

#include <cmath>

#include "breather/closed_forms.hpp"
#include "breather/evolution.hpp"
#include "breather/spectral.hpp"
#include "support.hpp"

using namespace mkdv;
using testing_support::sup_diff;

namespace {

EvolutionConfig short_run(double t_end, double dt, std::size_t stride) {
    EvolutionConfig cfg;
    cfg.t_end = t_end;
    cfg.dt = dt;
    cfg.output_stride = stride;
    return cfg;
}

}  // namespace

TEST(Rhs, BreatherIsExactSolution) {
    const GridSpec g = testing_support::standard_grid();
    for (const BreatherParams& p : {BreatherParams{1.0, 1.0}, BreatherParams{2.0, 1.0, 0.1, 0.2},
                                    BreatherParams{0.7, 1.3}}) {
        EXPECT_LE(sup_diff(rhs(breather(p, 0.3, g)), breather_dt(p, 0.3, g)), 1e-6);
    }
}

TEST(Rhs, Soliton) {
    const GridSpec g = testing_support::standard_grid();
    const double c = 1.0;
    const Field q = soliton({c, 0.0}, 0.0, g);
    EXPECT_LE(sup_diff(rhs(q), -c * derivative(q, 1)), 1e-8);
    EXPECT_EQ(rhs(Field::zeros(g)).sup_norm(), 0.0);
}

TEST(Rhs, DealiasingOnlyChangesUnresolvedModes) {
    const GridSpec g = testing_support::standard_grid();
    const Field b = breather({1.0, 1.0}, 0.0, g);
    EXPECT_LE(sup_diff(rhs(b, true), rhs(b, false)), 1e-9);
}

TEST(Config, Validation) {
    EvolutionConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.dt = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.t_end = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.output_stride = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    EXPECT_EQ(short_run(std::acos(-1.0), 5e-4, 1).steps(), 6283u);
}

TEST(Evolve, SnapshotLayout) {
    const GridSpec g = GridSpec::make(30.0, 256);
    const Trajectory tr = evolve(breather({1.0, 1.0}, 0.0, g), short_run(0.1, 0.01, 3));
    ASSERT_EQ(tr.times.size(), 10u / 3u + 1u);
    EXPECT_EQ(tr.snapshots.size(), tr.times.size());
    EXPECT_EQ(tr.conserved_series.size(), tr.times.size());
    for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_GT(tr.times[i], tr.times[i - 1]);
    EXPECT_EQ(tr.times.front(), 0.0);
    EXPECT_NEAR(tr.times.back(), 0.09, 1e-15);
}

TEST(Evolve, ZeroStaysZero) {
    const GridSpec g = GridSpec::make(30.0, 256);
    const Trajectory tr = evolve(Field::zeros(g), short_run(0.05, 0.01, 1));
    for (const Field& u : tr.snapshots) EXPECT_EQ(u.sup_norm(), 0.0);
    const ConservationDrift d = conservation_drift(tr, 1.0, 1.0);
    EXPECT_EQ(d.max(), 0.0);
}

TEST(Evolve, TracksBreatherOverShortRun) {
    const GridSpec g = GridSpec::make(30.0, 1024);
    const BreatherParams p{1.0, 1.0};
    const Trajectory tr = evolve(breather(p, 0.0, g), short_run(0.25, 2.5e-4, 1000));
    const Field err = tr.snapshots.back() - breather(p, tr.times.back(), g);
    EXPECT_LE(sobolev_norm(err, 2), 1e-6);
}

TEST(Evolve, OddSymmetry) {
    const GridSpec g = GridSpec::make(30.0, 256);
    const Field u0 = breather({1.0, 1.0, 0.0, 0.5}, 0.0, g);
    const EvolutionConfig cfg = short_run(0.2, 1e-3, 50);
    const Trajectory a = evolve(u0, cfg);
    const Trajectory b = evolve(-u0, cfg);
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        EXPECT_LE(sup_diff(b.snapshots[i], -a.snapshots[i]), 1e-12);
    }
}

TEST(Evolve, TranslationEquivariant) {
    const GridSpec g = GridSpec::make(30.0, 256);
    const Field u0 = breather({1.0, 1.0}, 0.0, g);
    const long m = 23;
    const EvolutionConfig cfg = short_run(0.2, 1e-3, 50);
    const Trajectory a = evolve(u0, cfg);
    const Trajectory b = evolve(u0.shifted(m), cfg);
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        EXPECT_LE(sup_diff(b.snapshots[i], a.snapshots[i].shifted(m)), 1e-10);
    }
}

TEST(Evolve, SchemesAgreeAtSmallStep) {
    const GridSpec g = GridSpec::make(30.0, 256);
    const Field u0 = breather({1.0, 1.0}, 0.0, g);
    EvolutionConfig cfg = short_run(0.1, 2e-4, 500);
    const Trajectory ho = evolve(u0, cfg);
    for (Scheme s : {Scheme::etdrk4, Scheme::ifrk4}) {
        cfg.scheme = s;
        EXPECT_LE(sup_diff(evolve(u0, cfg).snapshots.back(), ho.snapshots.back()), 1e-6) << to_string(s);
    }
}

TEST(Evolve, SchemeNames) {
    for (Scheme s : {Scheme::etdrk4, Scheme::etdrk4_ho, Scheme::ifrk4}) {
        EXPECT_EQ(scheme_from_string(to_string(s)), s);
    }
    EXPECT_THROW(scheme_from_string("euler"), std::invalid_argument);
    EXPECT_EQ(EvolutionConfig{}.scheme, Scheme::etdrk4_ho);
}

TEST(Evolve, NonFiniteStateFaults) {
    const GridSpec g = GridSpec::make(30.0, 256);
    const Field u0 = Field::from_function(g, [](double x) { return 50.0 / std::cosh(x); });
    try {
        evolve(u0, short_run(1.0, 1e-2, 1));
        FAIL() << "expected EvolutionFault";
    } catch (const EvolutionFault& f) {
        EXPECT_EQ(f.reason(), EvolutionFault::Reason::non_finite);
        EXPECT_FALSE(f.partial().empty());
        EXPECT_EQ(f.partial().times.back(), f.last_valid_time());
    }
}

TEST(Evolve, StrictTailsFault) {
    const GridSpec g = GridSpec::make(30.0, 256);
    const Field u0 = breather({1.0, 1.0, 0.0, 26.0}, 0.0, g);
    EvolutionConfig cfg = short_run(0.05, 1e-3, 10);
    EXPECT_NO_THROW(evolve(u0, cfg));
    cfg.strict_tails = true;
    try {
        evolve(u0, cfg);
        FAIL() << "expected EvolutionFault";
    } catch (const EvolutionFault& f) {
        EXPECT_EQ(f.reason(), EvolutionFault::Reason::tail_breach);
    }
}

TEST(Drift, SolitonRunConserves) {
    const GridSpec g = testing_support::standard_grid();
    const Trajectory tr = evolve(soliton({1.0, 0.0}, 0.0, g), short_run(5.0, 5e-4, 500));
    const ConservationDrift d = conservation_drift(tr, 0.0, 1.0);
    EXPECT_LE(d.mass, 1e-8);
    EXPECT_LE(d.energy, 1e-8);
    EXPECT_LE(d.f_value, 1e-8);
    EXPECT_LE(d.lyapunov, 1e-8);
}

TEST(Drift, EmptyTrajectoryRejected) {
    EXPECT_THROW(conservation_drift(Trajectory{}, 1.0, 1.0), std::invalid_argument);
}
