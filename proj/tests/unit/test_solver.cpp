#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "alm/catalog.hpp"
#include "alm/errors.hpp"
#include "alm/rates.hpp"
#include "alm/solver.hpp"
#include "support/functions.hpp"

using namespace alm;
using almtest::vec;

namespace {

const CatalogProblem &P1() {
    static const CatalogProblem c = catalog_problem("P1");
    return c;
}

// Exact ALM on P1 from y >= 0 reduces to s+ = s / (1 + 5 rho) with
// s = 1 - y1 - 2 y2; the iterate is x = (s+, 0), y+ = y + rho (x1, 2 x1).
struct P1Oracle {
    std::vector<Vec> xs, ys;
};

P1Oracle p1_oracle(Vec y, const std::function<double(int)> &rho, int steps) {
    P1Oracle o;
    for (int k = 0; k < steps; ++k) {
        const double s = 1 - y(0) - 2 * y(1);
        const double x1 = s / (1 + 5 * rho(k));
        y = y + rho(k) * vec({x1, 2 * x1});
        o.xs.push_back(vec({x1, 0}));
        o.ys.push_back(y);
    }
    return o;
}

SolverConfig config(double rho, double c_hat = 100) {
    SolverConfig cfg;
    cfg.rho = RhoSchedule::constant(rho);
    cfg.c_hat = c_hat;
    return cfg;
}

} // namespace

TEST(Tolerance, Examples) {
    const SolverConfig cfg;
    EXPECT_NEAR(tolerance_fn(cfg, 0.01), 0.001, 1e-15);
    EXPECT_NEAR(tolerance_fn(cfg, 1.0), 0.1, 1e-15);
    EXPECT_NEAR(tolerance_fn(cfg, 1e-4), 1e-6, 1e-18);
    EXPECT_EQ(tolerance_fn(cfg, 0.0), 0.0);
    EXPECT_THROW(tolerance_fn(cfg, -1.0), InputError);
    double prev = 1;
    for (double t = 1e-1; t > 1e-12; t /= 10) {
        const double q = tolerance_fn(cfg, t) / t;
        EXPECT_LE(q, prev);
        prev = q;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(Config, Validation) {
    SolverConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.tol.p = 1.0;
    EXPECT_THROW(cfg.validate(), InputError);
    cfg = SolverConfig{};
    cfg.rho = RhoSchedule::geometric(10, 0.5);
    EXPECT_THROW(cfg.validate(), InputError);
    cfg = SolverConfig{};
    cfg.c_hat = 0;
    EXPECT_THROW(cfg.validate(), InputError);
    cfg = SolverConfig{};
    cfg.rho = RhoSchedule::constant(-1);
    EXPECT_THROW(cfg.validate(), InputError);
    EXPECT_DOUBLE_EQ(RhoSchedule::geometric(10, 4, 500).at(3), 500.0);
    EXPECT_DOUBLE_EQ(RhoSchedule::geometric(10, 4).at(2), 160.0);
}

TEST(Subproblem, Examples) {
    const CompositeProblem &p = P1().problem;
    const AugEvalContext c1(p, 1.0);
    SubproblemResult r = solve_subproblem(c1, p.theta, vec({1, 0}), vec({0.5, 0.5}), 1e-10);
    EXPECT_LE(r.x.norm(), 1e-10);
    EXPECT_LE(r.stationarity, 1e-10);
    r = solve_subproblem(c1, p.theta, vec({0, 0}), vec({1, 0}), 1e-10);
    EXPECT_LE((r.x - vec({1.0 / 6, 0})).norm(), 1e-10);
    // Already stationary start.
    r = solve_subproblem(c1, p.theta, vec({1, 0}), vec({0, 0}), 1e-10);
    EXPECT_EQ(r.inner_iters, 0);
    EXPECT_EQ(r.x, vec({0, 0}));
    // eps = 0 asks for the stationarity cap.
    r = solve_subproblem(c1, p.theta, vec({0, 0}), vec({1, 0}), 0.0);
    EXPECT_LE(r.stationarity, kStationarityCap);
    EXPECT_THROW(solve_subproblem(c1, p.theta, vec({0, 0}), vec({1, 0}), -1.0), InputError);
}

TEST(Subproblem, ObjectiveNeverIncreases) {
    std::mt19937_64 rng(4);
    for (const std::string &id : catalog_ids()) {
        const CatalogProblem c = catalog_problem(id);
        for (int s = 0; s < 10; ++s) {
            const AugEvalContext ctx(c.problem, s % 2 ? 1.0 : 50.0);
            const Vec y = almtest::random_vec(rng, c.problem.m, 2.0);
            const Vec x0 = project(c.problem.theta, almtest::random_vec(rng, c.problem.n, 2.0));
            std::vector<double> trace;
            const SubproblemResult r = solve_subproblem(ctx, c.problem.theta, y, x0, 1e-10, 5000, &trace);
            ASSERT_GE(trace.size(), 1u);
            for (size_t i = 1; i < trace.size(); ++i)
                EXPECT_LE(trace[i], trace[i - 1] + 64 * 2.2e-16 * (1 + std::abs(trace[i - 1]) + y.squaredNorm()))
                    << id;
            EXPECT_TRUE(c.problem.theta.contains(r.x)) << id;
            const double stat =
                normal_cone_distance(c.problem.theta, r.x, -aug_grad_x(ctx, r.x, y), kDefaultActivity);
            EXPECT_LE(stat, 1e-10) << id;
        }
    }
}

TEST(Subproblem, IterationCapThrowsWithBestIterate) {
    const CompositeProblem &p = P1().problem;
    const AugEvalContext ctx(p, 1000.0);
    try {
        solve_subproblem(ctx, p.theta, vec({0, 0}), vec({3, -4}), 1e-14, 1);
        FAIL() << "expected SubproblemFailed";
    } catch (const SubproblemFailed &e) {
        EXPECT_EQ(e.best_iterate.size(), 2);
        EXPECT_EQ(e.inner_iters, 1);
    }
}

TEST(AlmRun, OneStepFromMultiplier) {
    SolverConfig cfg = config(1.0, 10.0);
    const RunTrace tr = alm_run(P1().problem, vec({0.5, 0.5}), vec({1, 0}), cfg, &P1().solution);
    EXPECT_EQ(tr.status, RunStatus::converged);
    ASSERT_EQ(tr.records.size(), 2u);
    EXPECT_LE(tr.records[1].residual, 1e-10);
    EXPECT_LE(tr.records[1].x.norm(), 1e-10);
    EXPECT_LE((tr.records[1].y - vec({1, 0})).norm(), 1e-10);
}

TEST(AlmRun, ConstantRhoMatchesScalarOracle) {
    const SolverConfig cfg = config(10.0);
    const RunTrace tr = alm_run(P1().problem, vec({0.5, 0.5}), vec({0, 0}), cfg, &P1().solution);
    ASSERT_EQ(tr.status, RunStatus::converged);
    EXPECT_LE(tr.records.back().residual, 1e-9);
    const P1Oracle o = p1_oracle(vec({0, 0}), [](int) { return 10.0; }, static_cast<int>(tr.records.size()) - 1);
    for (size_t k = 1; k < tr.records.size(); ++k) {
        EXPECT_LE((tr.records[k].x - o.xs[k - 1]).norm(), 1e-11) << k;
        EXPECT_LE((tr.records[k].y - o.ys[k - 1]).norm(), 1e-10) << k;
        EXPECT_EQ(tr.records[k].k, static_cast<int>(k));
        EXPECT_DOUBLE_EQ(tr.records[k].eps,
                         std::max(tolerance_fn(cfg, tr.records[k - 1].residual), kEpsFloor));
    }
    const RateReport rep = estimate_rates(tr);
    for (size_t k = 1; k < rep.ratios.size(); ++k)
        EXPECT_LE(rep.ratios[k], 0.5);
    const RateReport dist = estimate_rates(tr, &P1().solution);
    EXPECT_TRUE(dist.used_known_solution);
    EXPECT_EQ(dist.classification, RateClass::q_linear);
    EXPECT_NEAR(dist.ratios.back(), 1.0 / 51, 1e-3);
}

TEST(AlmRun, GeometricRhoIsSuperlinear) {
    SolverConfig cfg;
    cfg.rho = RhoSchedule::geometric(10, 4);
    const RunTrace tr = alm_run(P1().problem, vec({0.5, 0.5}), vec({0, 0}), cfg, &P1().solution);
    ASSERT_EQ(tr.status, RunStatus::converged);
    const P1Oracle o =
        p1_oracle(vec({0, 0}), [](int k) { return 10.0 * std::pow(4.0, k); }, static_cast<int>(tr.records.size()) - 1);
    for (size_t k = 1; k < tr.records.size(); ++k)
        EXPECT_LE((tr.records[k].y - o.ys[k - 1]).norm(), 1e-10) << k;
    const RateReport rep = estimate_rates(tr, &P1().solution);
    EXPECT_EQ(rep.classification, RateClass::q_superlinear);
}

TEST(AlmRun, PurelyInexactScheduleConverges) {
    for (const std::string &id : catalog_ids()) {
        const CatalogProblem c = catalog_problem(id);
        SolverConfig cfg = config(10.0);
        cfg.inner_tol = 0;
        const RunTrace tr = alm_run(c.problem, c.x0, c.y0, cfg, &c.solution);
        EXPECT_EQ(tr.status, RunStatus::converged) << id;
        for (size_t k = 1; k < tr.records.size(); ++k) {
            const IterationRecord &r = tr.records[k], &prev = tr.records[k - 1];
            EXPECT_TRUE(c.problem.theta.contains(r.x)) << id;
            const AugEvalContext ctx(c.problem, r.rho);
            const double stat =
                normal_cone_distance(c.problem.theta, r.x, -aug_grad_x(ctx, r.x, prev.y), kDefaultActivity);
            EXPECT_LE(stat, std::max(r.eps, kStationarityCap)) << id << " k=" << k;
            EXPECT_TRUE(subdiff_contains(c.problem.g, c.problem.Phi.eval(r.x) - (r.y - prev.y) / r.rho, r.y, 1e-7))
                << id;
        }
        EXPECT_LE((tr.records.back().x - c.solution.x_bar).norm(), 1e-6) << id;
    }
}

TEST(AlmRun, AllCatalogProblemsConverge) {
    for (const std::string &id : catalog_ids()) {
        const CatalogProblem c = catalog_problem(id);
        const RunTrace tr = alm_run(c.problem, c.x0, c.y0, SolverConfig{}, &c.solution);
        EXPECT_EQ(tr.status, RunStatus::converged) << id;
        EXPECT_LE(tr.records.back().residual, 1e-9) << id;
        EXPECT_LE(*tr.records.back().dist_primal, 1e-7) << id;
        EXPECT_LE(*tr.records.back().dist_dual, 1e-7) << id;
    }
}

TEST(AlmRun, LocalityFailureAndCaps) {
    // A tiny c_hat makes (5.1)-style locality unobtainable from a far start.
    SolverConfig cfg = config(10.0, 1e-6);
    RunTrace tr = alm_run(P1().problem, vec({0.5, 0.5}), vec({0, 0}), cfg);
    EXPECT_EQ(tr.status, RunStatus::locality_failed);
    EXPECT_TRUE(tr.records.back().locality_violated);
    EXPECT_EQ(tr.records.back().locality_retries, 3);

    cfg = config(10.0);
    cfg.max_outer = 2;
    tr = alm_run(P1().problem, vec({0.5, 0.5}), vec({0, 0}), cfg);
    EXPECT_EQ(tr.status, RunStatus::max_outer);
    EXPECT_EQ(tr.records.size(), 3u);

    cfg = config(1000.0);
    cfg.max_inner = 0;
    tr = alm_run(P1().problem, vec({3, 3}), vec({0, 0}), cfg);
    EXPECT_EQ(tr.status, RunStatus::subproblem_failed);

    EXPECT_THROW(alm_run(catalog_problem("P2").problem, vec({2, 0, 0}), Vec::Zero(3), SolverConfig{}), InputError);
}

TEST(AlmRun, StartAtSolutionConvergesImmediately) {
    const RunTrace tr = alm_run(P1().problem, vec({0, 0}), vec({0, 0.5}), SolverConfig{});
    EXPECT_EQ(tr.status, RunStatus::converged);
    EXPECT_EQ(tr.records.size(), 1u);
}

TEST(Rates, SyntheticSequences) {
    std::vector<double> geo, fact, harm;
    double f = 1;
    for (int k = 0; k < 10; ++k)
        geo.push_back(std::pow(0.5, k));
    // Ratios k/(k+1) only exceed 0.95 once k >= 20.
    for (int k = 0; k < 40; ++k)
        harm.push_back(1.0 / (k + 1));
    for (int k = 0; k < 6; ++k) {
        fact.push_back(f);
        f /= (k + 2);
    }
    RateReport r = rates_from_sequence(geo);
    EXPECT_NEAR(r.q_hat, 0.5, 1e-14);
    EXPECT_EQ(r.classification, RateClass::q_linear);
    EXPECT_EQ(r.tail, 5);
    r = rates_from_sequence(fact);
    EXPECT_EQ(r.classification, RateClass::q_superlinear);
    r = rates_from_sequence(harm);
    EXPECT_EQ(r.classification, RateClass::inconclusive);
    for (double q : r.ratios)
        EXPECT_GE(q, 0.0);
    EXPECT_THROW(rates_from_sequence({1, 0.5, 0.25, 0.125}), InsufficientDataError);

    RunTrace tr;
    for (int k = 0; k < 3; ++k) {
        IterationRecord rec;
        rec.residual = geo[static_cast<size_t>(k)];
        tr.records.push_back(rec);
    }
    EXPECT_THROW(estimate_rates(tr), InsufficientDataError);
}
