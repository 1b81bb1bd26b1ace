#include <random>

#include <benchmark/benchmark.h>

#include "alm/catalog.hpp"
#include "alm/convex.hpp"
#include "alm/diagnostics.hpp"
#include "alm/qp.hpp"
#include "alm/solver.hpp"

using namespace alm;

namespace {

Vec random_vec(std::mt19937_64 &rng, Eigen::Index n) {
    std::normal_distribution<double> N(0.0, 1.0);
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = N(rng);
    return v;
}

void BM_ProxSoc(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const ConvexFunction h = ConvexFunction::second_order_cone(n);
    std::mt19937_64 rng(1);
    const Vec y = random_vec(rng, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(prox(h, 1.0, y));
}
BENCHMARK(BM_ProxSoc)->Arg(3)->Arg(50)->Arg(200);

void BM_ProxPsd(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    const ConvexFunction h = ConvexFunction::psd_cone(d);
    std::mt19937_64 rng(2);
    const Vec y = random_vec(rng, d * (d + 1) / 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(prox(h, 1.0, y));
}
BENCHMARK(BM_ProxPsd)->Arg(2)->Arg(8)->Arg(16);

void BM_ProxCplqL1(benchmark::State &state) {
    const int m = static_cast<int>(state.range(0));
    const ConvexFunction h = l1_as_cplq(m);
    std::mt19937_64 rng(3);
    const Vec y = random_vec(rng, m);
    for (auto _ : state)
        benchmark::DoNotOptimize(prox(h, 1.0, y));
}
BENCHMARK(BM_ProxCplqL1)->Arg(2)->Arg(3)->Arg(4);

void BM_QpBox(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(4);
    Mat B(n, n);
    for (int j = 0; j < n; ++j)
        B.col(j) = random_vec(rng, n);
    const Mat H = B.transpose() * B + Mat::Identity(n, n);
    const Vec f = random_vec(rng, n);
    Mat A(2 * n, n);
    A << Mat::Identity(n, n), -Mat::Identity(n, n);
    const Polyhedron box(A, Vec::Constant(2 * n, 0.1), Mat(0, n), Vec(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qp_solve(H, f, box));
}
BENCHMARK(BM_QpBox)->Arg(5)->Arg(20)->Arg(50);

void BM_AlmRun(benchmark::State &state) {
    const CatalogProblem c = catalog_problem(catalog_ids()[static_cast<size_t>(state.range(0))]);
    SolverConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(alm_run(c.problem, c.x0, c.y0, cfg, &c.solution));
    state.SetLabel(c.id);
}
BENCHMARK(BM_AlmRun)->DenseRange(0, 3);

void BM_SecondSubderivativeEstimate(benchmark::State &state) {
    const ConvexFunction soc = ConvexFunction::second_order_cone(3);
    const Vec x = (Vec(3) << 1, 1, 0).finished(), v = (Vec(3) << -1, 1, 0).finished();
    const Vec w = (Vec(3) << 1, 1, -0.7).finished();
    const ConvexFunction l1 = ConvexFunction::l1(3);
    const Vec z = (Vec(3) << 1, 0, 0).finished(), g = (Vec(3) << 1, 0.5, -1).finished();
    const Vec u = (Vec(3) << -1, 2, 0).finished();
    for (auto _ : state) {
        if (state.range(0) == 0)
            benchmark::DoNotOptimize(second_subderivative_estimate(l1, z, g, u));
        else
            benchmark::DoNotOptimize(second_subderivative_estimate(soc, x, v, w));
    }
    state.SetLabel(state.range(0) == 0 ? "l1" : "soc");
}
BENCHMARK(BM_SecondSubderivativeEstimate)->Arg(0)->Arg(1);

} // namespace

BENCHMARK_MAIN();
