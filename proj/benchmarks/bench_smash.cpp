#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "smash/experiments.hpp"
#include "smash/h2.hpp"
#include "smash/hss.hpp"
#include "smash/nystrom.hpp"
#include "smash/ulv.hpp"

namespace {

using namespace smash;

std::shared_ptr<const ClusterTree> make_tree(const PointSet& X, const PointSet& Y, Branching mode) {
  TreeOptions to;
  to.leaf_cap = 50;
  to.mode = mode;
  return std::make_shared<ClusterTree>(build_tree(X, Y, to));
}

struct IntervalProblem {
  std::shared_ptr<const CauchyKernel<double>> kernel;
  std::shared_ptr<const ClusterTree> tree;
  BuildParams params;

  explicit IntervalProblem(Index n) {
    std::mt19937_64 rng(1);
    const PointPair pp = cauchy_points(Geometry::interval, n, rng);
    kernel = std::make_shared<CauchyKernel<double>>(pp.X, pp.Y);
    tree = make_tree(pp.X, pp.Y, Branching::binary);
    const ParamChoice pc = choose_params(1e-8, 1);
    params.tau = pc.tau;
    params.expansion = {Expansion::taylor, pc.order};
    params.svd_tol = pc.svd_tol;
  }
};

struct GridProblem {
  std::shared_ptr<const CauchyKernel<complex>> kernel;
  std::shared_ptr<const ClusterTree> tree;
  BuildParams params;

  explicit GridProblem(Index n) {
    std::mt19937_64 rng(1);
    const PointPair pp = cauchy_points(Geometry::grid2d, n, rng);
    kernel = std::make_shared<CauchyKernel<complex>>(pp.X, pp.Y, complex(1.0));
    tree = make_tree(pp.X, pp.Y, Branching::two_to_d);
    const ParamChoice pc = choose_params(1e-7, 2);
    params.tau = pc.tau;
    params.expansion = {Expansion::taylor, pc.order};
  }
};

void BM_HssBuild(benchmark::State& state) {
  const IntervalProblem p(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_hss<double>(p.tree, p.kernel, p.params));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HssBuild)->RangeMultiplier(2)->Range(1600, 12800)->Unit(benchmark::kMillisecond)->Complexity();

void BM_HssMatvec(benchmark::State& state) {
  const IntervalProblem p(state.range(0));
  HMatrix<double> h = build_hss<double>(p.tree, p.kernel, p.params);
  h.materialize();
  const VectorXd q = VectorXd::Ones(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(h.matvec(q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HssMatvec)->RangeMultiplier(2)->Range(1600, 12800)->Unit(benchmark::kMicrosecond)->Complexity();

void BM_HssMatvecLevelwise(benchmark::State& state) {
  const IntervalProblem p(state.range(0));
  HMatrix<double> h = build_hss<double>(p.tree, p.kernel, p.params);
  h.materialize();
  const VectorXd q = VectorXd::Ones(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(h.matvec_levelwise(q));
}
BENCHMARK(BM_HssMatvecLevelwise)->Arg(1600)->Arg(6400)->Unit(benchmark::kMicrosecond);

void BM_H2Build(benchmark::State& state) {
  const GridProblem p(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_h2<complex>(p.tree, p.kernel, p.params));
}
BENCHMARK(BM_H2Build)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);

void BM_H2Matvec(benchmark::State& state) {
  const GridProblem p(state.range(0));
  HMatrix<complex> h = build_h2<complex>(p.tree, p.kernel, p.params);
  h.materialize();
  const Vector<complex> q = Vector<complex>::Ones(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(h.matvec(q));
}
BENCHMARK(BM_H2Matvec)->Arg(1600)->Arg(6400)->Unit(benchmark::kMicrosecond);

void BM_UlvFactorSolve(benchmark::State& state) {
  const Index n = state.range(0);
  const DirichletProblem prob = DirichletProblem::ramhead(n);
  auto K = std::make_shared<LaplaceDlpKernel>(prob.curve, n);
  auto T = make_tree(K->row_points(), K->col_points(), Branching::binary);
  BuildParams bp;
  bp.tau = 0.6;
  bp.expansion = {Expansion::chebyshev, 25};
  bp.svd_tol = 1e-11;
  HMatrix<double> h = build_hss<double>(T, K, bp);
  h.materialize();
  const VectorXd rhs = dirichlet_rhs(prob);
  for (auto _ : state) benchmark::DoNotOptimize(ulv_solve(ulv_factor(h), rhs));
  state.SetComplexityN(n);
}
BENCHMARK(BM_UlvFactorSolve)->RangeMultiplier(2)->Range(640, 5120)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace

BENCHMARK_MAIN();
