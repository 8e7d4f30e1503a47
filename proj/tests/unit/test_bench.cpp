#include <gtest/gtest.h>

#include <cmath>

#include "../common.hpp"
#include "smash/bounds.hpp"
#include "smash/experiments.hpp"
#include "smash/nystrom.hpp"
#include "smash/svd.hpp"

namespace smash {
namespace {

using test::dense_of;
using test::IntervalCauchy;

TEST(ChooseParams, Examples) {
  const ParamChoice a = choose_params(1e-7, 2);
  EXPECT_DOUBLE_EQ(a.tau, 0.65);
  EXPECT_EQ(a.order, 22);
  EXPECT_DOUBLE_EQ(a.svd_tol, 1e-8);
  EXPECT_EQ(choose_params(1e-8, 1).order, 21);
  EXPECT_EQ(choose_params(1e-10, 1).order, 25);
  EXPECT_DOUBLE_EQ(choose_params(1e-10, 1).tau, 0.6);
}

TEST(ChooseParams, Invariants) {
  for (int d : {1, 2, 3}) {
    for (double e = 0.5; e > 1e-15; e /= 3.0) {
      const ParamChoice p = choose_params(e, d);
      EXPECT_GE(p.order, 5);
      EXPECT_DOUBLE_EQ(p.svd_tol, e / 10.0);
      EXPECT_GT(p.tau, 0.0);
      EXPECT_LT(p.tau, 1.0);
    }
  }
  EXPECT_THROW(choose_params(0.0, 1), ValidationError);
  EXPECT_THROW(choose_params(1.5, 1), ValidationError);
  EXPECT_THROW(choose_params(1e-6, 0), ValidationError);
}

TEST(EpsRank, Examples) {
  EXPECT_EQ(eps_rank<double>(MatrixXd::Identity(7, 7), 1e-3), 7);
  VectorXd d(3);
  d << 1.0, 0.5, 1e-4;
  EXPECT_EQ(eps_rank<double>(MatrixXd(d.asDiagonal()), 1e-3), 2);
  EXPECT_EQ(eps_rank<double>(MatrixXd(d.asDiagonal()), 1e-5), 3);
}

TEST(EpsRank, MonotoneInEps) {
  std::mt19937_64 rng(1);
  const MatrixXd M = test::random_matrix<double>(40, 8, rng) * test::random_matrix<double>(8, 30, rng) +
                     1e-6 * test::random_matrix<double>(40, 30, rng);
  Index prev = 0;
  for (double e : {1e-1, 1e-3, 1e-5, 1e-7, 1e-9}) {
    const Index r = eps_rank<double>(M, e);
    EXPECT_GE(r, prev);
    prev = r;
  }
  EXPECT_EQ(eps_rank<double>(M, 1e-4), 8);
}

TEST(EpsRank, RamheadBlockAgainstJacobiSvd) {
  const DirichletProblem prob = DirichletProblem::ramhead(640);
  LaplaceDlpKernel K(prob.curve, prob.n);
  IndexList r, c;
  for (Index i = 0; i < 160; ++i) r.push_back(i);
  for (Index j = 320; j < 480; ++j) c.push_back(j);
  const MatrixXd B = K.block(r, c);
  const VectorXd s = Eigen::JacobiSVD<MatrixXd>(B).singularValues();
  for (double e : {1e-3, 1e-6, 1e-10}) {
    Index expect = 0;
    while (expect < s.size() && s(expect) >= e * s(0)) ++expect;
    EXPECT_EQ(eps_rank<double>(B, e), expect) << e;
  }
}

TEST(ErrorBound, HandComputedValues) {
  BoundInputs in;
  in.levels = 3;
  in.ranks = {0, 0, 10, 10};
  in.s = 2.0;
  in.svd_tol = 1e-9;
  in.far_tol = 1e-8;
  // (2 r² s²)^L (16 ε_SVD + 8 ε_far) with r = 10.
  EXPECT_NEAR(error_bound(in, Structure::hss).corollary, 49.152, 1e-9);

  BoundInputs two;
  two.levels = 2;
  two.ranks = {0, 0, 5};
  two.s = 2.0;
  two.far_tol = 1e-8;
  // Only the ε_far term at l = 2: 2^4 s² r⁴/r² r = 8000.
  EXPECT_NEAR(error_bound(two, Structure::hss).level_resolved, 8000.0 * 1e-8, 1e-15);
  // H² in 2D: 2^(2·2+2) s² r² r = 32000.
  two.d = 2;
  EXPECT_NEAR(error_bound(two, Structure::h2).level_resolved, 32000.0 * 1e-8, 1e-15);

  BoundInputs zero;
  zero.levels = 3;
  zero.ranks = {0, 0, 4, 4};
  EXPECT_EQ(error_bound(zero, Structure::hss).corollary, 0.0);
  EXPECT_EQ(error_bound(zero, Structure::hss).level_resolved, 0.0);
}

TEST(ErrorBound, InputsFromMatrixAreNonincreasing) {
  IntervalCauchy p(2048, 32);
  const HMatrix<double> h = p.hss();
  const BoundInputs in = bound_inputs(h, 1e-8, 1);
  EXPECT_EQ(in.levels, p.tree->levels);
  EXPECT_DOUBLE_EQ(in.svd_tol, p.params.svd_tol);
  const auto raw = h.level_ranks();
  for (std::size_t l = 2; l < in.ranks.size(); ++l) {
    EXPECT_GE(in.ranks[l], raw[l]);
    if (l + 1 < in.ranks.size()) EXPECT_GE(in.ranks[l], in.ranks[l + 1]);
  }
}

TEST(Storage, DenseSizeAndSingleLeaf) {
  auto T = test::tree_of(test::uniform_line(10240), test::uniform_line(10240), 50, Branching::binary);
  const StorageReport big = storage_report(zero_hss<double>(T));
  EXPECT_DOUBLE_EQ(big.dense_bytes / double(1 << 20), 800.0);

  IntervalCauchy p(40);
  const StorageReport one = storage_report(p.hss());
  EXPECT_DOUBLE_EQ(one.compressed_bytes, 40.0 * 40.0 * 8.0);
  EXPECT_DOUBLE_EQ(one.dense_generator_bytes, one.compressed_bytes);
}

TEST(Storage, OrderingOnRamhead) {
  const DirichletProblem prob = DirichletProblem::ramhead(2560);
  auto K = std::make_shared<LaplaceDlpKernel>(prob.curve, prob.n);
  auto T = test::tree_of(K->row_points(), K->col_points(), 50, Branching::binary);
  const ParamChoice pc = choose_params(1e-10, 1);
  BuildParams bp;
  bp.tau = pc.tau;
  bp.expansion = {Expansion::chebyshev, 25};
  bp.svd_tol = 1e-11;
  const StorageReport r = storage_report(build_hss<double>(T, K, bp));
  EXPECT_LE(r.compressed_bytes, r.dense_generator_bytes);
  EXPECT_LE(r.dense_generator_bytes, r.dense_bytes);
  EXPECT_LE(r.compressed_bytes / r.dense_bytes, 0.6);
  EXPECT_DOUBLE_EQ(r.compressed_bytes, r.g_bytes + r.index_bytes + r.d_bytes + r.coupling_bytes);
}

TEST(Storage, AddedMatrixStoresCouplings) {
  IntervalCauchy p(400);
  const HMatrix<double> h = p.hss();
  const StorageReport a = storage_report(h);
  const StorageReport b = storage_report(hss_add(h, zero_hss<double>(p.tree)));
  EXPECT_EQ(a.coupling_bytes, 0.0);
  EXPECT_GT(b.coupling_bytes, 0.0);
}

TEST(Experiments, NamesAndUnknown) {
  const auto names = experiment_names();
  for (const char* n : {"h2_matvec_scaling", "cauchy_solve", "laplace_dirichlet", "rank_study", "storage_study"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  ExperimentConfig cfg;
  cfg.name = "nope";
  EXPECT_THROW(run_experiment(cfg), ValidationError);
}

TEST(Experiments, CauchySolveIsSeedDeterministic) {
  ExperimentConfig cfg;
  cfg.name = "cauchy_solve";
  cfg.sizes = {400};
  cfg.geometries = {Geometry::interval, Geometry::snail};
  cfg.repeats = 1;
  const ExperimentReport a = run_experiment(cfg);
  const ExperimentReport b = run_experiment(cfg);
  ASSERT_EQ(a.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.number(i, "forward_error"), b.number(i, "forward_error"));
    EXPECT_EQ(a.number(i, "residual"), b.number(i, "residual"));
    EXPECT_LE(a.number(i, "residual"), 1e-10);
  }
  EXPECT_LE(a.number(0, "forward_error"), 1e-6);
}

TEST(Experiments, AbsentColumnsBeyondBudget) {
  ExperimentConfig cfg;
  cfg.name = "laplace_dirichlet";
  cfg.sizes = {160};
  cfg.geometries = {Geometry::ramhead};
  cfg.repeats = 1;
  cfg.dense_budget = 100;
  cfg.condition_numbers = true;
  const ExperimentReport r = run_experiment(cfg);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(std::isnan(r.number(0, "max_error")));
  EXPECT_TRUE(std::isnan(r.number(0, "cond")));
  EXPECT_FALSE(std::isnan(r.number(0, "max_error_est")));
  EXPECT_LE(r.number(0, "error"), 1e-4);

  cfg.dense_budget = kDefaultDenseBudget;
  const ExperimentReport s = run_experiment(cfg);
  EXPECT_FALSE(std::isnan(s.number(0, "max_error")));
  EXPECT_GT(s.number(0, "cond"), 1.0);
}

TEST(Experiments, RankStudyBasisCoversEpsRank) {
  ExperimentConfig cfg;
  cfg.name = "rank_study";
  cfg.sizes = {640};
  cfg.geometries = {Geometry::ramhead};
  cfg.eps_list = {1e-3, 1e-10};
  const ExperimentReport r = run_experiment(cfg);
  ASSERT_EQ(r.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_GT(r.number(i, "r_eps"), 0.0);
    EXPECT_GE(r.number(i, "size_B") + 2, r.number(i, "r_eps"));
  }
  EXPECT_LT(r.number(0, "r_eps"), r.number(1, "r_eps"));
}

TEST(Experiments, StorageStudyOrdering) {
  ExperimentConfig cfg;
  cfg.name = "storage_study";
  cfg.sizes = {640};
  cfg.geometries = {Geometry::ramhead};
  cfg.eps_list = {1e-4};
  const ExperimentReport r = run_experiment(cfg);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_LE(r.number(0, "smash_MB"), r.number(0, "hss0_MB"));
  EXPECT_LE(r.number(0, "hss0_MB"), r.number(0, "storage_A_MB"));
  EXPECT_NEAR(r.number(0, "storage_A_MB"), 640.0 * 640.0 * 8.0 / double(1 << 20), 1e-12);
}

TEST(Experiments, KernelMatvecAndSampledError) {
  IntervalCauchy p(600);
  const HMatrix<double> h = p.hss();
  std::mt19937_64 rng(3);
  const VectorXd q = test::random_vector<double>(600, rng);
  const VectorXd ref = dense_of(*p.kernel) * q;
  EXPECT_LE((kernel_matvec(*p.kernel, q) - ref).norm(), 1e-13 * ref.norm());
  const double exact = max_abs_error(h, *p.kernel);
  const double est = sampled_max_abs_error(h, *p.kernel, 600 * 600, rng);
  EXPECT_LE(est, exact * (1 + 1e-6));
  EXPECT_GT(est, 0.0);
  EXPECT_THROW(max_abs_error(h, *p.kernel, 1000), ValidationError);
}

}  // namespace
}  // namespace smash
