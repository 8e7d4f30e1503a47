#include <gtest/gtest.h>

#include <cmath>

#include "../common.hpp"
#include "smash/nystrom.hpp"

namespace smash {
namespace {

using test::dense_of;

const CurveSpec kCircle{CurveId::circle};

TEST(CauchyKernel, Entries) {
  const CauchyKernel<double> k(PointSet::from_real({2.0, 3.0}), PointSet::from_real({1.0, 3.0}), 1.0);
  EXPECT_DOUBLE_EQ(k.eval(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(k.eval(1, 1), 1.0) << "diagonal value where x = y";
  const CauchyKernel<double> z(PointSet::from_real({0.0}), PointSet::from_real({1.0}));
  const MatrixXd A = assemble_dense(z);
  ASSERT_EQ(A.rows(), 1);
  EXPECT_DOUBLE_EQ(A(0, 0), -1.0);
}

TEST(CauchyKernel, AntisymmetricOffDiagonal) {
  std::mt19937_64 rng(1);
  const PointPair pp = cauchy_points(Geometry::honeybee, 60, rng);
  const CauchyKernel<complex> k(pp.X, pp.X, complex(0.0));
  for (Index i = 0; i < 60; ++i)
    for (Index j = 0; j < 60; ++j)
      if (i != j) EXPECT_LT(std::abs(k.eval(i, j) + k.eval(j, i)), 1e-12 * std::abs(k.eval(i, j)));
}

TEST(CauchyKernel, BlockMatchesEval) {
  std::mt19937_64 rng(2);
  const PointPair pp = cauchy_points(Geometry::snail, 50, rng);
  const CauchyKernel<complex> k(pp.X, pp.Y);
  const IndexList r{3, 7, 0, 49}, c{1, 2, 30};
  const Matrix<complex> B = k.block(r, c);
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < c.size(); ++b) EXPECT_EQ(B(Index(a), Index(b)), k.eval(r[a], c[b]));
}

TEST(CauchyLikeKernel, UnitGeneratorsGiveCauchy) {
  std::mt19937_64 rng(3);
  const PointPair pp = cauchy_points(Geometry::interval, 20, rng);
  const CauchyLikeKernel<double> cl(pp.X, pp.Y, MatrixXd::Ones(20, 1), MatrixXd::Ones(20, 1));
  const CauchyKernel<double> c(pp.X, pp.Y);
  EXPECT_LT((assemble_dense(cl) - assemble_dense(c)).norm(), 1e-12 * assemble_dense(c).norm());
}

TEST(CauchyLikeKernel, MatchesEntrywiseSum) {
  std::mt19937_64 rng(4);
  for (Geometry g : {Geometry::interval, Geometry::honeybee}) {
    const PointPair pp = cauchy_points(g, 8, rng);
    if (geometry_is_real(g)) {
      const MatrixXd w = test::random_matrix<double>(8, 2, rng), v = test::random_matrix<double>(8, 2, rng);
      const CauchyLikeKernel<double> k(pp.X, pp.Y, w, v);
      const MatrixXd ref = test::cauchy_like_dense<double>(pp.X, pp.Y, w, v);
      EXPECT_LT((assemble_dense(k) - ref).norm(), 1e-13 * ref.norm());
    } else {
      const Matrix<complex> w = test::random_matrix<complex>(8, 2, rng), v = test::random_matrix<complex>(8, 2, rng);
      const CauchyLikeKernel<complex> k(pp.X, pp.Y, w, v);
      const Matrix<complex> ref = test::cauchy_like_dense<complex>(pp.X, pp.Y, w, v);
      EXPECT_LT((assemble_dense(k) - ref).norm(), 1e-13 * ref.norm());
    }
  }
}

TEST(CauchyLikeKernel, RejectsMismatchedGenerators) {
  const PointSet X = test::uniform_line(5);
  EXPECT_THROW(CauchyLikeKernel<double>(X, X, MatrixXd::Ones(4, 2), MatrixXd::Ones(5, 2)), ValidationError);
  EXPECT_THROW(CauchyLikeKernel<double>(X, X, MatrixXd::Ones(5, 2), MatrixXd::Ones(5, 3)), ValidationError);
}

TEST(AssembleDense, RespectsBudget) {
  const PointSet X = test::uniform_line(100);
  const CauchyKernel<double> k(X, X);
  EXPECT_THROW(assemble_dense(k, 99 * 100), ValidationError);
  EXPECT_NO_THROW(assemble_dense(k, 100 * 100));
}

TEST(CauchyPoints, IntervalAndGrid) {
  std::mt19937_64 rng(5);
  const PointPair pp = cauchy_points(Geometry::interval, 9, rng);
  for (Index k = 0; k < 9; ++k) {
    EXPECT_DOUBLE_EQ(pp.X.coords(0, k), double(k + 1) / 10.0);
    const double dy = pp.Y.coords(0, k) - pp.X.coords(0, k);
    EXPECT_GE(dy, 0.0);
    EXPECT_LT(dy, 1e-7);
  }
  const PointPair g = cauchy_points(Geometry::grid2d, 16, rng);
  EXPECT_EQ(g.X.dim(), 2);
  EXPECT_EQ(g.X.coords, g.Y.coords);
  EXPECT_DOUBLE_EQ(g.X.coords(0, 0), 0.125);
  EXPECT_THROW(cauchy_points(Geometry::grid2d, 15, rng), ValidationError);
}

TEST(CauchyPoints, SeedReproducible) {
  std::mt19937_64 a(42), b(42);
  EXPECT_EQ(cauchy_points(Geometry::honeybee, 30, a).Y.coords, cauchy_points(Geometry::honeybee, 30, b).Y.coords);
}

TEST(Curves, KnownPoints) {
  const Vec2 rh = CurveSpec{CurveId::ramhead}.point(0.0);
  EXPECT_NEAR(rh(0), 2.0, 1e-15);
  EXPECT_NEAR(rh(1), -0.4, 1e-15);
  const Vec2 sf = CurveSpec{CurveId::sunflower}.point(0.0);
  EXPECT_NEAR(sf(0), 2.55, 1e-15);
  EXPECT_NEAR(sf(1), 0.0, 1e-15);
  const Vec2 hb = curve_point(CurveSpec{CurveId::honeybee}, 0.0);
  EXPECT_NEAR(hb(0), 0.5 * std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_NEAR(hb(1), -0.25, 1e-12);
}

TEST(Curves, ClosedAndRegular) {
  for (CurveId id : {CurveId::ramhead, CurveId::sunflower, CurveId::honeybee, CurveId::circle}) {
    const CurveSpec c{id};
    ASSERT_TRUE(c.closed());
    EXPECT_LT((c.point(0.0) - c.point(1.0)).norm(), 1e-12) << c.name();
    for (int k = 0; k < 400; ++k) EXPECT_GT(c.d1(k / 400.0).norm(), 0.0);
  }
  EXPECT_FALSE(CurveSpec{CurveId::snail}.closed());
}

TEST(Curves, DerivativesMatchCentralDifferences) {
  for (CurveId id : {CurveId::ramhead, CurveId::sunflower, CurveId::honeybee, CurveId::snail, CurveId::circle}) {
    const CurveSpec c{id};
    double e1 = 0.0, e2 = 0.0, scale1 = 0.0, scale2 = 0.0;
    const double h = 1e-5;
    for (int k = 1; k < 50; ++k) {
      const double t = k / 50.0 - 0.0037;
      const Vec2 fd1 = (c.point(t + h) - c.point(t - h)) / (2 * h);
      const Vec2 fd2 = (c.d1(t + h) - c.d1(t - h)) / (2 * h);
      e1 = std::max(e1, (fd1 - c.d1(t)).norm());
      e2 = std::max(e2, (fd2 - c.d2(t)).norm());
      scale1 = std::max(scale1, c.d1(t).norm());
      scale2 = std::max(scale2, c.d2(t).norm());
    }
    EXPECT_LT(e1, 1e-6 * scale1 + 1e-9) << c.name();
    EXPECT_LT(e2, 1e-6 * scale2 + 1e-9) << c.name();
  }
}

TEST(Curves, CurvatureOfCircleIsOne) {
  for (double t : {0.0, 0.3, 0.71}) EXPECT_NEAR(kCircle.curvature(t), 1.0, 1e-12);
}

TEST(Curves, WindingNumber) {
  const CurveSpec rh{CurveId::ramhead};
  EXPECT_NE(winding_number(rh, Vec2(0.1, 0.1)), 0);
  EXPECT_EQ(winding_number(rh, Vec2(2.0, 1.5)), 0);
  EXPECT_NE(winding_number(CurveSpec{CurveId::sunflower}, Vec2(1.5, 0.0)), 0);
  EXPECT_THROW(winding_number(CurveSpec{CurveId::snail}, Vec2(0, 0)), ValidationError);
}

TEST(Curves, ParseNames) {
  EXPECT_EQ(parse_curve("ramhead"), CurveId::ramhead);
  EXPECT_EQ(to_string(CurveId::sunflower), "sunflower");
  EXPECT_THROW(parse_curve("teapot"), ValidationError);
  EXPECT_EQ(parse_geometry("grid2d"), Geometry::grid2d);
  EXPECT_THROW(parse_geometry("cube"), ValidationError);
}

TEST(LaplaceDlp, CircleKernelIsMinusHalf) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const double s = u(rng), t = u(rng);
    EXPECT_NEAR(LaplaceDlpKernel::kappa(kCircle, s, t), -0.5, 1e-12);
  }
  EXPECT_NEAR(LaplaceDlpKernel::diagonal_limit(kCircle, 0.4), -0.5, 1e-12);
}

TEST(LaplaceDlp, DiagonalMatchesNumericalLimit) {
  for (CurveId id : {CurveId::ramhead, CurveId::sunflower, CurveId::honeybee}) {
    const CurveSpec c{id};
    for (double t : {0.05, 0.33, 0.8}) {
      const double lim = LaplaceDlpKernel::diagonal_limit(c, t);
      // The symmetric average cancels the first-order term of the off-diagonal values.
      const double h = 1e-5;
      const double near = 0.5 * (LaplaceDlpKernel::kappa(c, t + h, t) + LaplaceDlpKernel::kappa(c, t - h, t));
      EXPECT_NEAR(near, lim, 1e-4 * std::max(1.0, std::abs(lim))) << c.name() << " t=" << t;
      EXPECT_DOUBLE_EQ(LaplaceDlpKernel::kappa(c, t, t), lim);
    }
  }
}

TEST(LaplaceDlp, RequiresClosedCurve) {
  EXPECT_THROW(LaplaceDlpKernel(CurveSpec{CurveId::snail}, 64), ValidationError);
}

TEST(Nystrom, CircleConstantDensity) {
  DirichletProblem p{kCircle, {2.0, 1.5}, {0.1, 0.2}, 16};
  const NystromSystem sys = nystrom_system(p);
  ASSERT_EQ(sys.matrix.rows(), 16);
  ASSERT_EQ(sys.matrix.cols(), 16);
  EXPECT_TRUE(sys.matrix.allFinite());
  const VectorXd y = sys.matrix * VectorXd::Ones(16);
  EXPECT_LT((y + VectorXd::Ones(16)).cwiseAbs().maxCoeff(), 1e-13);
  for (Index j = 0; j < 16; ++j) EXPECT_DOUBLE_EQ(sys.nodes(j), double(j) / 16.0);
}

TEST(Nystrom, RhsOnCircle) {
  DirichletProblem p{kCircle, {2.0, 1.5}, {0.1, 0.1}, 4};
  const VectorXd rhs = dirichlet_rhs(p);
  ASSERT_EQ(rhs.size(), 4);
  EXPECT_NEAR(rhs(0), std::log(std::sqrt(3.25)), 1e-15);
  EXPECT_NEAR(rhs(0), 0.589327, 5e-7);
}

TEST(Nystrom, RejectsInteriorSourceAndExteriorTarget) {
  DirichletProblem p{kCircle, {0.1, 0.1}, {0.2, 0.2}, 16};
  EXPECT_THROW(dirichlet_rhs(p), ValidationError);
  EXPECT_THROW(evaluate_potential(kCircle, VectorXd::Ones(16), Vec2(3.0, 0.0)), ValidationError);
}

TEST(Nystrom, PotentialOfConstantDensity) {
  EXPECT_EQ(evaluate_potential(kCircle, VectorXd::Zero(64), Vec2(0.2, -0.1)), 0.0);
  EXPECT_NEAR(evaluate_potential(kCircle, VectorXd::Constant(64, 2.5), Vec2(0.2, -0.1)), -2.5, 1e-12);
}

TEST(Nystrom, RamheadErrorDecreasesWithN) {
  double prev = 1e300;
  for (Index n : {40, 80, 160, 320}) {
    const DirichletProblem p = DirichletProblem::ramhead(n);
    const NystromSystem sys = nystrom_system(p);
    const VectorXd sigma = sys.matrix.partialPivLu().solve(sys.rhs);
    const double err = std::abs(evaluate_potential(p.curve, sigma, p.xstar) - exact_solution(p, p.xstar));
    if (prev > 1e-12) EXPECT_LT(err, prev) << "n=" << n;
    prev = err;
  }
  EXPECT_LT(prev, 1e-9);
}

TEST(LaplaceDlp, KernelMatchesNystromMatrix) {
  const DirichletProblem p = DirichletProblem::sunflower(64);
  const LaplaceDlpKernel k(p.curve, 64);
  const MatrixXd A = dense_of(k);
  EXPECT_LT((A - nystrom_system(p).matrix).norm(), 1e-14 * A.norm());
  for (Index i = 0; i < 64; ++i)
    EXPECT_NEAR(A(i, i), LaplaceDlpKernel::diagonal_limit(p.curve, k.node(i)) / 64.0 - 0.5, 1e-14);
}

// Farfield bases span κ(·, y) for y outside the separated region.
template <typename Scalar>
double farfield_residual(const Kernel<Scalar>& k, const IndexList& rows, const IndexList& far_cols, const Box& box,
                         const ExpansionOptions& eo) {
  const Matrix<Scalar> U = k.row_basis(rows, box, eo);
  const Matrix<Scalar> F = k.block(rows, far_cols);
  const Eigen::HouseholderQR<Matrix<Scalar>> qr(U);
  const Matrix<Scalar> Q = qr.householderQ() * Matrix<Scalar>::Identity(U.rows(), std::min(U.rows(), U.cols()));
  return (F - Q * (Q.adjoint() * F)).norm() / F.norm();
}

TEST(KernelBases, FarfieldIsCapturedByRowBases) {
  std::mt19937_64 rng(8);
  const PointPair pp = cauchy_points(Geometry::interval, 400, rng);
  const CauchyKernel<double> c(pp.X, pp.Y);
  Box box;
  box.lo = VectorXd::Constant(1, 0.0);
  box.hi = VectorXd::Constant(1, 0.125);
  IndexList rows, far;
  for (Index i = 0; i < 400; ++i) {
    const double x = pp.X.coords(0, i);
    if (x <= 0.125) rows.push_back(i);
    if (x >= 0.5) far.push_back(i);
  }
  for (Expansion kind : {Expansion::taylor, Expansion::chebyshev})
    EXPECT_LT(farfield_residual<double>(c, rows, far, box, {kind, 21}), 1e-8);

  const LaplaceDlpKernel l(CurveSpec{CurveId::ramhead}, 400);
  IndexList lr, lf;
  Box lb;
  lb.lo = Eigen::Vector2d(1.0, -1.0);
  lb.hi = Eigen::Vector2d(2.1, 0.0);
  for (Index i = 0; i < 400; ++i) {
    const auto p = l.row_points().point(i);
    if (lb.contains(p)) lr.push_back(i);
    else if (p(0) < -0.5) lf.push_back(i);
  }
  ASSERT_FALSE(lr.empty());
  ASSERT_FALSE(lf.empty());
  EXPECT_LT(farfield_residual<double>(l, lr, lf, lb, {Expansion::chebyshev, 25}), 1e-8);
}

}  // namespace
}  // namespace smash
