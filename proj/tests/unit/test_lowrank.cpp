#include <gtest/gtest.h>

#include <cmath>

#include "../common.hpp"
#include "smash/srrqr.hpp"
#include "smash/svd.hpp"

namespace smash {
namespace {

using test::random_matrix;

Box square(double cx, double cy, double half) {
  Box b;
  b.lo = Eigen::Vector2d(cx - half, cy - half);
  b.hi = Eigen::Vector2d(cx + half, cy + half);
  return b;
}

std::vector<complex> points_in(const Box& b, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<complex> z;
  for (int k = 0; k < n; ++k)
    z.emplace_back(b.lo(0) + u(rng) * (b.hi(0) - b.lo(0)), b.lo(1) + u(rng) * (b.hi(1) - b.lo(1)));
  return z;
}

TEST(Taylor, EtaAndLeadingCoefficient) {
  for (double d : {0.1, 1.0, 3.0})
    for (int r : {5, 20}) EXPECT_DOUBLE_EQ(taylor::eta(0, d, r), 1.0);
  const complex a(0.2, 0.1), b(2.0, -0.5);
  const complex c00 = taylor::coefficient(0, 0, a, b, 0.3, 0.4, 10);
  EXPECT_LT(std::abs(c00 - (-1.0 / (b - a))), 1e-15);
  for (int k = 0; k < 6; ++k)
    for (int l = k + 1; l < 8; ++l) EXPECT_EQ(taylor::coefficient(k, l, a, b, 0.3, 0.4, 10), complex(0.0));
}

TEST(Taylor, CouplingIsAntiTriangular) {
  const Matrix<complex> B = taylor::coupling({0.0, 0.0}, {3.0, 0.0}, 0.5, 0.5, 8);
  for (int l = 0; l < 8; ++l)
    for (int m = 0; m < 8; ++m) {
      if (l + m > 7) EXPECT_EQ(B(l, m), complex(0.0));
      else EXPECT_EQ(B(l, m), taylor::coefficient(l + m, l, {0.0, 0.0}, {3.0, 0.0}, 0.5, 0.5, 8));
    }
}

TEST(Taylor, IntervalExampleMeetsBound) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Box bi, bj;
  bi.lo = VectorXd::Constant(1, 0.0);
  bi.hi = VectorXd::Constant(1, 1.0);
  bj.lo = VectorXd::Constant(1, 2.0);
  bj.hi = VectorXd::Constant(1, 3.0);
  std::vector<complex> x, y;
  for (int k = 0; k < 20; ++k) {
    x.emplace_back(u(rng), 0.0);
    y.emplace_back(2.0 + u(rng), 0.0);
  }
  const TaylorBases tb = taylor_bases(bi, bj, x, y, 10);
  const Matrix<complex> A = tb.U * tb.B * tb.V.transpose();
  const double bound = taylor::error_bound(0.5, 10);
  EXPECT_NEAR(bound, 3.0 * std::pow(2.0, -10), 1e-15);
  EXPECT_NEAR(bound, 2.93e-3, 1e-5);
  double worst = 0.0;
  for (int a = 0; a < 20; ++a)
    for (int b = 0; b < 20; ++b) {
      const complex k = 1.0 / (x[a] - y[b]);
      worst = std::max(worst, std::abs(A(a, b) - k) / std::abs(k));
    }
  EXPECT_LE(worst, bound);
  EXPECT_LT(worst, 1e-3);
}

TEST(Taylor, BoundHoldsOnRandomSeparatedPairs) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double ha = 0.05 + 0.5 * u(rng), hb = 0.05 + 0.5 * u(rng);
    const double tau = 0.3 + 0.4 * u(rng);
    const double dist = std::sqrt(2.0) * (ha + hb) / tau * (1.0 + 0.2 * u(rng));
    const double th = 6.283185307179586 * u(rng);
    const Box A = square(u(rng), u(rng), ha);
    const Box B = square(A.center()(0) + dist * std::cos(th), A.center()(1) + dist * std::sin(th), hb);
    ASSERT_TRUE(well_separated(A, B, tau));
    const double tau_eff = (A.radius() + B.radius()) / (A.center() - B.center()).norm();
    const auto x = points_in(A, 15, rng), y = points_in(B, 15, rng);
    for (int r : {5, 10, 20}) {
      const TaylorBases tb = taylor_bases(A, B, x, y, r);
      const Matrix<complex> M = tb.U * tb.B * tb.V.transpose();
      double kmax = 0.0, err = 0.0;
      for (int a = 0; a < 15; ++a)
        for (int b = 0; b < 15; ++b) {
          const complex k = 1.0 / (x[a] - y[b]);
          kmax = std::max(kmax, std::abs(k));
          err = std::max(err, std::abs(M(a, b) - k));
        }
      EXPECT_LE(err, taylor::error_bound(tau_eff, r) * kmax) << "trial " << trial << " r " << r;
      EXPECT_LE(tb.U.cwiseAbs().maxCoeff(), 10.0);
      EXPECT_LE(tb.V.cwiseAbs().maxCoeff(), 10.0);
    }
  }
}

TEST(Taylor, ScaledBasisStaysBounded) {
  std::mt19937_64 rng(3);
  for (double tau : {0.5, 0.65, 0.7})
    for (int r : {10, 25, 40}) {
      const Box A = square(0.0, 0.0, 0.5);
      const double dist = 2.0 * A.radius() / tau;
      const Box B = square(dist, 0.0, 0.5);
      const auto x = points_in(A, 30, rng), y = points_in(B, 30, rng);
      const TaylorBases tb = taylor_bases(A, B, x, y, r);
      EXPECT_LE(tb.U.cwiseAbs().maxCoeff(), 10.0) << tau << " " << r;
      EXPECT_TRUE(tb.B.allFinite());
    }
}

TEST(Interpolation, CardinalityAndPartitionOfUnity) {
  Box b;
  b.lo = VectorXd::Constant(1, -1.0);
  b.hi = VectorXd::Constant(1, 2.0);
  const int r = 9;
  const MatrixXd nodes = interp_nodes(b, r);
  ASSERT_EQ(nodes.cols(), r);
  const PointSet P(nodes);
  IndexList idx(r);
  for (int k = 0; k < r; ++k) idx[k] = k;
  const MatrixXd U = interp_basis(b, P, idx, r);
  EXPECT_LT((U - MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff(), 1e-12);
  const PointSet Q = test::uniform_line(40);
  IndexList qi(40);
  for (int k = 0; k < 40; ++k) qi[k] = k;
  const MatrixXd V = interp_basis(b, Q, qi, r);
  EXPECT_LT((V.rowwise().sum() - VectorXd::Ones(40)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Interpolation, ReproducesPolynomialKernel) {
  Box b;
  b.lo = VectorXd::Constant(1, 0.0);
  b.hi = VectorXd::Constant(1, 1.0);
  const int r = 8;
  const PointSet Q = test::uniform_line(30);
  IndexList qi(30);
  for (int k = 0; k < 30; ++k) qi[k] = k;
  const MatrixXd U = interp_basis(b, Q, qi, r);
  const MatrixXd nodes = interp_nodes(b, r);
  for (double y : {-2.0, 0.5, 3.0}) {
    VectorXd kn(r), ex(30);
    for (int k = 0; k < r; ++k) kn(k) = std::pow(nodes(0, k), r - 1) * y;
    for (int a = 0; a < 30; ++a) ex(a) = std::pow(Q.coords(0, a), r - 1) * y;
    EXPECT_LT((U * kn - ex).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Interpolation, TensorGridInTwoDimensions) {
  const Box b = square(0.5, 0.5, 0.5);
  const int r = 16;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixXd c(2, 25);
  for (int j = 0; j < 25; ++j) c.col(j) << u(rng), u(rng);
  const PointSet P(c);
  IndexList idx(25);
  for (int k = 0; k < 25; ++k) idx[k] = k;
  const MatrixXd U = interp_basis(b, P, idx, r);
  ASSERT_EQ(U.cols(), r);
  EXPECT_LT((U.rowwise().sum() - VectorXd::Ones(25)).cwiseAbs().maxCoeff(), 1e-12);
  const MatrixXd N = interp_nodes(b, r);
  const MatrixXd Un = interp_basis(b, PointSet(N), IndexList{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, r);
  EXPECT_LT((Un - MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff(), 1e-12);
  // Trimmed grids keep the requested number of columns.
  EXPECT_EQ(interp_basis(b, P, idx, 22).cols(), 22);
}

TEST(Interpolation, ChebyshevNodesAreInsideAndSymmetric) {
  const VectorXd x = chebyshev_nodes(-1.0, 1.0, 7);
  for (int k = 0; k < 7; ++k) {
    EXPECT_GT(x(k), -1.0);
    EXPECT_LT(x(k), 1.0);
    EXPECT_NEAR(x(k), -x(6 - k), 1e-15);
  }
}

template <typename Scalar>
void expect_srrqr_valid(const Matrix<Scalar>& M, const SrrqrResult<Scalar>& f, double s) {
  const Index m = M.rows(), n = M.cols(), k = f.rank;
  Matrix<Scalar> MP(m, n);
  for (Index j = 0; j < n; ++j) MP.col(j) = M.col(f.perm[static_cast<std::size_t>(j)]);
  Matrix<Scalar> R = Matrix<Scalar>::Zero(f.Q.cols(), n);
  R.topLeftCorner(k, k) = f.R11;
  R.topRightCorner(k, n - k) = f.R12;
  R.bottomRightCorner(f.Q.cols() - k, n - k) = f.R22;
  EXPECT_LT((f.Q * R - MP).norm(), 1e-12 * M.norm());
  EXPECT_LT((f.Q.adjoint() * f.Q - Matrix<Scalar>::Identity(f.Q.cols(), f.Q.cols())).norm(), 1e-12);
  if (k > 0 && k < n) EXPECT_LE(f.coefficients().cwiseAbs().maxCoeff(), s * (1 + 1e-12));
}

TEST(Srrqr, IdentityKeepsOrder) {
  const MatrixXd I = MatrixXd::Identity(6, 6);
  const auto f = srrqr<double>(I, 6);
  EXPECT_EQ(f.rank, 6);
  for (Index j = 0; j < 6; ++j) EXPECT_EQ(f.perm[static_cast<std::size_t>(j)], j);
  EXPECT_EQ(f.R12.cols(), 0);
}

TEST(Srrqr, RankOne) {
  std::mt19937_64 rng(5);
  const VectorXd u = test::random_vector<double>(10, rng), v = test::random_vector<double>(10, rng);
  const MatrixXd M = u * v.transpose();
  const auto f = srrqr<double>(M, 1);
  EXPECT_EQ(f.rank, 1);
  EXPECT_LE(f.R22.norm(), 1e-12 * M.norm());
  expect_srrqr_valid<double>(M, f, 2.0);
}

TEST(Srrqr, GuaranteeOnThousandRandomMatrices) {
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const MatrixXd M = random_matrix<double>(20, 12, rng);
    const auto f = srrqr<double>(M, 6);
    ASSERT_EQ(f.rank, 6);
    worst = std::max(worst, f.coefficients().cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 2.0);
}

TEST(Srrqr, AdversarialAndComplexInputs) {
  std::mt19937_64 rng(7);
  // Kahan-type matrix defeats plain column pivoting.
  const int n = 30;
  MatrixXd K = MatrixXd::Zero(n, n);
  const double c = 0.285, s = std::sqrt(1 - c * c);
  for (int i = 0; i < n; ++i) {
    K(i, i) = std::pow(s, i);
    for (int j = i + 1; j < n; ++j) K(i, j) = -c * std::pow(s, i);
  }
  for (Index k : {5, 15, 29}) expect_srrqr_valid<double>(K, srrqr<double>(K, k), 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix<complex> M = random_matrix<complex>(15, 25, rng);
    expect_srrqr_valid<complex>(M, srrqr<complex>(M, 8), 2.0);
  }
  const MatrixXd M = random_matrix<double>(20, 12, rng);
  expect_srrqr_valid<double>(M, srrqr<double>(M, 6, {1.2, 10000, 1e-14}), 1.2);
}

TEST(Srrqr, SwapCapIsReported) {
  std::mt19937_64 rng(8);
  // Ask for an impossible s by capping swaps at zero on a matrix that needs them.
  bool thrown = false;
  for (int trial = 0; trial < 200 && !thrown; ++trial) {
    const MatrixXd M = random_matrix<double>(20, 12, rng);
    try {
      srrqr<double>(M, 6, {1.0001, 0, 1e-14});
    } catch (const NumericalError&) {
      thrown = true;
    }
  }
  EXPECT_TRUE(thrown);
}

TEST(Srrqr, ToleranceSelectsRank) {
  std::mt19937_64 rng(9);
  const MatrixXd M = random_matrix<double>(30, 5, rng) * random_matrix<double>(5, 20, rng);
  const auto f = srrqr_tol<double>(M, 1e-10);
  EXPECT_EQ(f.rank, 5);
  expect_srrqr_valid<double>(M, f, 2.0);
  EXPECT_THROW(srrqr<double>(MatrixXd::Zero(4, 4), 2), ValidationError);
}

template <typename Scalar>
void expect_factor_valid(const Matrix<Scalar>& C, const InterpolativeFactor<Scalar>& f, double s, double tol) {
  const Index m = C.rows();
  ASSERT_EQ(f.rows(), m);
  Matrix<Scalar> Csk(f.rank(), C.cols());
  for (Index a = 0; a < f.rank(); ++a) Csk.row(a) = C.row(f.skeleton[static_cast<std::size_t>(a)]);
  const Matrix<Scalar> F = f.expand();
  EXPECT_LE((C - F * Csk).norm(), tol * C.norm());
  for (Index a = 0; a < f.rank(); ++a)
    for (Index b = 0; b < f.rank(); ++b)
      EXPECT_EQ(F(f.skeleton[static_cast<std::size_t>(a)], b), Scalar(a == b ? 1.0 : 0.0));
  if (f.G.size() > 0) EXPECT_LE(f.G.cwiseAbs().maxCoeff(), s * (1 + 1e-12));
  EXPECT_LE(F.norm(), s * std::sqrt(double(m) * double(f.rank())) + 1e-12);
}

TEST(Compr, NonsingularSquareKeepsEveryRow) {
  std::mt19937_64 rng(10);
  const MatrixXd C = random_matrix<double>(7, 7, rng);
  const auto f = compr<double>(C);
  EXPECT_EQ(f.rank(), 7);
  EXPECT_EQ(f.G.rows(), 0);
  EXPECT_EQ(f.G.cols(), 7);
  expect_factor_valid<double>(C, f, 2.0, 1e-14);
}

TEST(Compr, RepeatedRowGivesOneSkeleton) {
  std::mt19937_64 rng(11);
  const VectorXd v = test::random_vector<double>(6, rng);
  MatrixXd C(2, 6);
  C.row(0) = v.transpose();
  C.row(1) = 2.0 * v.transpose();
  const auto f = compr<double>(C);
  ASSERT_EQ(f.rank(), 1);
  ASSERT_EQ(f.G.size(), 1);
  const double g = f.G(0, 0);
  EXPECT_TRUE(std::abs(g - 2.0) < 1e-14 || std::abs(g - 0.5) < 1e-14) << g;
  EXPECT_LE(std::abs(g), 2.0);
}

TEST(Compr, ExactRankReconstruction) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const MatrixXd C = random_matrix<double>(50, 8, rng) * random_matrix<double>(8, 30, rng);
    ComprOptions o;
    o.tol = 1e-12;
    const auto f = compr<double>(C, o);
    EXPECT_EQ(f.rank(), 8);
    expect_factor_valid<double>(C, f, 2.0, 1e-10);
  }
}

TEST(Compr, RankDeficientRowsShrinkSkeleton) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix<complex> C = random_matrix<complex>(40, 4, rng) * random_matrix<complex>(4, 12, rng);
    const auto f = compr<complex>(C);
    EXPECT_EQ(f.rank(), 4);
    expect_factor_valid<complex>(C, f, 2.0, 1e-10);
  }
}

TEST(Compr, FixedRankAndIndexMapping) {
  std::mt19937_64 rng(14);
  const MatrixXd C = random_matrix<double>(30, 10, rng);
  const IndexList bar = [] {
    IndexList b;
    for (Index k = 0; k < 30; ++k) b.push_back(100 + 3 * k);
    return b;
  }();
  ComprOptions o;
  o.rank = 6;
  const auto f = compr<double>(C, bar, o);
  EXPECT_EQ(f.rank(), 6);
  ASSERT_EQ(f.indices.size(), 6u);
  for (std::size_t a = 0; a < 6; ++a) EXPECT_EQ(f.indices[a], bar[static_cast<std::size_t>(f.skeleton[a])]);
  EXPECT_TRUE(std::is_sorted(f.skeleton.begin(), f.skeleton.end()));
  if (f.G.size() > 0) EXPECT_LE(f.G.cwiseAbs().maxCoeff(), 2.0 * (1 + 1e-12));
}

TEST(TruncatedSvd, Examples) {
  std::mt19937_64 rng(15);
  const MatrixXd M = random_matrix<double>(12, 9, rng);
  const auto full = truncated_svd<double>(M, 0.0);
  EXPECT_EQ(full.rank(), 9);
  EXPECT_LT((full.U * full.sigma.asDiagonal() * full.V.adjoint() - M).norm(), 1e-13 * M.norm());

  MatrixXd D = MatrixXd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 1e-9;
  const auto t = truncated_svd<double>(D, 1e-6);
  ASSERT_EQ(t.rank(), 1);
  EXPECT_NEAR(std::abs(t.U(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(t.U(1, 0), 0.0, 1e-15);

  const MatrixXd R = random_matrix<double>(30, 30, rng);
  const auto tr = truncated_svd<double>(R, 1e-3);
  const MatrixXd E = R - tr.U * tr.sigma.asDiagonal() * tr.V.adjoint();
  EXPECT_LE(singular_values<double>(E)(0), 1e-3 * singular_values<double>(R)(0));
}

TEST(TruncatedSvd, Invariants) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix<complex> M = random_matrix<complex>(25, 6, rng) * random_matrix<complex>(6, 18, rng) +
                              1e-8 * random_matrix<complex>(25, 18, rng);
    const double eps = 1e-6;
    const auto t = truncated_svd<complex>(M, eps, false);
    EXPECT_LT((t.U.adjoint() * t.U - Matrix<complex>::Identity(t.rank(), t.rank())).norm(), 1e-12);
    for (Index a = 1; a < t.rank(); ++a) EXPECT_GE(t.sigma(a - 1), t.sigma(a));
    EXPECT_GE(t.sigma.minCoeff(), 0.0);
    const VectorXd all = singular_values<complex>(M);
    for (Index a = t.rank(); a < all.size(); ++a) EXPECT_LE(all(a), eps * all(0));
    EXPECT_EQ(t.rank(), 6);
  }
}

}  // namespace
}  // namespace smash
