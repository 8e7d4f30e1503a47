#ifndef SMASH_TESTS_COMMON_HPP
#define SMASH_TESTS_COMMON_HPP

#include <memory>
#include <random>

#include "smash/cluster_tree.hpp"
#include "smash/h2.hpp"
#include "smash/hss.hpp"
#include "smash/kernel.hpp"

namespace smash::test {

/// Dense A from plain double loops over eval.
template <typename Scalar>
Matrix<Scalar> dense_of(const Kernel<Scalar>& k) {
  Matrix<Scalar> A(k.rows(), k.cols());
  for (Index i = 0; i < k.rows(); ++i)
    for (Index j = 0; j < k.cols(); ++j) A(i, j) = k.eval(i, j);
  return A;
}

/// Cauchy-like entries Σ_l w_il v_jl / (x_i − y_j) summed directly.
template <typename Scalar>
Matrix<Scalar> cauchy_like_dense(const PointSet& X, const PointSet& Y, const Matrix<Scalar>& w,
                                 const Matrix<Scalar>& v) {
  Matrix<Scalar> A(X.size(), Y.size());
  for (Index i = 0; i < X.size(); ++i)
    for (Index j = 0; j < Y.size(); ++j) {
      Scalar x, y;
      if constexpr (is_complex_v<Scalar>) {
        x = X.as_complex(i);
        y = Y.as_complex(j);
      } else {
        x = X.coords(0, i);
        y = Y.coords(0, j);
      }
      Scalar s(0);
      for (Index l = 0; l < w.cols(); ++l) s += w(i, l) * v(j, l) / (x - y);
      A(i, j) = s;
    }
  return A;
}

template <typename Scalar>
Matrix<Scalar> random_matrix(Index m, Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix<Scalar> M(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      if constexpr (is_complex_v<Scalar>) M(i, j) = Scalar(g(rng), g(rng));
      else M(i, j) = g(rng);
    }
  return M;
}

template <typename Scalar>
Vector<Scalar> random_vector(Index n, std::mt19937_64& rng) {
  return random_matrix<Scalar>(n, 1, rng).col(0);
}

inline PointSet uniform_line(Index n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = double(k + 1) / double(n + 1);
  return PointSet::from_real(x);
}

inline std::shared_ptr<const ClusterTree> tree_of(const PointSet& X, const PointSet& Y, Index leaf_cap,
                                                  Branching mode) {
  TreeOptions to;
  to.leaf_cap = leaf_cap;
  to.mode = mode;
  return std::make_shared<ClusterTree>(build_tree(X, Y, to));
}

/// Interval Cauchy problem with the usual parameters for ε = 1e−8.
struct IntervalCauchy {
  PointPair pts;
  std::shared_ptr<const CauchyKernel<double>> kernel;
  std::shared_ptr<const ClusterTree> tree;
  BuildParams params;

  explicit IntervalCauchy(Index n, Index leaf_cap = 50, std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    pts = cauchy_points(Geometry::interval, n, rng);
    kernel = std::make_shared<CauchyKernel<double>>(pts.X, pts.Y, 0.0);
    tree = tree_of(pts.X, pts.Y, leaf_cap, Branching::binary);
    params.tau = 0.6;
    params.expansion = {Expansion::taylor, 21};
    params.svd_tol = 1e-9;
  }
  HMatrix<double> hss() const { return build_hss<double>(tree, kernel, params); }
};

/// Uniform m×m grid Cauchy kernel with unit diagonal on a 2^d tree.
struct GridCauchy {
  PointPair pts;
  std::shared_ptr<const CauchyKernel<complex>> kernel;
  std::shared_ptr<const ClusterTree> tree;
  BuildParams params;

  explicit GridCauchy(Index n, Index leaf_cap = 50, int order = 22) {
    std::mt19937_64 rng(1);
    pts = cauchy_points(Geometry::grid2d, n, rng);
    kernel = std::make_shared<CauchyKernel<complex>>(pts.X, pts.Y, complex(1.0));
    tree = tree_of(pts.X, pts.Y, leaf_cap, Branching::two_to_d);
    params.tau = 0.65;
    params.expansion = {Expansion::taylor, order};
  }
  HMatrix<complex> h2() const { return build_h2<complex>(tree, kernel, params); }
};

template <typename Scalar>
double rel_err(const Matrix<Scalar>& a, const Matrix<Scalar>& ref) {
  return (a - ref).norm() / ref.norm();
}

template <typename Scalar>
double rel_err(const Vector<Scalar>& a, const Vector<Scalar>& ref) {
  return (a - ref).norm() / ref.norm();
}

}  // namespace smash::test

#endif
