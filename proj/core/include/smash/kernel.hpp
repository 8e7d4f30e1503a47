#ifndef SMASH_KERNEL_HPP
#define SMASH_KERNEL_HPP

#include <functional>
#include <memory>
#include <random>
#include <span>

#include "smash/curves.hpp"
#include "smash/expansion.hpp"
#include "smash/geometry.hpp"

namespace smash {

/// Matrix entries A(i, j) = κ(x_i, y_j) over a pair of point sets.
///
/// Besides entry evaluation a kernel supplies farfield bases: row_basis spans
/// κ(·, y) on the given rows for every y well separated from `box`, and
/// col_basis does the same for κ(x, ·).
template <typename Scalar>
class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual const PointSet& row_points() const = 0;
  virtual const PointSet& col_points() const = 0;
  virtual Scalar eval(Index i, Index j) const = 0;

  Index rows() const { return row_points().size(); }
  Index cols() const { return col_points().size(); }

  virtual void block(std::span<const Index> r, std::span<const Index> c, Matrix<Scalar>& out) const;
  Matrix<Scalar> block(std::span<const Index> r, std::span<const Index> c) const;

  virtual Matrix<Scalar> row_basis(std::span<const Index> r, const Box& box,
                                   const ExpansionOptions& opts) const;
  virtual Matrix<Scalar> col_basis(std::span<const Index> c, const Box& box,
                                   const ExpansionOptions& opts) const;
};

/// 1/(x − y), and d_x where x = y. Real points for Scalar = double, complex-plane
/// points (d = 2) for Scalar = complex.
template <typename Scalar>
class CauchyKernel : public Kernel<Scalar> {
 public:
  CauchyKernel(PointSet X, PointSet Y, Scalar diagonal = Scalar(0));

  const PointSet& row_points() const override { return X_; }
  const PointSet& col_points() const override { return Y_; }
  Scalar eval(Index i, Index j) const override;
  using Kernel<Scalar>::block;
  void block(std::span<const Index> r, std::span<const Index> c, Matrix<Scalar>& out) const override;
  Matrix<Scalar> row_basis(std::span<const Index> r, const Box& box,
                           const ExpansionOptions& opts) const override;
  Matrix<Scalar> col_basis(std::span<const Index> c, const Box& box,
                           const ExpansionOptions& opts) const override;

  Scalar x(Index i) const { return x_[static_cast<std::size_t>(i)]; }
  Scalar y(Index j) const { return y_[static_cast<std::size_t>(j)]; }

 private:
  Matrix<Scalar> basis(const PointSet& P, const std::vector<Scalar>& z, std::span<const Index> idx,
                       const Box& box, const ExpansionOptions& opts) const;

  PointSet X_, Y_;
  std::vector<Scalar> x_, y_;
  Scalar diagonal_;
};

/// a_ij = Σ_l w_il v_jl / (x_i − y_j).
template <typename Scalar>
class CauchyLikeKernel : public Kernel<Scalar> {
 public:
  CauchyLikeKernel(PointSet X, PointSet Y, Matrix<Scalar> w, Matrix<Scalar> v);

  const PointSet& row_points() const override { return cauchy_.row_points(); }
  const PointSet& col_points() const override { return cauchy_.col_points(); }
  Scalar eval(Index i, Index j) const override;
  Matrix<Scalar> row_basis(std::span<const Index> r, const Box& box,
                           const ExpansionOptions& opts) const override;
  Matrix<Scalar> col_basis(std::span<const Index> c, const Box& box,
                           const ExpansionOptions& opts) const override;

  const CauchyKernel<Scalar>& cauchy() const { return cauchy_; }
  const Matrix<Scalar>& w() const { return w_; }
  const Matrix<Scalar>& v() const { return v_; }

 private:
  CauchyKernel<Scalar> cauchy_;
  Matrix<Scalar> w_, v_;
};

/// Nyström matrix of K − ½I for the Laplace double layer on a closed curve,
/// entries κ(t_i, t_j)/n − ½δ_ij with nodes t_j = j/n.
class LaplaceDlpKernel : public Kernel<double> {
 public:
  LaplaceDlpKernel(CurveSpec curve, Index n);

  const PointSet& row_points() const override { return pts_; }
  const PointSet& col_points() const override { return pts_; }
  double eval(Index i, Index j) const override;
  Matrix<double> row_basis(std::span<const Index> r, const Box& box,
                           const ExpansionOptions& opts) const override;
  Matrix<double> col_basis(std::span<const Index> c, const Box& box,
                           const ExpansionOptions& opts) const override;

  const CurveSpec& curve() const { return curve_; }
  double node(Index j) const { return double(j) / double(n_); }

  /// κ(s, t) without the 1/n weight; the diagonal limit is used when s = t.
  static double kappa(const CurveSpec& curve, double s, double t);
  /// κ_x(t) = ∂Φ(x, r(t))/∂ν_y |r′(t)|.
  static double kappa_at(const CurveSpec& curve, const Vec2& x, double t);
  /// −c(t)|r′(t)|/(4π).
  static double diagonal_limit(const CurveSpec& curve, double t);

 private:
  CurveSpec curve_;
  Index n_;
  PointSet pts_;
  std::vector<complex> z_;
  /// Scaled outward normal (r2′, −r1′) as a complex number.
  std::vector<complex> normal_;
  std::vector<double> diag_;
};

/// Kernel given by a callable on point columns; interpolation bases only.
template <typename Scalar>
class FunctionKernel : public Kernel<Scalar> {
 public:
  using Fn = std::function<Scalar(const Eigen::Ref<const VectorXd>&, const Eigen::Ref<const VectorXd>&)>;
  FunctionKernel(PointSet X, PointSet Y, Fn fn) : X_(std::move(X)), Y_(std::move(Y)), fn_(std::move(fn)) {}

  const PointSet& row_points() const override { return X_; }
  const PointSet& col_points() const override { return Y_; }
  Scalar eval(Index i, Index j) const override { return fn_(X_.point(i), Y_.point(j)); }

 private:
  PointSet X_, Y_;
  Fn fn_;
};

/// Default dense-oracle budget in entries.
inline constexpr Index kDefaultDenseBudget = Index{5120} * 5120;

template <typename Scalar>
Matrix<Scalar> assemble_dense(const Kernel<Scalar>& kernel, Index budget = kDefaultDenseBudget);

enum class Geometry { interval, grid2d, ramhead, sunflower, honeybee, snail, circle };

Geometry parse_geometry(const std::string& name);
std::string to_string(Geometry g);

struct PointPair {
  PointSet X, Y;
};

/// Cauchy point sets: x_k = γ(t_k), y_k = γ(t_k + 1e−7·rand) with t_k = k/(n+1), where
/// γ is the real line for `interval` and the curve otherwise. `grid2d` gives a uniform
/// m×m grid at cell centers of [0,1]² (n must be a square) with X = Y.
PointPair cauchy_points(Geometry g, Index n, std::mt19937_64& rng);

/// Points on the real line (d = 1) for interval; complex-plane points (d = 2) otherwise.
inline bool geometry_is_real(Geometry g) { return g == Geometry::interval; }

}  // namespace smash

#endif
