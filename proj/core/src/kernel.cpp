#include "smash/kernel.hpp"

#include <cmath>
#include <numbers>

namespace smash {

namespace {

template <typename Scalar>
std::vector<Scalar> to_scalars(const PointSet& P) {
  std::vector<Scalar> z(static_cast<std::size_t>(P.size()));
  for (Index i = 0; i < P.size(); ++i) {
    if constexpr (is_complex_v<Scalar>) z[static_cast<std::size_t>(i)] = P.as_complex(i);
    else z[static_cast<std::size_t>(i)] = P.coords(0, i);
  }
  return z;
}

complex box_center(const Box& box) {
  const VectorXd c = box.center();
  return {c(0), c.size() > 1 ? c(1) : 0.0};
}

template <typename Scalar>
Matrix<Scalar> cast_basis(const Matrix<complex>& U) {
  if constexpr (is_complex_v<Scalar>) return U;
  else return U.real();
}

}  // namespace

template <typename Scalar>
void Kernel<Scalar>::block(std::span<const Index> r, std::span<const Index> c, Matrix<Scalar>& out) const {
  out.resize(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
  for (Index j = 0; j < out.cols(); ++j)
    for (Index i = 0; i < out.rows(); ++i)
      out(i, j) = eval(r[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
}

template <typename Scalar>
Matrix<Scalar> Kernel<Scalar>::block(std::span<const Index> r, std::span<const Index> c) const {
  Matrix<Scalar> out;
  block(r, c, out);
  return out;
}

template <typename Scalar>
Matrix<Scalar> Kernel<Scalar>::row_basis(std::span<const Index> r, const Box& box,
                                         const ExpansionOptions& opts) const {
  require(opts.kind == Expansion::chebyshev, "kernel supports interpolation bases only");
  return interp_basis(box, row_points(), r, opts.order).template cast<Scalar>();
}

template <typename Scalar>
Matrix<Scalar> Kernel<Scalar>::col_basis(std::span<const Index> c, const Box& box,
                                         const ExpansionOptions& opts) const {
  require(opts.kind == Expansion::chebyshev, "kernel supports interpolation bases only");
  return interp_basis(box, col_points(), c, opts.order).template cast<Scalar>();
}

// ---------------------------------------------------------------- Cauchy

template <typename Scalar>
CauchyKernel<Scalar>::CauchyKernel(PointSet X, PointSet Y, Scalar diagonal)
    : X_(std::move(X)), Y_(std::move(Y)), diagonal_(diagonal) {
  if constexpr (!is_complex_v<Scalar>) {
    require((X_.size() == 0 || X_.dim() == 1) && (Y_.size() == 0 || Y_.dim() == 1),
            "real Cauchy kernel requires points on the real line");
  } else {
    require(X_.dim() <= 2 && Y_.dim() <= 2, "complex Cauchy kernel requires d <= 2");
  }
  x_ = to_scalars<Scalar>(X_);
  y_ = to_scalars<Scalar>(Y_);
}

template <typename Scalar>
Scalar CauchyKernel<Scalar>::eval(Index i, Index j) const {
  const Scalar d = x(i) - y(j);
  return d == Scalar(0) ? diagonal_ : Scalar(1) / d;
}

template <typename Scalar>
void CauchyKernel<Scalar>::block(std::span<const Index> r, std::span<const Index> c,
                                 Matrix<Scalar>& out) const {
  out.resize(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    const Scalar yj = y(c[static_cast<std::size_t>(j)]);
    for (Index i = 0; i < out.rows(); ++i) {
      const Scalar d = x(r[static_cast<std::size_t>(i)]) - yj;
      out(i, j) = d == Scalar(0) ? diagonal_ : Scalar(1) / d;
    }
  }
}

template <typename Scalar>
Matrix<Scalar> CauchyKernel<Scalar>::basis(const PointSet& P, const std::vector<Scalar>& z,
                                           std::span<const Index> idx, const Box& box,
                                           const ExpansionOptions& opts) const {
  if (opts.kind == Expansion::chebyshev)
    return interp_basis(box, P, idx, opts.order).template cast<Scalar>();
  std::vector<complex> w(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) w[k] = complex(z[static_cast<std::size_t>(idx[k])]);
  return cast_basis<Scalar>(taylor::basis(w, box_center(box), box.radius(), opts.order));
}

template <typename Scalar>
Matrix<Scalar> CauchyKernel<Scalar>::row_basis(std::span<const Index> r, const Box& box,
                                               const ExpansionOptions& opts) const {
  return basis(X_, x_, r, box, opts);
}

template <typename Scalar>
Matrix<Scalar> CauchyKernel<Scalar>::col_basis(std::span<const Index> c, const Box& box,
                                               const ExpansionOptions& opts) const {
  return basis(Y_, y_, c, box, opts);
}

// ----------------------------------------------------------- Cauchy-like

template <typename Scalar>
CauchyLikeKernel<Scalar>::CauchyLikeKernel(PointSet X, PointSet Y, Matrix<Scalar> w, Matrix<Scalar> v)
    : cauchy_(std::move(X), std::move(Y)), w_(std::move(w)), v_(std::move(v)) {
  require(w_.rows() == cauchy_.rows() && v_.rows() == cauchy_.cols(),
          "cauchy_like: generator rows must match the point counts");
  require(w_.cols() == v_.cols() && w_.cols() >= 1, "cauchy_like: w and v need the same p >= 1");
}

template <typename Scalar>
Scalar CauchyLikeKernel<Scalar>::eval(Index i, Index j) const {
  const Scalar d = cauchy_.x(i) - cauchy_.y(j);
  if (d == Scalar(0)) throw NumericalError("cauchy_like: coincident points give a non-finite entry");
  return (w_.row(i).array() * v_.row(j).array()).sum() / d;
}

template <typename Scalar>
Matrix<Scalar> CauchyLikeKernel<Scalar>::row_basis(std::span<const Index> r, const Box& box,
                                                   const ExpansionOptions& opts) const {
  const Matrix<Scalar> U = cauchy_.row_basis(r, box, opts);
  Matrix<Scalar> out(U.rows(), U.cols() * w_.cols());
  for (Index l = 0; l < w_.cols(); ++l)
    for (Index i = 0; i < U.rows(); ++i)
      out.block(i, l * U.cols(), 1, U.cols()) = w_(r[static_cast<std::size_t>(i)], l) * U.row(i);
  return out;
}

template <typename Scalar>
Matrix<Scalar> CauchyLikeKernel<Scalar>::col_basis(std::span<const Index> c, const Box& box,
                                                   const ExpansionOptions& opts) const {
  const Matrix<Scalar> V = cauchy_.col_basis(c, box, opts);
  Matrix<Scalar> out(V.rows(), V.cols() * v_.cols());
  for (Index l = 0; l < v_.cols(); ++l)
    for (Index j = 0; j < V.rows(); ++j)
      out.block(j, l * V.cols(), 1, V.cols()) = v_(c[static_cast<std::size_t>(j)], l) * V.row(j);
  return out;
}

// --------------------------------------------------------- Laplace DLP

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

LaplaceDlpKernel::LaplaceDlpKernel(CurveSpec curve, Index n) : curve_(curve), n_(n) {
  require(curve_.closed(), "laplace_dlp requires a closed curve");
  require(n >= 8, "laplace_dlp requires n >= 8");
  MatrixXd c(2, n);
  z_.resize(static_cast<std::size_t>(n));
  normal_.resize(static_cast<std::size_t>(n));
  diag_.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const double t = node(j);
    const Vec2 p = curve_.point(t), d = curve_.d1(t);
    c.col(j) = p;
    z_[static_cast<std::size_t>(j)] = {p(0), p(1)};
    normal_[static_cast<std::size_t>(j)] = {d(1), -d(0)};
    diag_[static_cast<std::size_t>(j)] = diagonal_limit(curve_, t);
  }
  pts_ = PointSet(std::move(c));
}

double LaplaceDlpKernel::diagonal_limit(const CurveSpec& curve, double t) {
  return -curve.curvature(t) * curve.d1(t).norm() / (2.0 * kTwoPi);
}

double LaplaceDlpKernel::kappa_at(const CurveSpec& curve, const Vec2& x, double t) {
  const Vec2 y = curve.point(t), d = curve.d1(t);
  const Vec2 w = y - x;
  return -(w(0) * d(1) - w(1) * d(0)) / (kTwoPi * w.squaredNorm());
}

double LaplaceDlpKernel::kappa(const CurveSpec& curve, double s, double t) {
  if (s == t) return diagonal_limit(curve, t);
  return kappa_at(curve, curve.point(s), t);
}

double LaplaceDlpKernel::eval(Index i, Index j) const {
  const double w = 1.0 / double(n_);
  if (i == j) return diag_[static_cast<std::size_t>(i)] * w - 0.5;
  // κ = Re(ñ / (x − y)) / (2π) with ñ = r2′ − i r1′.
  const complex g = normal_[static_cast<std::size_t>(j)] / (z_[static_cast<std::size_t>(i)] - z_[static_cast<std::size_t>(j)]);
  return g.real() * w / kTwoPi;
}

Matrix<double> LaplaceDlpKernel::row_basis(std::span<const Index> r, const Box& box,
                                           const ExpansionOptions& opts) const {
  if (opts.kind == Expansion::chebyshev) return interp_basis(box, pts_, r, opts.order);
  std::vector<complex> w(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) w[k] = z_[static_cast<std::size_t>(r[k])];
  const Matrix<complex> U = taylor::basis(w, box_center(box), box.radius(), opts.order);
  // Harmonic expansion: real and imaginary parts; Im φ_0 vanishes.
  MatrixXd out(U.rows(), 2 * U.cols() - 1);
  out.leftCols(U.cols()) = U.real();
  out.rightCols(U.cols() - 1) = U.rightCols(U.cols() - 1).imag();
  return out;
}

Matrix<double> LaplaceDlpKernel::col_basis(std::span<const Index> c, const Box& box,
                                           const ExpansionOptions& opts) const {
  if (opts.kind == Expansion::chebyshev) {
    const MatrixXd P = interp_basis(box, pts_, c, opts.order);
    MatrixXd out(P.rows(), 2 * P.cols());
    for (Index j = 0; j < P.rows(); ++j) {
      const complex nu = normal_[static_cast<std::size_t>(c[static_cast<std::size_t>(j)])];
      out.row(j).head(P.cols()) = nu.real() * P.row(j);
      out.row(j).tail(P.cols()) = nu.imag() * P.row(j);
    }
    return out;
  }
  std::vector<complex> w(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) w[k] = z_[static_cast<std::size_t>(c[k])];
  Matrix<complex> V = taylor::basis(w, box_center(box), box.radius(), opts.order);
  for (Index j = 0; j < V.rows(); ++j) V.row(j) *= normal_[static_cast<std::size_t>(c[static_cast<std::size_t>(j)])];
  MatrixXd out(V.rows(), 2 * V.cols());
  out.leftCols(V.cols()) = V.real();
  out.rightCols(V.cols()) = V.imag();
  return out;
}

// ------------------------------------------------------------ assembly

template <typename Scalar>
Matrix<Scalar> assemble_dense(const Kernel<Scalar>& kernel, Index budget) {
  if (kernel.rows() * kernel.cols() > budget)
    throw ValidationError("assemble_dense: dense budget exceeded");
  IndexList r(static_cast<std::size_t>(kernel.rows())), c(static_cast<std::size_t>(kernel.cols()));
  for (Index i = 0; i < kernel.rows(); ++i) r[static_cast<std::size_t>(i)] = i;
  for (Index j = 0; j < kernel.cols(); ++j) c[static_cast<std::size_t>(j)] = j;
  Matrix<Scalar> A = kernel.block(r, c);
  if (!A.allFinite()) throw NumericalError("assemble_dense: non-finite kernel entry");
  return A;
}

// ------------------------------------------------------------ geometry

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::interval: return "interval";
    case Geometry::grid2d: return "grid2d";
    case Geometry::ramhead: return "ramhead";
    case Geometry::sunflower: return "sunflower";
    case Geometry::honeybee: return "honeybee";
    case Geometry::snail: return "snail";
    case Geometry::circle: return "circle";
  }
  return "unknown";
}

Geometry parse_geometry(const std::string& name) {
  for (Geometry g : {Geometry::interval, Geometry::grid2d, Geometry::ramhead, Geometry::sunflower,
                     Geometry::honeybee, Geometry::snail, Geometry::circle})
    if (to_string(g) == name) return g;
  throw ValidationError("unknown geometry: " + name);
}

PointPair cauchy_points(Geometry g, Index n, std::mt19937_64& rng) {
  require(n >= 1, "cauchy_points: n must be positive");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (g == Geometry::grid2d) {
    const Index m = static_cast<Index>(std::llround(std::sqrt(double(n))));
    require(m * m == n, "grid2d requires n to be a perfect square");
    MatrixXd c(2, n);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b) c.col(a * m + b) << (b + 0.5) / m, (a + 0.5) / m;
    return {PointSet(c), PointSet(c)};
  }
  const double h = 1.0 / double(n + 1);
  if (g == Geometry::interval) {
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
      x[static_cast<std::size_t>(k)] = (k + 1) * h;
      y[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(k)] + 1e-7 * unif(rng);
    }
    return {PointSet::from_real(x), PointSet::from_real(y)};
  }
  CurveSpec curve{CurveId::circle};
  switch (g) {
    case Geometry::ramhead: curve.id = CurveId::ramhead; break;
    case Geometry::sunflower: curve.id = CurveId::sunflower; break;
    case Geometry::honeybee: curve.id = CurveId::honeybee; break;
    case Geometry::snail: curve.id = CurveId::snail; break;
    default: break;
  }
  std::vector<complex> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    const double t = (k + 1) * h;
    const Vec2 p = curve.point(t), q = curve.point(t + 1e-7 * unif(rng));
    x[static_cast<std::size_t>(k)] = {p(0), p(1)};
    y[static_cast<std::size_t>(k)] = {q(0), q(1)};
  }
  return {PointSet::from_complex(x), PointSet::from_complex(y)};
}

template class Kernel<double>;
template class Kernel<complex>;
template class CauchyKernel<double>;
template class CauchyKernel<complex>;
template class CauchyLikeKernel<double>;
template class CauchyLikeKernel<complex>;
template Matrix<double> assemble_dense(const Kernel<double>&, Index);
template Matrix<complex> assemble_dense(const Kernel<complex>&, Index);

}  // namespace smash
