#include "smash/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smash {

Expansion parse_expansion(const std::string& name) {
  if (name == "taylor") return Expansion::taylor;
  if (name == "chebyshev" || name == "interp") return Expansion::chebyshev;
  throw ValidationError("unknown expansion: " + name);
}

namespace taylor {

namespace {

double growth(int r) { return std::pow(2.0 * std::numbers::pi * r, 1.0 / (2.0 * r)); }

// log((l/e)^l / l!), the Stirling-balanced part of φ.
double log_balance(int l) {
  if (l == 0) return 0.0;
  return l * std::log(double(l)) - l - std::lgamma(l + 1.0);
}

double safe_delta(double delta) { return delta > 0.0 ? delta : 1.0; }

}  // namespace

double eta(int l, double delta, int r) {
  if (l == 0) return 1.0;
  return std::pow(l / std::numbers::e * growth(r) / safe_delta(delta), l);
}

complex phi(int l, complex x, double delta, int r) {
  if (l == 0) return 1.0;
  const complex w = x * (growth(r) / safe_delta(delta));
  return std::pow(w, l) * std::exp(log_balance(l));
}

complex coefficient(int k, int l, complex a, complex b, double delta_a, double delta_b, int r) {
  if (l < 0 || l > k) return 0.0;
  const double g = growth(r);
  const double e = std::numbers::e;
  const int m = k - l;
  // k! / (η_{a,l} η_{b,m}) evaluated in log space.
  double logmag = std::lgamma(k + 1.0);
  if (l > 0) logmag += l * std::log(e * safe_delta(delta_a) / (l * g));
  if (m > 0) logmag += m * std::log(e * safe_delta(delta_b) / (m * g));
  const complex inv = 1.0 / (b - a);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return -sign * std::exp(logmag) * std::pow(inv, k + 1);
}

Matrix<complex> basis(std::span<const complex> z, complex center, double delta, int r) {
  Matrix<complex> U(static_cast<Index>(z.size()), r);
  const double scale = growth(r) / safe_delta(delta);
  for (Index i = 0; i < U.rows(); ++i) {
    const complex w = (z[static_cast<std::size_t>(i)] - center) * scale;
    complex p = 1.0;
    for (int l = 0; l < r; ++l) {
      U(i, l) = p * std::exp(log_balance(l));
      p *= w;
    }
  }
  return U;
}

Matrix<complex> coupling(complex a, complex b, double delta_a, double delta_b, int r) {
  Matrix<complex> B = Matrix<complex>::Zero(r, r);
  for (int l = 0; l < r; ++l)
    for (int m = 0; l + m < r; ++m) B(l, m) = coefficient(l + m, l, a, b, delta_a, delta_b, r);
  return B;
}

double error_bound(double tau, int r) { return (1.0 + tau) * std::pow(tau, r) / (1.0 - tau); }

}  // namespace taylor

namespace {

complex center_of(const Box& box) {
  const VectorXd c = box.center();
  return {c(0), c.size() > 1 ? c(1) : 0.0};
}

}  // namespace

TaylorBases taylor_bases(const Box& box_i, const Box& box_j, std::span<const complex> x,
                         std::span<const complex> y, int r) {
  require(r >= 1, "taylor_bases: order must be positive");
  const complex a = center_of(box_i), b = center_of(box_j);
  require(a != b, "taylor_bases: coincident centers");
  TaylorBases out;
  out.U = taylor::basis(x, a, box_i.radius(), r);
  out.V = taylor::basis(y, b, box_j.radius(), r);
  out.B = taylor::coupling(a, b, box_i.radius(), box_j.radius(), r);
  return out;
}

VectorXd chebyshev_nodes(double lo, double hi, int m) {
  VectorXd x(m);
  for (int k = 0; k < m; ++k)
    x(k) = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * m));
  return x;
}

namespace {

// Cardinal values of the m Chebyshev nodes on [lo, hi] at t (barycentric form).
VectorXd cardinals(double lo, double hi, int m, double t) {
  const VectorXd x = chebyshev_nodes(lo, hi, m);
  VectorXd out = VectorXd::Zero(m);
  for (int k = 0; k < m; ++k) {
    if (t == x(k)) {
      out(k) = 1.0;
      return out;
    }
  }
  double denom = 0.0;
  for (int k = 0; k < m; ++k) {
    const double w = ((k % 2) ? -1.0 : 1.0) * std::sin((2.0 * k + 1.0) * std::numbers::pi / (2.0 * m));
    out(k) = w / (t - x(k));
    denom += out(k);
  }
  return out / denom;
}

int per_axis(Index d, int r) {
  if (d == 1) return r;
  return static_cast<int>(std::ceil(std::sqrt(double(r)) - 1e-12));
}

// Tensor multi-indices (a, b) sorted by total degree, then by a.
std::vector<std::pair<int, int>> tensor_order(int m, int r) {
  std::vector<std::pair<int, int>> idx;
  for (int s = 0; s <= 2 * (m - 1); ++s)
    for (int a = 0; a < m; ++a)
      if (s - a >= 0 && s - a < m) idx.emplace_back(a, s - a);
  idx.resize(static_cast<std::size_t>(std::min<int>(r, static_cast<int>(idx.size()))));
  return idx;
}

void check_box(const Box& box) {
  require(box.dim() == 1 || box.dim() == 2, "interp_basis: dimension must be 1 or 2");
  for (Index k = 0; k < box.dim(); ++k)
    require(box.hi(k) > box.lo(k), "interp_basis: degenerate box gives duplicate nodes");
}

}  // namespace

MatrixXd interp_basis(const Box& box, const PointSet& points, std::span<const Index> idx, int r) {
  require(r >= 1, "interp_basis: order must be positive");
  check_box(box);
  const Index d = box.dim();
  const int m = per_axis(d, r);
  MatrixXd U(static_cast<Index>(idx.size()), d == 1 ? r : static_cast<Index>(tensor_order(m, r).size()));
  if (d == 1) {
    for (Index i = 0; i < U.rows(); ++i)
      U.row(i) = cardinals(box.lo(0), box.hi(0), m, points.coords(0, idx[static_cast<std::size_t>(i)])).transpose();
    return U;
  }
  const auto order = tensor_order(m, r);
  for (Index i = 0; i < U.rows(); ++i) {
    const Index p = idx[static_cast<std::size_t>(i)];
    const VectorXd cx = cardinals(box.lo(0), box.hi(0), m, points.coords(0, p));
    const VectorXd cy = cardinals(box.lo(1), box.hi(1), m, points.coords(1, p));
    for (std::size_t k = 0; k < order.size(); ++k)
      U(i, static_cast<Index>(k)) = cx(order[k].first) * cy(order[k].second);
  }
  return U;
}

MatrixXd interp_nodes(const Box& box, int r) {
  check_box(box);
  const Index d = box.dim();
  const int m = per_axis(d, r);
  if (d == 1) {
    MatrixXd out(1, r);
    out.row(0) = chebyshev_nodes(box.lo(0), box.hi(0), m).transpose();
    return out;
  }
  const auto order = tensor_order(m, r);
  const VectorXd x = chebyshev_nodes(box.lo(0), box.hi(0), m);
  const VectorXd y = chebyshev_nodes(box.lo(1), box.hi(1), m);
  MatrixXd out(2, static_cast<Index>(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) {
    out(0, static_cast<Index>(k)) = x(order[k].first);
    out(1, static_cast<Index>(k)) = y(order[k].second);
  }
  return out;
}

}  // namespace smash
