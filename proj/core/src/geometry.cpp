#include "smash/geometry.hpp"

#include <cmath>
#include <limits>

namespace smash {

PointSet PointSet::from_complex(const std::vector<complex>& z) {
  MatrixXd c(2, static_cast<Index>(z.size()));
  for (Index i = 0; i < c.cols(); ++i) {
    c(0, i) = z[i].real();
    c(1, i) = z[i].imag();
  }
  return PointSet(std::move(c));
}

PointSet PointSet::from_real(const std::vector<double>& x) {
  MatrixXd c(1, static_cast<Index>(x.size()));
  for (Index i = 0; i < c.cols(); ++i) c(0, i) = x[i];
  return PointSet(std::move(c));
}

bool Box::contains(const Eigen::Ref<const VectorXd>& p) const {
  for (Index k = 0; k < dim(); ++k)
    if (p(k) < lo(k) || p(k) > hi(k)) return false;
  return true;
}

Box Box::bounding(const PointSet& a, const PointSet& b) {
  const Index d = a.size() > 0 ? a.dim() : b.dim();
  Box box;
  box.lo = VectorXd::Constant(d, std::numeric_limits<double>::infinity());
  box.hi = VectorXd::Constant(d, -std::numeric_limits<double>::infinity());
  for (const PointSet* s : {&a, &b}) {
    for (Index i = 0; i < s->size(); ++i) {
      box.lo = box.lo.cwiseMin(s->point(i));
      box.hi = box.hi.cwiseMax(s->point(i));
    }
  }
  return box;
}

bool well_separated(const Box& b1, const Box& b2, double tau) {
  const double dist = (b1.center() - b2.center()).norm();
  if (dist == 0.0) return false;
  return b1.radius() + b2.radius() <= tau * dist;
}

}  // namespace smash
