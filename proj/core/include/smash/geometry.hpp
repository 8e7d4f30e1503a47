#ifndef SMASH_GEOMETRY_HPP
#define SMASH_GEOMETRY_HPP

#include <string>

#include "smash/config.hpp"

namespace smash {

/// Points stored column-wise, d x n. Complex-plane points use d = 2.
struct PointSet {
  MatrixXd coords;

  PointSet() = default;
  explicit PointSet(MatrixXd c) : coords(std::move(c)) {}

  Index dim() const { return coords.rows(); }
  Index size() const { return coords.cols(); }
  auto point(Index i) const { return coords.col(i); }
  complex as_complex(Index i) const {
    return {coords(0, i), coords.rows() > 1 ? coords(1, i) : 0.0};
  }

  static PointSet from_complex(const std::vector<complex>& z);
  static PointSet from_real(const std::vector<double>& x);
};

/// Axis-aligned box; center and half-diagonal radius are derived.
struct Box {
  VectorXd lo;
  VectorXd hi;

  Index dim() const { return lo.size(); }
  VectorXd center() const { return 0.5 * (lo + hi); }
  double radius() const { return 0.5 * (hi - lo).norm(); }
  bool contains(const Eigen::Ref<const VectorXd>& p) const;

  static Box bounding(const PointSet& a, const PointSet& b);
};

/// δ_a + δ_b ≤ τ |a − b|.
bool well_separated(const Box& b1, const Box& b2, double tau);

}  // namespace smash

#endif
