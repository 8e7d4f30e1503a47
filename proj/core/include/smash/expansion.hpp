#ifndef SMASH_EXPANSION_HPP
#define SMASH_EXPANSION_HPP

#include <span>

#include "smash/geometry.hpp"

namespace smash {

enum class Expansion { taylor, chebyshev };

struct ExpansionOptions {
  Expansion kind = Expansion::taylor;
  int order = 10;
};

Expansion parse_expansion(const std::string& name);

namespace taylor {

/// η_{v,l} for a box of radius δ and expansion order r.
double eta(int l, double delta, int r);

/// φ_{v,l}(x) = η_{v,l} x^l / l!, evaluated without forming η or l! separately.
complex phi(int l, complex x, double delta, int r);

/// c_{k,l} for centers a, b with radii δ_a, δ_b.
complex coefficient(int k, int l, complex a, complex b, double delta_a, double delta_b, int r);

/// Scaled-monomial basis [φ_{a,l}(z − a)], l = 0..r−1.
Matrix<complex> basis(std::span<const complex> z, complex center, double delta, int r);

/// Anti-triangular B̂ with B̂(l, m) = c_{l+m, l}.
Matrix<complex> coupling(complex a, complex b, double delta_a, double delta_b, int r);

/// (1+τ)τ^r / (1−τ).
double error_bound(double tau, int r);

}  // namespace taylor

struct TaylorBases {
  Matrix<complex> U, B, V;
};

/// Û_i B̂ V̂_jᵀ ≈ 1/(x − y) for x in box_i, y in box_j.
TaylorBases taylor_bases(const Box& box_i, const Box& box_j, std::span<const complex> x,
                         std::span<const complex> y, int r);

/// Chebyshev nodes of the first kind on [lo, hi].
VectorXd chebyshev_nodes(double lo, double hi, int m);

/// Lagrange cardinal polynomials of the Chebyshev grid of `box`, evaluated at the given
/// columns of `points`. In 2D the grid has ceil(sqrt(r)) nodes per axis and the first r
/// tensor cardinals in total-degree order are kept.
MatrixXd interp_basis(const Box& box, const PointSet& points, std::span<const Index> idx, int r);

/// The interpolation nodes matching the columns of interp_basis, d x r.
MatrixXd interp_nodes(const Box& box, int r);

}  // namespace smash

#endif
