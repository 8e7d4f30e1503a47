#ifndef SMASH_SVD_HPP
#define SMASH_SVD_HPP

#include "smash/config.hpp"

namespace smash {

/// M ≈ U diag(sigma) Vᴴ keeping σ_i ≥ ε σ₁.
template <typename Scalar>
struct TruncatedSvd {
  Matrix<Scalar> U;
  VectorXd sigma;
  Matrix<Scalar> V;

  Index rank() const { return sigma.size(); }
};

template <typename Scalar>
TruncatedSvd<Scalar> truncated_svd(const Matrix<Scalar>& M, double eps, bool right_factor = true);

/// Largest i with σ_i ≥ ε σ₁.
template <typename Scalar>
Index eps_rank(const Matrix<Scalar>& M, double eps);

template <typename Scalar>
VectorXd singular_values(const Matrix<Scalar>& M);

}  // namespace smash

#endif
