#ifndef SMASH_ULV_HPP
#define SMASH_ULV_HPP

#include "smash/hmatrix.hpp"

namespace smash {

/// Per-node data of an orthogonal ULV elimination.
template <typename Scalar>
struct UlvNode {
  /// Qᴴ U = [R; 0]; the bottom `eliminated` rows are decoupled.
  Matrix<Scalar> Q;
  /// LQ of the decoupled rows: (Qᴴ D)_bot Q2 = [L 0].
  Matrix<Scalar> Q2;
  Matrix<Scalar> L;
  /// (Qᴴ D)_top Q2 restricted to the eliminated unknowns.
  Matrix<Scalar> E1;
  /// Rows of Q2ᵀ V belonging to the eliminated unknowns.
  Matrix<Scalar> V_elim;
  /// Reduced generators handed to the parent.
  Matrix<Scalar> D;
  Matrix<Scalar> U;
  Matrix<Scalar> V;
  Index eliminated = 0;
};

template <typename Scalar>
struct UlvFactorization {
  std::shared_ptr<const ClusterTree> tree;
  std::vector<UlvNode<Scalar>> nodes;
  /// Row transfer R_c and column transfer W_c of each nonroot node.
  std::vector<Matrix<Scalar>> R, W;
  /// Coupling B_{c, sibling(c)} of each nonroot node.
  std::vector<Matrix<Scalar>> B;
  Eigen::FullPivLU<Matrix<Scalar>> root;

  Index size() const { return tree->num_rows(); }
};

/// Factors a square HSS matrix. Throws NumericalError naming the node when a
/// reduced pivot block is numerically singular.
template <typename Scalar>
UlvFactorization<Scalar> ulv_factor(const HMatrix<Scalar>& h);

/// Solves Â x = b in the caller's ordering.
template <typename Scalar>
Vector<Scalar> ulv_solve(const UlvFactorization<Scalar>& f, const Vector<Scalar>& b);

}  // namespace smash

#endif
