#ifndef SMASH_HSS_HPP
#define SMASH_HSS_HPP

#include "smash/hmatrix.hpp"

namespace smash {

/// Bottom-up HSS construction on a binary tree. Each node compresses its farfield
/// expansion together with an orthonormal basis of its nearfield block row.
template <typename Scalar>
HMatrix<Scalar> build_hss(std::shared_ptr<const ClusterTree> tree, std::shared_ptr<const Kernel<Scalar>> kernel,
                          const BuildParams& params);

/// A1 + A2 on a shared tree. The result holds dense generators and no kernel.
template <typename Scalar>
HMatrix<Scalar> hss_add(const HMatrix<Scalar>& a, const HMatrix<Scalar>& b);

/// diag(dl) A diag(dr), vectors in the caller's ordering. The result holds dense
/// leaf generators and no kernel.
template <typename Scalar>
HMatrix<Scalar> diag_scale(const HMatrix<Scalar>& a, const Vector<Scalar>& dl, const Vector<Scalar>& dr);

/// HSS with empty generators on the given tree; every leaf block is zero.
template <typename Scalar>
HMatrix<Scalar> zero_hss(std::shared_ptr<const ClusterTree> tree);

/// Dense operator via the telescoping product on perfect trees, blockwise otherwise.
template <typename Scalar>
Matrix<Scalar> reconstruct_dense_hss(const HMatrix<Scalar>& h, Index budget = kDefaultDenseBudget);

}  // namespace smash

#endif
