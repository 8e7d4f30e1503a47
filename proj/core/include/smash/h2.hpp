#ifndef SMASH_H2_HPP
#define SMASH_H2_HPP

#include "smash/hmatrix.hpp"

namespace smash {

/// Bottom-up H² construction with strong admissibility. Node bases come from the
/// farfield expansion alone; couplings and nearfield blocks follow the leaf sets.
template <typename Scalar>
HMatrix<Scalar> build_h2(std::shared_ptr<const ClusterTree> tree, std::shared_ptr<const Kernel<Scalar>> kernel,
                         const BuildParams& params);

/// Dense operator via the telescoping product on perfect trees, blockwise otherwise.
template <typename Scalar>
Matrix<Scalar> reconstruct_dense_h2(const HMatrix<Scalar>& h, Index budget = kDefaultDenseBudget);

}  // namespace smash

#endif
