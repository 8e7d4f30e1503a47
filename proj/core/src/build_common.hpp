#ifndef SMASH_BUILD_COMMON_HPP
#define SMASH_BUILD_COMMON_HPP

#include "smash/hmatrix.hpp"

namespace smash::detail {

/// ī for a node: its own points at a leaf, the children's skeletons otherwise.
template <typename Scalar>
IndexList candidate_set(const ClusterTree& tree, Index i, bool rows, const std::vector<NodeBasis<Scalar>>& basis) {
  const TreeNode& nd = tree.node(i);
  if (nd.is_leaf()) {
    const auto span = rows ? tree.rows(i) : tree.cols(i);
    return IndexList(span.begin(), span.end());
  }
  IndexList out;
  for (Index c : nd.children) {
    const auto& sk = basis[static_cast<std::size_t>(c)].skeleton;
    out.insert(out.end(), sk.begin(), sk.end());
  }
  return out;
}

template <typename Scalar>
NodeBasis<Scalar> compress(const Matrix<Scalar>& C, const IndexList& bar, const BuildParams& p) {
  ComprOptions co;
  co.s = p.s;
  co.tol = p.compr_tol;
  if (C.cols() == 0) {
    InterpolativeFactor<Scalar> f = compr(Matrix<Scalar>(static_cast<Index>(bar.size()), 0), bar, co);
    return NodeBasis<Scalar>::from_factor(f);
  }
  return NodeBasis<Scalar>::from_factor(compr(C, bar, co));
}

inline void sort_blocks(auto& blocks) {
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a.row_node, a.col_node) < std::make_pair(b.row_node, b.col_node);
  });
}

}  // namespace smash::detail

#endif
