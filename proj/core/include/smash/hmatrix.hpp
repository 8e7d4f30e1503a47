#ifndef SMASH_HMATRIX_HPP
#define SMASH_HMATRIX_HPP

#include <memory>

#include "smash/cluster_tree.hpp"
#include "smash/kernel.hpp"
#include "smash/srrqr.hpp"

namespace smash {

struct BuildParams {
  ExpansionOptions expansion;
  double tau = 0.6;
  /// Relative tolerance of the nearfield truncated SVD (HSS only).
  double svd_tol = 1e-9;
  double s = 2.0;
  /// Relative pivot tolerance inside compr.
  double compr_tol = 1e-14;
  /// Optional expansion order per level (index = level); 0 entries fall back to expansion.order.
  std::vector<int> level_orders;

  int order_at(int level) const {
    if (level >= 0 && level < static_cast<int>(level_orders.size()) && level_orders[static_cast<std::size_t>(level)] > 0)
      return level_orders[static_cast<std::size_t>(level)];
    return expansion.order;
  }
};

/// Nested basis factor of one node. For a leaf it is U_i over the node's points;
/// for a nonleaf it is the stacked transfer [R_c1; R_c2; …] over the children's
/// skeletons. Stored as P[I; G] with skeleton indices, or as a dense matrix once the
/// unit form is lost (scaling, addition).
template <typename Scalar>
struct NodeBasis {
  Index m = 0;
  Index k = 0;
  IndexList skeleton_pos;
  IndexList redundant_pos;
  Matrix<Scalar> G;
  /// Original point indices of the skeleton rows.
  IndexList skeleton;
  bool is_dense = false;
  Matrix<Scalar> dense;

  static NodeBasis from_factor(const InterpolativeFactor<Scalar>& f);
  static NodeBasis from_dense(Matrix<Scalar> d);

  /// out = F in
  void apply(const Scalar* in, Scalar* out) const;
  /// out += Fᵀ in
  void apply_transpose_add(const Scalar* in, Scalar* out) const;
  Matrix<Scalar> to_dense() const;
  /// Entries held in the dense-generator form.
  Index dense_entries() const { return m * k; }
  /// Entries held in the compressed form.
  Index stored_entries() const { return is_dense ? m * k : G.size(); }
};

/// A stored block: a coupling B_ij between skeletons, or a nearfield block between
/// full index sets. Without `data` it is re-evaluated from the kernel.
template <typename Scalar>
struct Block {
  Index row_node = -1;
  Index col_node = -1;
  bool materialized = false;
  Matrix<Scalar> data;
};

/// Hierarchical matrix with nested bases on a cluster tree: HSS (sibling couplings,
/// diagonal leaf blocks) or H² (strong admissibility).
template <typename Scalar>
class HMatrix {
 public:
  Structure structure = Structure::hss;
  std::shared_ptr<const ClusterTree> tree;
  std::shared_ptr<const Kernel<Scalar>> kernel;
  BuildParams params;
  std::vector<NodeBasis<Scalar>> row_basis;
  std::vector<NodeBasis<Scalar>> col_basis;
  /// Sorted by (row_node, col_node).
  std::vector<Block<Scalar>> couplings;
  std::vector<Block<Scalar>> nearfield;

  Index rows() const { return tree->num_rows(); }
  Index cols() const { return tree->num_cols(); }

  Matrix<Scalar> coupling(const Block<Scalar>& b) const;
  Matrix<Scalar> near(const Block<Scalar>& b) const;
  /// Index of the coupling (i, j), or -1.
  Index find_coupling(Index i, Index j) const;

  /// Evaluates and caches every lazily stored block.
  void materialize();
  bool fully_materialized() const;

  /// Node-wise product in the caller's ordering; works on adaptive trees.
  Vector<Scalar> matvec(const Vector<Scalar>& q) const;
  /// Level-wise telescoping product; perfect trees only.
  Vector<Scalar> matvec_levelwise(const Vector<Scalar>& q) const;

  /// Dense operator assembled block by block from expanded nested bases.
  Matrix<Scalar> reconstruct(Index budget = kDefaultDenseBudget) const;
  /// Dense operator from the level-factored telescoping product; perfect trees only.
  Matrix<Scalar> reconstruct_telescoping(Index budget = kDefaultDenseBudget) const;
  /// Expanded bases U_i over each node's rows (postorder permuted order).
  std::vector<Matrix<Scalar>> expanded_bases(bool rows) const;

  /// Largest row/column skeleton per level (index = level).
  std::vector<Index> level_ranks() const;
  Index max_rank() const;
  /// Floating point operations of one matvec, counted from block sizes.
  double matvec_flops() const;
};

template <typename Scalar>
Vector<Scalar> matvec_nodewise(const HMatrix<Scalar>& M, const Vector<Scalar>& q) {
  return M.matvec(q);
}

template <typename Scalar>
Vector<Scalar> matvec_levelwise(const HMatrix<Scalar>& M, const Vector<Scalar>& q) {
  return M.matvec_levelwise(q);
}

}  // namespace smash

#endif
