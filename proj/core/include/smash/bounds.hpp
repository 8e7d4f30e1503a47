#ifndef SMASH_BOUNDS_HPP
#define SMASH_BOUNDS_HPP

#include "smash/hmatrix.hpp"

namespace smash {

struct ParamChoice {
  double eps = 1e-8;
  double tau = 0.6;
  int order = 21;
  double svd_tol = 1e-9;
  double s = 2.0;
};

/// τ from the dimension (0.6 for curves and intervals, 0.65 in 2D) and r from the
/// three-branch rule on log ε / log τ; ε_SVD = ε/10.
ParamChoice choose_params(double eps, int d);

struct BoundInputs {
  /// Rank cap r^(l) per level (index = level, entries 2..L used).
  std::vector<Index> ranks;
  double s = 2.0;
  int levels = 1;
  double svd_tol = 0.0;
  double far_tol = 0.0;
  int d = 1;
};

struct BoundValues {
  /// Constant-rank corollary form.
  double corollary = 0.0;
  /// Level-resolved sum C₁ε_SVD + C₂ε_far (HSS) or Cε_far (H²).
  double level_resolved = 0.0;
};

/// Relative Frobenius error bounds ‖A − Â‖_F / ‖A‖_F.
BoundValues error_bound(const BoundInputs& in, Structure structure);

/// Inputs read off a built matrix: per-level skeleton caps (nonincreasing with
/// level), L, s and ε_SVD.
template <typename Scalar>
BoundInputs bound_inputs(const HMatrix<Scalar>& h, double far_tol, int d);

struct StorageReport {
  /// Index-set plus G storage used by this library.
  double compressed_bytes = 0.0;
  /// Dense U, V, R, W, B and D generators.
  double dense_generator_bytes = 0.0;
  /// The full dense matrix.
  double dense_bytes = 0.0;

  double g_bytes = 0.0;
  double index_bytes = 0.0;
  double d_bytes = 0.0;
  /// Coupling entries that cannot be re-evaluated from a kernel.
  double coupling_bytes = 0.0;

  double hss0_leaf_basis_bytes = 0.0;
  double hss0_transfer_bytes = 0.0;
  double hss0_coupling_bytes = 0.0;
};

/// Entries are counted at their scalar width; indices at 8 bytes.
template <typename Scalar>
StorageReport storage_report(const HMatrix<Scalar>& h);

}  // namespace smash

#endif
