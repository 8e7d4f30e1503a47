#ifndef SMASH_SRRQR_HPP
#define SMASH_SRRQR_HPP

#include "smash/config.hpp"

namespace smash {

struct SrrqrOptions {
  double s = 2.0;
  int max_swaps = 10000;
  /// Columns whose pivot falls below floor·|R_00| are treated as dependent.
  double floor = 1e-14;
};

/// M P = Q [R11 R12; 0 R22] with ‖R11⁻¹R12‖_max ≤ s and ‖R11⁻¹‖, ‖R22‖ bounded as in
/// Gu–Eisenstat's strong RRQR.
template <typename Scalar>
struct SrrqrResult {
  /// Column k of M P is column perm[k] of M.
  IndexList perm;
  Matrix<Scalar> Q;
  Matrix<Scalar> R11, R12, R22;
  Index rank = 0;
  int swaps = 0;

  /// R11⁻¹ R12.
  Matrix<Scalar> coefficients() const;
};

/// Strong RRQR with target rank k. When fewer than k columns are numerically
/// independent the achieved rank is returned.
template <typename Scalar>
SrrqrResult<Scalar> srrqr(const Matrix<Scalar>& M, Index k, const SrrqrOptions& opts = {});

/// Strong RRQR with the rank chosen as the number of column-pivoted QR pivots above
/// tol·|R_00|.
template <typename Scalar>
SrrqrResult<Scalar> srrqr_tol(const Matrix<Scalar>& M, double tol, const SrrqrOptions& opts = {});

/// C = P [I; G] C|_î, stored by row positions.
template <typename Scalar>
struct InterpolativeFactor {
  /// Ascending row positions of the skeleton î within C.
  IndexList skeleton;
  /// Ascending positions of the remaining rows.
  IndexList redundant;
  /// |redundant| x |skeleton|.
  Matrix<Scalar> G;
  /// Skeleton mapped through the index set ī, when one was supplied.
  IndexList indices;

  Index rows() const { return static_cast<Index>(skeleton.size() + redundant.size()); }
  Index rank() const { return static_cast<Index>(skeleton.size()); }
  /// P [I; G] as a dense rows() x rank() matrix.
  Matrix<Scalar> expand() const;
};

struct ComprOptions {
  double s = 2.0;
  /// Relative tolerance on the pivots; ignored when rank >= 0.
  double tol = 1e-14;
  /// Fixed target rank, or -1 for tolerance-based selection.
  Index rank = -1;
  int max_swaps = 10000;
};

/// Interpolative decomposition by strong RRQR on Cᵀ.
template <typename Scalar>
InterpolativeFactor<Scalar> compr(const Matrix<Scalar>& C, const ComprOptions& opts = {});

template <typename Scalar>
InterpolativeFactor<Scalar> compr(const Matrix<Scalar>& C, const IndexList& bar, const ComprOptions& opts = {});

}  // namespace smash

#endif
