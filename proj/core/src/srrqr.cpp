#include "smash/srrqr.hpp"

#include <algorithm>
#include <numeric>

namespace smash {

namespace {

template <typename Scalar>
struct Blocks {
  Eigen::HouseholderQR<Matrix<Scalar>> qr;
  Matrix<Scalar> R11, R12, R22;
};

template <typename Scalar>
Matrix<Scalar> permuted(const Matrix<Scalar>& M, const IndexList& perm) {
  Matrix<Scalar> out(M.rows(), M.cols());
  for (Index k = 0; k < M.cols(); ++k) out.col(k) = M.col(perm[static_cast<std::size_t>(k)]);
  return out;
}

// QR of the leading k columns of M P, with the trailing columns transformed.
template <typename Scalar>
Blocks<Scalar> factor(const Matrix<Scalar>& MP, Index k) {
  Blocks<Scalar> b;
  const Index m = MP.rows(), n = MP.cols();
  b.qr.compute(MP.leftCols(k));
  b.R11 = b.qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  Matrix<Scalar> rest = MP.rightCols(n - k);
  rest.applyOnTheLeft(b.qr.householderQ().adjoint());
  b.R12 = rest.topRows(k);
  b.R22 = rest.bottomRows(m - k);
  return b;
}

template <typename Scalar>
Index numerical_rank(const Eigen::ColPivHouseholderQR<Matrix<Scalar>>& cp, double tol) {
  const auto& R = cp.matrixQR();
  const Index p = std::min(R.rows(), R.cols());
  if (p == 0) return 0;
  const double lead = std::abs(R(0, 0));
  if (lead == 0.0) return 0;
  Index k = 0;
  while (k < p && std::abs(R(k, k)) > tol * lead) ++k;
  return k;
}

template <typename Scalar>
SrrqrResult<Scalar> run(const Matrix<Scalar>& M, Index k, const Eigen::ColPivHouseholderQR<Matrix<Scalar>>& cp,
                        const SrrqrOptions& opts) {
  require(opts.s > 1.0, "srrqr: s must exceed 1");
  const Index m = M.rows(), n = M.cols();
  SrrqrResult<Scalar> out;
  out.perm.resize(static_cast<std::size_t>(n));
  const auto& idx = cp.colsPermutation().indices();
  for (Index j = 0; j < n; ++j) out.perm[static_cast<std::size_t>(j)] = idx(j);
  out.rank = k;

  Blocks<Scalar> b;
  for (;;) {
    b = factor<Scalar>(permuted(M, out.perm), k);
    if (k == 0 || k == n) break;
    Matrix<Scalar> Rinv = Matrix<Scalar>::Identity(k, k);
    b.R11.template triangularView<Eigen::Upper>().solveInPlace(Rinv);
    const Matrix<Scalar> Z = Rinv * b.R12;
    const VectorXd row_norm2 = Rinv.rowwise().squaredNorm();
    VectorXd gamma2 = VectorXd::Zero(n - k);
    if (m > k) gamma2 = b.R22.colwise().squaredNorm().transpose();
    double best = 0.0;
    Index bi = -1, bj = -1;
    for (Index j = 0; j < n - k; ++j) {
      for (Index i = 0; i < k; ++i) {
        const double rho = std::norm(Z(i, j)) + gamma2(j) * row_norm2(i);
        if (rho > best) {
          best = rho;
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= opts.s * opts.s) break;
    if (out.swaps >= opts.max_swaps)
      throw NumericalError("srrqr: swap limit reached before the bound was met");
    std::swap(out.perm[static_cast<std::size_t>(bi)], out.perm[static_cast<std::size_t>(k + bj)]);
    ++out.swaps;
  }
  out.Q = b.qr.householderQ() * Matrix<Scalar>::Identity(m, m);
  out.R11 = std::move(b.R11);
  out.R12 = std::move(b.R12);
  out.R22 = std::move(b.R22);
  return out;
}

}  // namespace

template <typename Scalar>
Matrix<Scalar> SrrqrResult<Scalar>::coefficients() const {
  Matrix<Scalar> Z = R12;
  if (rank > 0) R11.template triangularView<Eigen::Upper>().solveInPlace(Z);
  return Z;
}

template <typename Scalar>
SrrqrResult<Scalar> srrqr(const Matrix<Scalar>& M, Index k, const SrrqrOptions& opts) {
  require(M.size() > 0, "srrqr: empty matrix");
  require(k >= 1 && k <= std::min(M.rows(), M.cols()), "srrqr: rank out of range");
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> cp(M);
  const Index achievable = numerical_rank(cp, opts.floor);
  if (achievable == 0) throw ValidationError("srrqr: zero matrix");
  return run(M, std::min(k, achievable), cp, opts);
}

template <typename Scalar>
SrrqrResult<Scalar> srrqr_tol(const Matrix<Scalar>& M, double tol, const SrrqrOptions& opts) {
  require(M.size() > 0, "srrqr: empty matrix");
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> cp(M);
  const Index k = numerical_rank(cp, std::max(tol, opts.floor));
  if (k == 0) throw ValidationError("srrqr: zero matrix");
  return run(M, k, cp, opts);
}

template <typename Scalar>
Matrix<Scalar> InterpolativeFactor<Scalar>::expand() const {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(rows(), rank());
  for (Index c = 0; c < rank(); ++c) out(skeleton[static_cast<std::size_t>(c)], c) = Scalar(1);
  for (Index r = 0; r < static_cast<Index>(redundant.size()); ++r)
    out.row(redundant[static_cast<std::size_t>(r)]) = G.row(r);
  return out;
}

template <typename Scalar>
InterpolativeFactor<Scalar> compr(const Matrix<Scalar>& C, const ComprOptions& opts) {
  InterpolativeFactor<Scalar> f;
  const Index m = C.rows();
  const bool zero = C.cols() == 0 || m == 0 || C.cwiseAbs().maxCoeff() == 0.0;
  if (zero || opts.rank == 0) {
    f.redundant.resize(static_cast<std::size_t>(m));
    std::iota(f.redundant.begin(), f.redundant.end(), Index{0});
    f.G = Matrix<Scalar>::Zero(m, 0);
    return f;
  }
  const Matrix<Scalar> M = C.transpose();
  SrrqrOptions so;
  so.s = opts.s;
  so.max_swaps = opts.max_swaps;
  const SrrqrResult<Scalar> r =
      opts.rank > 0 ? srrqr(M, std::min(opts.rank, std::min(M.rows(), M.cols())), so) : srrqr_tol(M, opts.tol, so);
  const Index k = r.rank;
  const Matrix<Scalar> Z = r.coefficients();  // k x (m - k)

  // Sort skeleton and redundant positions, permuting G accordingly.
  std::vector<Index> sk_order(static_cast<std::size_t>(k)), rd_order(static_cast<std::size_t>(m - k));
  std::iota(sk_order.begin(), sk_order.end(), Index{0});
  std::iota(rd_order.begin(), rd_order.end(), Index{0});
  std::sort(sk_order.begin(), sk_order.end(),
            [&](Index a, Index b) { return r.perm[static_cast<std::size_t>(a)] < r.perm[static_cast<std::size_t>(b)]; });
  std::sort(rd_order.begin(), rd_order.end(), [&](Index a, Index b) {
    return r.perm[static_cast<std::size_t>(k + a)] < r.perm[static_cast<std::size_t>(k + b)];
  });
  for (Index a : sk_order) f.skeleton.push_back(r.perm[static_cast<std::size_t>(a)]);
  for (Index b : rd_order) f.redundant.push_back(r.perm[static_cast<std::size_t>(k + b)]);
  f.G.resize(m - k, k);
  for (Index i = 0; i < m - k; ++i)
    for (Index j = 0; j < k; ++j)
      f.G(i, j) = Z(sk_order[static_cast<std::size_t>(j)], rd_order[static_cast<std::size_t>(i)]);
  return f;
}

template <typename Scalar>
InterpolativeFactor<Scalar> compr(const Matrix<Scalar>& C, const IndexList& bar, const ComprOptions& opts) {
  require(static_cast<Index>(bar.size()) == C.rows(), "compr: index set size must match the rows of C");
  InterpolativeFactor<Scalar> f = compr(C, opts);
  f.indices.reserve(f.skeleton.size());
  for (Index p : f.skeleton) f.indices.push_back(bar[static_cast<std::size_t>(p)]);
  return f;
}

template struct SrrqrResult<double>;
template struct SrrqrResult<complex>;
template struct InterpolativeFactor<double>;
template struct InterpolativeFactor<complex>;
template SrrqrResult<double> srrqr(const Matrix<double>&, Index, const SrrqrOptions&);
template SrrqrResult<complex> srrqr(const Matrix<complex>&, Index, const SrrqrOptions&);
template SrrqrResult<double> srrqr_tol(const Matrix<double>&, double, const SrrqrOptions&);
template SrrqrResult<complex> srrqr_tol(const Matrix<complex>&, double, const SrrqrOptions&);
template InterpolativeFactor<double> compr(const Matrix<double>&, const ComprOptions&);
template InterpolativeFactor<complex> compr(const Matrix<complex>&, const ComprOptions&);
template InterpolativeFactor<double> compr(const Matrix<double>&, const IndexList&, const ComprOptions&);
template InterpolativeFactor<complex> compr(const Matrix<complex>&, const IndexList&, const ComprOptions&);

}  // namespace smash
