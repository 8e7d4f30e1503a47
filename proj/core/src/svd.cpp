#include "smash/svd.hpp"

namespace smash {

namespace {

Index count_kept(const VectorXd& s, double eps) {
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index k = 0;
  while (k < s.size() && s(k) >= eps * s(0)) ++k;
  return k;
}

}  // namespace

template <typename Scalar>
TruncatedSvd<Scalar> truncated_svd(const Matrix<Scalar>& M, double eps, bool right_factor) {
  require(M.size() > 0, "truncated_svd: empty matrix");
  require(M.allFinite(), "truncated_svd: non-finite entries");
  const unsigned flags = right_factor ? unsigned(Eigen::ComputeThinU | Eigen::ComputeThinV) : unsigned(Eigen::ComputeThinU);
  Eigen::BDCSVD<Matrix<Scalar>> svd(M, flags);
  const VectorXd s = svd.singularValues();
  const Index k = count_kept(s, eps);
  TruncatedSvd<Scalar> out;
  out.sigma = s.head(k);
  out.U = svd.matrixU().leftCols(k);
  if (right_factor) out.V = svd.matrixV().leftCols(k);
  return out;
}

template <typename Scalar>
VectorXd singular_values(const Matrix<Scalar>& M) {
  require(M.size() > 0, "singular_values: empty matrix");
  Eigen::BDCSVD<Matrix<Scalar>> svd(M);
  return svd.singularValues();
}

template <typename Scalar>
Index eps_rank(const Matrix<Scalar>& M, double eps) {
  require(eps > 0.0 && eps < 1.0, "eps_rank: eps must lie in (0, 1)");
  const VectorXd s = singular_values(M);
  require(s(0) > 0.0, "eps_rank: zero matrix");
  return count_kept(s, eps);
}

template struct TruncatedSvd<double>;
template struct TruncatedSvd<complex>;
template TruncatedSvd<double> truncated_svd(const Matrix<double>&, double, bool);
template TruncatedSvd<complex> truncated_svd(const Matrix<complex>&, double, bool);
template VectorXd singular_values(const Matrix<double>&);
template VectorXd singular_values(const Matrix<complex>&);
template Index eps_rank(const Matrix<double>&, double);
template Index eps_rank(const Matrix<complex>&, double);

}  // namespace smash
