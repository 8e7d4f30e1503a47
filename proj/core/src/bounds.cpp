#include "smash/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace smash {

ParamChoice choose_params(double eps, int d) {
  require(eps > 0.0 && eps < 1.0, "choose_params: eps must lie in (0, 1)");
  require(d >= 1, "choose_params: dimension must be positive");
  ParamChoice p;
  p.eps = eps;
  p.tau = d >= 2 ? 0.65 : 0.6;
  const double x = std::log(eps) / std::log(p.tau);
  if (eps < 1e-8) p.order = static_cast<int>(std::floor(x - 20.0));
  else if (eps < 1e-6) p.order = static_cast<int>(std::floor(x - 15.0));
  else p.order = std::max(static_cast<int>(std::floor(x - 10.0)), 5);
  p.order = std::max(p.order, 5);
  p.svd_tol = eps / 10.0;
  return p;
}

BoundValues error_bound(const BoundInputs& in, Structure structure) {
  const int L = in.levels;
  const double s = in.s;
  BoundValues out;
  if (L < 1) return out;
  // r^(l) for l = 2..L+1 with r^(L+1) := r^(L).
  auto r = [&](int l) {
    const int ll = std::min(l, L);
    const Index v = ll < static_cast<int>(in.ranks.size()) ? in.ranks[static_cast<std::size_t>(ll)] : 0;
    return static_cast<double>(std::max<Index>(v, 1));
  };
  auto prod_sq = [&](int from, int to) {
    double p = 1.0;
    for (int l = from; l <= to; ++l) p *= r(l) * r(l);
    return p;
  };
  double rmax = 2.0;
  for (int l = 2; l <= L; ++l) rmax = std::max(rmax, r(l));

  if (structure == Structure::hss) {
    out.corollary = std::pow(2.0 * rmax * rmax * s * s, L) * (16.0 * in.svd_tol + 8.0 * in.far_tol);
    double c1 = 0.0, c2 = 0.0;
    for (int l = 2; l <= L - 1; ++l)
      c1 += std::pow(2.0, L + l / 2.0 + 2.0) * std::pow(s, 2 * L - 2 * l + 2) * prod_sq(l + 1, L) *
            std::pow(r(l + 1), 1.5) * std::pow(r(l), 2.5);
    for (int l = 2; l <= L; ++l)
      c2 += std::pow(2.0, L + 2) * std::pow(s, 2 * L - 2 * l + 2) * prod_sq(l, L) * r(l + 1);
    out.level_resolved = c1 * in.svd_tol + c2 * in.far_tol;
  } else {
    const double dd = in.d;
    out.corollary = std::pow(std::pow(2.0, dd) * rmax * rmax * s * s, L) * 8.0 * in.far_tol;
    double c = 0.0;
    for (int l = 2; l <= L; ++l)
      c += std::pow(2.0, dd * L + 2) * std::pow(s, 2 * L - 2 * l + 2) * prod_sq(l, L) * r(l + 1);
    out.level_resolved = c * in.far_tol;
  }
  return out;
}

template <typename Scalar>
BoundInputs bound_inputs(const HMatrix<Scalar>& h, double far_tol, int d) {
  BoundInputs in;
  // Caps taken as the largest skeleton at this level or deeper, so r^(l+1) <= r^(l).
  in.ranks = h.level_ranks();
  for (std::size_t l = in.ranks.size(); l-- > 1;)
    if (l + 1 < in.ranks.size()) in.ranks[l] = std::max(in.ranks[l], in.ranks[l + 1]);
  in.levels = h.tree->levels;
  in.s = h.params.s;
  in.svd_tol = h.structure == Structure::hss ? h.params.svd_tol : 0.0;
  in.far_tol = far_tol;
  in.d = d;
  return in;
}

template <typename Scalar>
StorageReport storage_report(const HMatrix<Scalar>& h) {
  constexpr double w = sizeof(Scalar);
  constexpr double iw = 8.0;
  const ClusterTree& T = *h.tree;
  StorageReport rep;
  for (Index i = 0; i < T.size(); ++i) {
    if (i == T.root()) continue;
    const bool leaf = T.node(i).is_leaf();
    for (const auto* basis : {&h.row_basis, &h.col_basis}) {
      const NodeBasis<Scalar>& F = (*basis)[static_cast<std::size_t>(i)];
      if (F.is_dense) {
        rep.g_bytes += w * static_cast<double>(F.m * F.k);
      } else {
        rep.g_bytes += w * static_cast<double>(F.G.size());
        rep.index_bytes += iw * static_cast<double>(F.m + F.k);
      }
      (leaf ? rep.hss0_leaf_basis_bytes : rep.hss0_transfer_bytes) += w * static_cast<double>(F.m * F.k);
    }
  }
  const bool reevaluable = h.kernel != nullptr;
  for (const auto& b : h.couplings) {
    const double entries = static_cast<double>(h.row_basis[static_cast<std::size_t>(b.row_node)].k *
                                               h.col_basis[static_cast<std::size_t>(b.col_node)].k);
    rep.hss0_coupling_bytes += w * entries;
    if (reevaluable) rep.index_bytes += 2.0 * iw;
    else rep.coupling_bytes += w * entries;
  }
  for (const auto& b : h.nearfield)
    rep.d_bytes += w * static_cast<double>(T.node(b.row_node).num_rows() * T.node(b.col_node).num_cols());

  rep.compressed_bytes = rep.g_bytes + rep.index_bytes + rep.d_bytes + rep.coupling_bytes;
  rep.dense_generator_bytes = rep.hss0_leaf_basis_bytes + rep.hss0_transfer_bytes + rep.hss0_coupling_bytes + rep.d_bytes;
  rep.dense_bytes = w * static_cast<double>(h.rows()) * static_cast<double>(h.cols());
  return rep;
}

template BoundInputs bound_inputs(const HMatrix<double>&, double, int);
template BoundInputs bound_inputs(const HMatrix<complex>&, double, int);
template StorageReport storage_report(const HMatrix<double>&);
template StorageReport storage_report(const HMatrix<complex>&);

}  // namespace smash
