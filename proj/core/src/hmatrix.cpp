#include "smash/hmatrix.hpp"

#include <algorithm>

namespace smash {

// ------------------------------------------------------------ NodeBasis

template <typename Scalar>
NodeBasis<Scalar> NodeBasis<Scalar>::from_factor(const InterpolativeFactor<Scalar>& f) {
  NodeBasis b;
  b.m = f.rows();
  b.k = f.rank();
  b.skeleton_pos = f.skeleton;
  b.redundant_pos = f.redundant;
  b.G = f.G;
  b.skeleton = f.indices;
  return b;
}

template <typename Scalar>
NodeBasis<Scalar> NodeBasis<Scalar>::from_dense(Matrix<Scalar> d) {
  NodeBasis b;
  b.m = d.rows();
  b.k = d.cols();
  b.is_dense = true;
  b.dense = std::move(d);
  return b;
}

template <typename Scalar>
void NodeBasis<Scalar>::apply(const Scalar* in, Scalar* out) const {
  Eigen::Map<const Vector<Scalar>> x(in, k);
  Eigen::Map<Vector<Scalar>> y(out, m);
  if (is_dense) {
    y.noalias() = dense * x;
    return;
  }
  for (Index c = 0; c < k; ++c) y(skeleton_pos[static_cast<std::size_t>(c)]) = x(c);
  if (G.rows() == 0) return;
  const Vector<Scalar> g = G * x;
  for (Index r = 0; r < G.rows(); ++r) y(redundant_pos[static_cast<std::size_t>(r)]) = g(r);
}

template <typename Scalar>
void NodeBasis<Scalar>::apply_transpose_add(const Scalar* in, Scalar* out) const {
  Eigen::Map<const Vector<Scalar>> x(in, m);
  Eigen::Map<Vector<Scalar>> y(out, k);
  if (is_dense) {
    y.noalias() += dense.transpose() * x;
    return;
  }
  for (Index c = 0; c < k; ++c) y(c) += x(skeleton_pos[static_cast<std::size_t>(c)]);
  if (G.rows() == 0) return;
  Vector<Scalar> xr(G.rows());
  for (Index r = 0; r < G.rows(); ++r) xr(r) = x(redundant_pos[static_cast<std::size_t>(r)]);
  y.noalias() += G.transpose() * xr;
}

template <typename Scalar>
Matrix<Scalar> NodeBasis<Scalar>::to_dense() const {
  if (is_dense) return dense;
  Matrix<Scalar> out = Matrix<Scalar>::Zero(m, k);
  for (Index c = 0; c < k; ++c) out(skeleton_pos[static_cast<std::size_t>(c)], c) = Scalar(1);
  for (Index r = 0; r < G.rows(); ++r) out.row(redundant_pos[static_cast<std::size_t>(r)]) = G.row(r);
  return out;
}

// ------------------------------------------------------------ blocks

template <typename Scalar>
Matrix<Scalar> HMatrix<Scalar>::coupling(const Block<Scalar>& b) const {
  if (b.materialized) return b.data;
  require(kernel != nullptr, "coupling block is not materialized and no kernel is bound");
  return kernel->block(row_basis[static_cast<std::size_t>(b.row_node)].skeleton,
                       col_basis[static_cast<std::size_t>(b.col_node)].skeleton);
}

template <typename Scalar>
Matrix<Scalar> HMatrix<Scalar>::near(const Block<Scalar>& b) const {
  if (b.materialized) return b.data;
  require(kernel != nullptr, "nearfield block is not materialized and no kernel is bound");
  return kernel->block(tree->rows(b.row_node), tree->cols(b.col_node));
}

template <typename Scalar>
Index HMatrix<Scalar>::find_coupling(Index i, Index j) const {
  auto it = std::lower_bound(couplings.begin(), couplings.end(), std::make_pair(i, j),
                             [](const Block<Scalar>& b, const std::pair<Index, Index>& key) {
                               return std::make_pair(b.row_node, b.col_node) < key;
                             });
  if (it == couplings.end() || it->row_node != i || it->col_node != j) return -1;
  return static_cast<Index>(it - couplings.begin());
}

template <typename Scalar>
void HMatrix<Scalar>::materialize() {
  for (auto& b : couplings)
    if (!b.materialized) {
      b.data = coupling(b);
      b.materialized = true;
    }
  for (auto& b : nearfield)
    if (!b.materialized) {
      b.data = near(b);
      b.materialized = true;
    }
}

template <typename Scalar>
bool HMatrix<Scalar>::fully_materialized() const {
  for (const auto& b : couplings)
    if (!b.materialized) return false;
  for (const auto& b : nearfield)
    if (!b.materialized) return false;
  return true;
}

// ------------------------------------------------------------ matvec

template <typename Scalar>
Vector<Scalar> HMatrix<Scalar>::matvec(const Vector<Scalar>& q) const {
  require(q.size() == cols(), "matvec: vector length does not match the matrix");
  const ClusterTree& T = *tree;
  const Index N = T.size();
  const Index root = T.root();
  Vector<Scalar> qp(cols());
  for (Index a = 0; a < cols(); ++a) qp(a) = q(T.col_perm[static_cast<std::size_t>(a)]);

  std::vector<Vector<Scalar>> qhat(static_cast<std::size_t>(N)), zhat(static_cast<std::size_t>(N));
  Vector<Scalar> buf;
  for (Index i = 0; i < N; ++i) {
    if (i == root) continue;
    const TreeNode& nd = T.node(i);
    const auto& F = col_basis[static_cast<std::size_t>(i)];
    Vector<Scalar>& out = qhat[static_cast<std::size_t>(i)];
    out = Vector<Scalar>::Zero(F.k);
    if (nd.is_leaf()) {
      F.apply_transpose_add(qp.data() + nd.col_begin, out.data());
    } else {
      buf.resize(F.m);
      Index off = 0;
      for (Index c : nd.children) {
        const auto& v = qhat[static_cast<std::size_t>(c)];
        buf.segment(off, v.size()) = v;
        off += v.size();
      }
      F.apply_transpose_add(buf.data(), out.data());
    }
  }

  for (Index i = 0; i < N; ++i)
    if (i != root) zhat[static_cast<std::size_t>(i)] = Vector<Scalar>::Zero(row_basis[static_cast<std::size_t>(i)].k);
  for (const auto& b : couplings)
    zhat[static_cast<std::size_t>(b.row_node)].noalias() += coupling(b) * qhat[static_cast<std::size_t>(b.col_node)];

  Vector<Scalar> zp = Vector<Scalar>::Zero(rows());
  for (Index i = N - 1; i >= 0; --i) {
    if (i == root) continue;
    const TreeNode& nd = T.node(i);
    const auto& F = row_basis[static_cast<std::size_t>(i)];
    buf.resize(F.m);
    F.apply(zhat[static_cast<std::size_t>(i)].data(), buf.data());
    if (nd.is_leaf()) {
      zp.segment(nd.row_begin, F.m) += buf;
    } else {
      Index off = 0;
      for (Index c : nd.children) {
        auto& v = zhat[static_cast<std::size_t>(c)];
        v += buf.segment(off, v.size());
        off += v.size();
      }
    }
  }
  for (const auto& b : nearfield) {
    const TreeNode& ri = T.node(b.row_node);
    const TreeNode& cj = T.node(b.col_node);
    zp.segment(ri.row_begin, ri.num_rows()).noalias() += near(b) * qp.segment(cj.col_begin, cj.num_cols());
  }
  Vector<Scalar> z(rows());
  for (Index a = 0; a < rows(); ++a) z(T.row_perm[static_cast<std::size_t>(a)]) = zp(a);
  return z;
}

template <typename Scalar>
Vector<Scalar> HMatrix<Scalar>::matvec_levelwise(const Vector<Scalar>& q) const {
  require(q.size() == cols(), "matvec: vector length does not match the matrix");
  const ClusterTree& T = *tree;
  if (!T.is_perfect()) throw ValidationError("matvec_levelwise: the tree is not perfect");
  const int L = T.levels;
  const auto levels = T.by_level();
  Vector<Scalar> qp(cols());
  for (Index a = 0; a < cols(); ++a) qp(a) = q(T.col_perm[static_cast<std::size_t>(a)]);

  // Offsets of each node's skeleton segment inside its level buffer.
  std::vector<Index> row_off(static_cast<std::size_t>(T.size())), col_off(static_cast<std::size_t>(T.size()));
  std::vector<Index> row_len(static_cast<std::size_t>(L) + 1, 0), col_len(static_cast<std::size_t>(L) + 1, 0);
  for (int l = 2; l <= L; ++l) {
    for (Index i : levels[static_cast<std::size_t>(l)]) {
      row_off[static_cast<std::size_t>(i)] = row_len[static_cast<std::size_t>(l)];
      col_off[static_cast<std::size_t>(i)] = col_len[static_cast<std::size_t>(l)];
      row_len[static_cast<std::size_t>(l)] += row_basis[static_cast<std::size_t>(i)].k;
      col_len[static_cast<std::size_t>(l)] += col_basis[static_cast<std::size_t>(i)].k;
    }
  }

  // q̂^(l) = V^(l)ᵀ ⋯ V^(L)ᵀ q.
  std::vector<Vector<Scalar>> qhat(static_cast<std::size_t>(L) + 1), zhat(static_cast<std::size_t>(L) + 1);
  for (int l = L; l >= 2; --l) {
    qhat[static_cast<std::size_t>(l)] = Vector<Scalar>::Zero(col_len[static_cast<std::size_t>(l)]);
    Index below = 0;
    for (Index i : levels[static_cast<std::size_t>(l)]) {
      const auto& F = col_basis[static_cast<std::size_t>(i)];
      Scalar* out = qhat[static_cast<std::size_t>(l)].data() + col_off[static_cast<std::size_t>(i)];
      if (l == L) {
        F.apply_transpose_add(qp.data() + T.node(i).col_begin, out);
      } else {
        F.apply_transpose_add(qhat[static_cast<std::size_t>(l) + 1].data() + below, out);
        below += F.m;
      }
    }
  }

  // ẑ^(l) = B^(l−1) q̂^(l).
  for (int l = 2; l <= L; ++l) zhat[static_cast<std::size_t>(l)] = Vector<Scalar>::Zero(row_len[static_cast<std::size_t>(l)]);
  for (const auto& b : couplings) {
    const int l = T.node(b.row_node).level;
    const auto& cb = col_basis[static_cast<std::size_t>(b.col_node)];
    const auto& rb = row_basis[static_cast<std::size_t>(b.row_node)];
    zhat[static_cast<std::size_t>(l)].segment(row_off[static_cast<std::size_t>(b.row_node)], rb.k).noalias() +=
        coupling(b) * qhat[static_cast<std::size_t>(l)].segment(col_off[static_cast<std::size_t>(b.col_node)], cb.k);
  }

  // z = B^(L) q + U^(L)(⋯(U^(2) ẑ^(2) + ẑ^(3))⋯ + ẑ^(L)).
  Vector<Scalar> zp = Vector<Scalar>::Zero(rows());
  Vector<Scalar> buf;
  for (int l = 2; l <= L; ++l) {
    Index below = 0;
    for (Index i : levels[static_cast<std::size_t>(l)]) {
      const auto& F = row_basis[static_cast<std::size_t>(i)];
      buf.resize(F.m);
      F.apply(zhat[static_cast<std::size_t>(l)].data() + row_off[static_cast<std::size_t>(i)], buf.data());
      if (l == L) {
        zp.segment(T.node(i).row_begin, F.m) += buf;
      } else {
        zhat[static_cast<std::size_t>(l) + 1].segment(below, F.m) += buf;
        below += F.m;
      }
    }
  }
  for (const auto& b : nearfield) {
    const TreeNode& ri = T.node(b.row_node);
    const TreeNode& cj = T.node(b.col_node);
    zp.segment(ri.row_begin, ri.num_rows()).noalias() += near(b) * qp.segment(cj.col_begin, cj.num_cols());
  }
  Vector<Scalar> z(rows());
  for (Index a = 0; a < rows(); ++a) z(T.row_perm[static_cast<std::size_t>(a)]) = zp(a);
  return z;
}

// ------------------------------------------------------------ reconstruction

template <typename Scalar>
std::vector<Matrix<Scalar>> HMatrix<Scalar>::expanded_bases(bool rows_side) const {
  const ClusterTree& T = *tree;
  const auto& basis = rows_side ? row_basis : col_basis;
  std::vector<Matrix<Scalar>> out(static_cast<std::size_t>(T.size()));
  for (Index i = 0; i < T.size(); ++i) {
    if (i == T.root()) continue;
    const TreeNode& nd = T.node(i);
    const Matrix<Scalar> F = basis[static_cast<std::size_t>(i)].to_dense();
    if (nd.is_leaf()) {
      out[static_cast<std::size_t>(i)] = F;
      continue;
    }
    const Index m = rows_side ? nd.num_rows() : nd.num_cols();
    Matrix<Scalar> U(m, F.cols());
    Index off = 0, foff = 0;
    for (Index c : nd.children) {
      const Matrix<Scalar>& Uc = out[static_cast<std::size_t>(c)];
      U.middleRows(off, Uc.rows()) = Uc * F.middleRows(foff, Uc.cols());
      off += Uc.rows();
      foff += Uc.cols();
    }
    out[static_cast<std::size_t>(i)] = std::move(U);
  }
  return out;
}

namespace {

template <typename Scalar>
Matrix<Scalar> unpermute(const ClusterTree& T, const Matrix<Scalar>& Ap) {
  Matrix<Scalar> A(Ap.rows(), Ap.cols());
  for (Index b = 0; b < Ap.cols(); ++b)
    for (Index a = 0; a < Ap.rows(); ++a)
      A(T.row_perm[static_cast<std::size_t>(a)], T.col_perm[static_cast<std::size_t>(b)]) = Ap(a, b);
  return A;
}

}  // namespace

template <typename Scalar>
Matrix<Scalar> HMatrix<Scalar>::reconstruct(Index budget) const {
  if (rows() * cols() > budget) throw ValidationError("reconstruct: dense budget exceeded");
  const ClusterTree& T = *tree;
  const auto U = expanded_bases(true);
  const auto V = expanded_bases(false);
  Matrix<Scalar> Ap = Matrix<Scalar>::Zero(rows(), cols());
  for (const auto& b : couplings) {
    const TreeNode& ri = T.node(b.row_node);
    const TreeNode& cj = T.node(b.col_node);
    Ap.block(ri.row_begin, cj.col_begin, ri.num_rows(), cj.num_cols()) +=
        U[static_cast<std::size_t>(b.row_node)] * coupling(b) * V[static_cast<std::size_t>(b.col_node)].transpose();
  }
  for (const auto& b : nearfield) {
    const TreeNode& ri = T.node(b.row_node);
    const TreeNode& cj = T.node(b.col_node);
    Ap.block(ri.row_begin, cj.col_begin, ri.num_rows(), cj.num_cols()) += near(b);
  }
  return unpermute(T, Ap);
}

template <typename Scalar>
Matrix<Scalar> HMatrix<Scalar>::reconstruct_telescoping(Index budget) const {
  if (rows() * cols() > budget) throw ValidationError("reconstruct: dense budget exceeded");
  const ClusterTree& T = *tree;
  if (!T.is_perfect()) throw ValidationError("reconstruct_telescoping: the tree is not perfect");
  const int L = T.levels;
  const auto levels = T.by_level();

  // B^(L): nearfield in permuted order.
  Matrix<Scalar> BL = Matrix<Scalar>::Zero(rows(), cols());
  for (const auto& b : nearfield) {
    const TreeNode& ri = T.node(b.row_node);
    const TreeNode& cj = T.node(b.col_node);
    BL.block(ri.row_begin, cj.col_begin, ri.num_rows(), cj.num_cols()) += near(b);
  }
  if (L == 1) return unpermute(T, BL);

  std::vector<Index> roff(static_cast<std::size_t>(T.size())), coff(static_cast<std::size_t>(T.size()));
  std::vector<Index> rlen(static_cast<std::size_t>(L) + 1, 0), clen(static_cast<std::size_t>(L) + 1, 0);
  for (int l = 2; l <= L; ++l)
    for (Index i : levels[static_cast<std::size_t>(l)]) {
      roff[static_cast<std::size_t>(i)] = rlen[static_cast<std::size_t>(l)];
      coff[static_cast<std::size_t>(i)] = clen[static_cast<std::size_t>(l)];
      rlen[static_cast<std::size_t>(l)] += row_basis[static_cast<std::size_t>(i)].k;
      clen[static_cast<std::size_t>(l)] += col_basis[static_cast<std::size_t>(i)].k;
    }

  // U^(l) = diag(F_i)_{lv(i)=l}, mapping level-l skeletons to level l+1 (or to points).
  auto level_basis = [&](int l, bool rows_side) {
    const auto& basis = rows_side ? row_basis : col_basis;
    const auto& len = rows_side ? rlen : clen;
    const Index out_rows = (l == L) ? (rows_side ? rows() : cols()) : len[static_cast<std::size_t>(l) + 1];
    Matrix<Scalar> U = Matrix<Scalar>::Zero(out_rows, len[static_cast<std::size_t>(l)]);
    Index r = 0, c = 0;
    for (Index i : levels[static_cast<std::size_t>(l)]) {
      const auto& F = basis[static_cast<std::size_t>(i)];
      if (l == L) r = rows_side ? T.node(i).row_begin : T.node(i).col_begin;
      U.block(r, c, F.m, F.k) = F.to_dense();
      r += F.m;
      c += F.k;
    }
    return U;
  };
  auto level_coupling = [&](int l) {
    Matrix<Scalar> B = Matrix<Scalar>::Zero(rlen[static_cast<std::size_t>(l)], clen[static_cast<std::size_t>(l)]);
    for (const auto& b : couplings) {
      if (T.node(b.row_node).level != l) continue;
      const Matrix<Scalar> blk = coupling(b);
      B.block(roff[static_cast<std::size_t>(b.row_node)], coff[static_cast<std::size_t>(b.col_node)], blk.rows(), blk.cols()) = blk;
    }
    return B;
  };

  Matrix<Scalar> M = level_coupling(2);
  for (int l = 2; l < L; ++l) M = level_basis(l, true) * M * level_basis(l, false).transpose() + level_coupling(l + 1);
  Matrix<Scalar> Ap = level_basis(L, true) * M * level_basis(L, false).transpose() + BL;
  return unpermute(T, Ap);
}

// ------------------------------------------------------------ statistics

template <typename Scalar>
std::vector<Index> HMatrix<Scalar>::level_ranks() const {
  std::vector<Index> out(static_cast<std::size_t>(tree->levels) + 1, 0);
  for (Index i = 0; i < tree->size(); ++i) {
    if (i == tree->root()) continue;
    auto& r = out[static_cast<std::size_t>(tree->node(i).level)];
    r = std::max({r, row_basis[static_cast<std::size_t>(i)].k, col_basis[static_cast<std::size_t>(i)].k});
  }
  return out;
}

template <typename Scalar>
Index HMatrix<Scalar>::max_rank() const {
  const auto r = level_ranks();
  return r.empty() ? 0 : *std::max_element(r.begin(), r.end());
}

template <typename Scalar>
double HMatrix<Scalar>::matvec_flops() const {
  auto basis_cost = [](const NodeBasis<Scalar>& F) {
    return F.is_dense ? 2.0 * double(F.m) * double(F.k) : 2.0 * double(F.G.size()) + double(F.k);
  };
  double flops = 0.0;
  for (Index i = 0; i < tree->size(); ++i) {
    if (i == tree->root()) continue;
    flops += basis_cost(row_basis[static_cast<std::size_t>(i)]) + basis_cost(col_basis[static_cast<std::size_t>(i)]);
  }
  for (const auto& b : couplings)
    flops += 2.0 * double(row_basis[static_cast<std::size_t>(b.row_node)].k) *
             double(col_basis[static_cast<std::size_t>(b.col_node)].k);
  for (const auto& b : nearfield)
    flops += 2.0 * double(tree->node(b.row_node).num_rows()) * double(tree->node(b.col_node).num_cols());
  return flops;
}

template struct NodeBasis<double>;
template struct NodeBasis<complex>;
template class HMatrix<double>;
template class HMatrix<complex>;

}  // namespace smash
