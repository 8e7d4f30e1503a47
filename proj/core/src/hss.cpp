#include "smash/hss.hpp"

#include <algorithm>

#include "build_common.hpp"
#include "smash/svd.hpp"

namespace smash {

namespace {

void require_binary(const ClusterTree& tree) {
  for (const auto& nd : tree.nodes)
    if (!nd.is_leaf() && nd.children.size() != 2) throw ValidationError("hss: the tree must be binary");
}

template <typename Scalar>
Matrix<Scalar> hstack(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

template <typename Scalar>
void add_sibling_couplings(HMatrix<Scalar>& h) {
  const ClusterTree& T = *h.tree;
  for (Index p = 0; p < T.size(); ++p) {
    const TreeNode& nd = T.node(p);
    if (nd.is_leaf()) continue;
    for (Index a : nd.children)
      for (Index b : nd.children)
        if (a != b) h.couplings.push_back({a, b, false, {}});
  }
  detail::sort_blocks(h.couplings);
}

template <typename Scalar>
void add_leaf_blocks(HMatrix<Scalar>& h) {
  for (Index i : h.tree->leaves()) h.nearfield.push_back({i, i, false, {}});
  detail::sort_blocks(h.nearfield);
}

}  // namespace

template <typename Scalar>
HMatrix<Scalar> build_hss(std::shared_ptr<const ClusterTree> tree, std::shared_ptr<const Kernel<Scalar>> kernel,
                          const BuildParams& params) {
  require(tree && kernel, "build_hss: tree and kernel are required");
  require(params.tau > 0.0 && params.tau < 1.0, "build_hss: tau must lie in (0, 1)");
  require(tree->num_rows() == kernel->rows() && tree->num_cols() == kernel->cols(),
          "build_hss: tree and kernel sizes differ");
  const ClusterTree& T = *tree;
  require_binary(T);

  HMatrix<Scalar> h;
  h.structure = Structure::hss;
  h.tree = tree;
  h.kernel = kernel;
  h.params = params;
  const auto N = static_cast<std::size_t>(T.size());
  h.row_basis.resize(N);
  h.col_basis.resize(N);

  const auto near = nearfield_sets(T, params.tau);
  const auto levels = T.by_level();
  std::vector<IndexList> bar_row(N), bar_col(N);
  for (Index i : T.leaves()) {
    bar_row[static_cast<std::size_t>(i)] = detail::candidate_set(T, i, true, h.row_basis);
    bar_col[static_cast<std::size_t>(i)] = detail::candidate_set(T, i, false, h.col_basis);
  }

  for (int l = T.levels; l >= 2; --l) {
    const auto& nodes = levels[static_cast<std::size_t>(l)];
    for (Index i : nodes) {
      bar_row[static_cast<std::size_t>(i)] = detail::candidate_set(T, i, true, h.row_basis);
      bar_col[static_cast<std::size_t>(i)] = detail::candidate_set(T, i, false, h.col_basis);
    }
    ExpansionOptions eo = params.expansion;
    eo.order = params.order_at(l);
    for (Index i : nodes) {
      const auto ui = static_cast<std::size_t>(i);
      const TreeNode& nd = T.node(i);
      IndexList near_cols, near_rows;
      Index far_cols = T.num_cols() - nd.num_cols();
      Index far_rows = T.num_rows() - nd.num_rows();
      for (Index j : near[ui]) {
        const auto& bc = bar_col[static_cast<std::size_t>(j)];
        const auto& br = bar_row[static_cast<std::size_t>(j)];
        near_cols.insert(near_cols.end(), bc.begin(), bc.end());
        near_rows.insert(near_rows.end(), br.begin(), br.end());
        far_cols -= T.node(j).num_cols();
        far_rows -= T.node(j).num_rows();
      }

      // Row basis: [Û_i, S_i] over ī^row.
      {
        const IndexList& bar = bar_row[ui];
        Matrix<Scalar> C(static_cast<Index>(bar.size()), 0);
        if (far_cols > 0) C = kernel->row_basis(bar, nd.box, eo);
        if (!near_cols.empty() && !bar.empty()) {
          const TruncatedSvd<Scalar> sv = truncated_svd<Scalar>(kernel->block(bar, near_cols), params.svd_tol, false);
          C = hstack<Scalar>(C, sv.U);
        }
        h.row_basis[ui] = detail::compress(C, bar, params);
      }
      // Column basis: [V̂_i, S̃_i] over ī^col.
      {
        const IndexList& bar = bar_col[ui];
        Matrix<Scalar> C(static_cast<Index>(bar.size()), 0);
        if (far_rows > 0) C = kernel->col_basis(bar, nd.box, eo);
        if (!near_rows.empty() && !bar.empty()) {
          const Matrix<Scalar> blk = kernel->block(near_rows, bar).transpose();
          const TruncatedSvd<Scalar> sv = truncated_svd<Scalar>(blk, params.svd_tol, false);
          C = hstack<Scalar>(C, sv.U);
        }
        h.col_basis[ui] = detail::compress(C, bar, params);
      }
    }
  }

  add_sibling_couplings(h);
  add_leaf_blocks(h);
  for (auto& b : h.nearfield) {
    b.data = h.near(b);
    b.materialized = true;
  }
  return h;
}

template <typename Scalar>
HMatrix<Scalar> zero_hss(std::shared_ptr<const ClusterTree> tree) {
  require(tree != nullptr, "zero_hss: tree is required");
  require_binary(*tree);
  HMatrix<Scalar> h;
  h.structure = Structure::hss;
  h.tree = tree;
  const auto N = static_cast<std::size_t>(tree->size());
  h.row_basis.resize(N);
  h.col_basis.resize(N);
  for (Index i = 0; i < tree->size(); ++i) {
    if (i == tree->root()) continue;
    const TreeNode& nd = tree->node(i);
    Index mr = nd.num_rows(), mc = nd.num_cols();
    if (!nd.is_leaf()) mr = mc = 0;
    h.row_basis[static_cast<std::size_t>(i)] = NodeBasis<Scalar>::from_dense(Matrix<Scalar>(mr, 0));
    h.col_basis[static_cast<std::size_t>(i)] = NodeBasis<Scalar>::from_dense(Matrix<Scalar>(mc, 0));
  }
  add_sibling_couplings(h);
  for (auto& b : h.couplings) {
    b.data = Matrix<Scalar>(0, 0);
    b.materialized = true;
  }
  add_leaf_blocks(h);
  for (auto& b : h.nearfield) {
    b.data = Matrix<Scalar>::Zero(tree->node(b.row_node).num_rows(), tree->node(b.col_node).num_cols());
    b.materialized = true;
  }
  return h;
}

template <typename Scalar>
HMatrix<Scalar> hss_add(const HMatrix<Scalar>& a, const HMatrix<Scalar>& b) {
  require(a.structure == Structure::hss && b.structure == Structure::hss, "hss_add: both operands must be HSS");
  require(a.tree == b.tree, "hss_add: operands must share the same tree");
  require(a.couplings.size() == b.couplings.size() && a.nearfield.size() == b.nearfield.size(),
          "hss_add: block layouts differ");
  const ClusterTree& T = *a.tree;
  HMatrix<Scalar> h;
  h.structure = Structure::hss;
  h.tree = a.tree;
  h.params = a.params;
  const auto N = static_cast<std::size_t>(T.size());
  h.row_basis.resize(N);
  h.col_basis.resize(N);

  auto merge = [&](const std::vector<NodeBasis<Scalar>>& f1, const std::vector<NodeBasis<Scalar>>& f2, Index i) {
    const TreeNode& nd = T.node(i);
    const Matrix<Scalar> F1 = f1[static_cast<std::size_t>(i)].to_dense();
    const Matrix<Scalar> F2 = f2[static_cast<std::size_t>(i)].to_dense();
    if (nd.is_leaf()) return NodeBasis<Scalar>::from_dense(hstack<Scalar>(F1, F2));
    Index rows = 0;
    for (Index c : nd.children) rows += f1[static_cast<std::size_t>(c)].k + f2[static_cast<std::size_t>(c)].k;
    Matrix<Scalar> F = Matrix<Scalar>::Zero(rows, F1.cols() + F2.cols());
    Index r = 0, r1 = 0, r2 = 0;
    for (Index c : nd.children) {
      const Index k1 = f1[static_cast<std::size_t>(c)].k, k2 = f2[static_cast<std::size_t>(c)].k;
      F.block(r, 0, k1, F1.cols()) = F1.middleRows(r1, k1);
      F.block(r + k1, F1.cols(), k2, F2.cols()) = F2.middleRows(r2, k2);
      r += k1 + k2;
      r1 += k1;
      r2 += k2;
    }
    return NodeBasis<Scalar>::from_dense(std::move(F));
  };
  for (Index i = 0; i < T.size(); ++i) {
    if (i == T.root()) continue;
    h.row_basis[static_cast<std::size_t>(i)] = merge(a.row_basis, b.row_basis, i);
    h.col_basis[static_cast<std::size_t>(i)] = merge(a.col_basis, b.col_basis, i);
  }
  for (std::size_t t = 0; t < a.couplings.size(); ++t) {
    const auto& ba = a.couplings[t];
    const auto& bb = b.couplings[t];
    require(ba.row_node == bb.row_node && ba.col_node == bb.col_node, "hss_add: coupling layouts differ");
    const Matrix<Scalar> B1 = a.coupling(ba), B2 = b.coupling(bb);
    Matrix<Scalar> B = Matrix<Scalar>::Zero(B1.rows() + B2.rows(), B1.cols() + B2.cols());
    B.topLeftCorner(B1.rows(), B1.cols()) = B1;
    B.bottomRightCorner(B2.rows(), B2.cols()) = B2;
    h.couplings.push_back({ba.row_node, ba.col_node, true, std::move(B)});
  }
  for (std::size_t t = 0; t < a.nearfield.size(); ++t) {
    const auto& ba = a.nearfield[t];
    const auto& bb = b.nearfield[t];
    require(ba.row_node == bb.row_node && ba.col_node == bb.col_node, "hss_add: nearfield layouts differ");
    h.nearfield.push_back({ba.row_node, ba.col_node, true, a.near(ba) + b.near(bb)});
  }
  return h;
}

template <typename Scalar>
HMatrix<Scalar> diag_scale(const HMatrix<Scalar>& a, const Vector<Scalar>& dl, const Vector<Scalar>& dr) {
  require(dl.size() == a.rows() && dr.size() == a.cols(), "diag_scale: vector length does not match the matrix");
  const ClusterTree& T = *a.tree;
  HMatrix<Scalar> h = a;
  h.kernel.reset();
  for (auto& b : h.couplings) {
    b.data = a.coupling(b);
    b.materialized = true;
  }
  auto gather = [](const Vector<Scalar>& d, std::span<const Index> idx) {
    Vector<Scalar> out(static_cast<Index>(idx.size()));
    for (std::size_t t = 0; t < idx.size(); ++t) out(static_cast<Index>(t)) = d(idx[t]);
    return out;
  };
  for (Index i : T.leaves()) {
    if (i == T.root()) continue;
    const auto ui = static_cast<std::size_t>(i);
    h.row_basis[ui] = NodeBasis<Scalar>::from_dense(gather(dl, T.rows(i)).asDiagonal() * a.row_basis[ui].to_dense());
    h.col_basis[ui] = NodeBasis<Scalar>::from_dense(gather(dr, T.cols(i)).asDiagonal() * a.col_basis[ui].to_dense());
  }
  for (auto& b : h.nearfield) {
    const Matrix<Scalar> D = a.near(b);
    b.data = gather(dl, T.rows(b.row_node)).asDiagonal() * D * gather(dr, T.cols(b.col_node)).asDiagonal();
    b.materialized = true;
  }
  return h;
}

template <typename Scalar>
Matrix<Scalar> reconstruct_dense_hss(const HMatrix<Scalar>& h, Index budget) {
  return h.tree->is_perfect() ? h.reconstruct_telescoping(budget) : h.reconstruct(budget);
}

template HMatrix<double> build_hss(std::shared_ptr<const ClusterTree>, std::shared_ptr<const Kernel<double>>,
                                   const BuildParams&);
template HMatrix<complex> build_hss(std::shared_ptr<const ClusterTree>, std::shared_ptr<const Kernel<complex>>,
                                    const BuildParams&);
template HMatrix<double> hss_add(const HMatrix<double>&, const HMatrix<double>&);
template HMatrix<complex> hss_add(const HMatrix<complex>&, const HMatrix<complex>&);
template HMatrix<double> diag_scale(const HMatrix<double>&, const Vector<double>&, const Vector<double>&);
template HMatrix<complex> diag_scale(const HMatrix<complex>&, const Vector<complex>&, const Vector<complex>&);
template HMatrix<double> zero_hss(std::shared_ptr<const ClusterTree>);
template HMatrix<complex> zero_hss(std::shared_ptr<const ClusterTree>);
template Matrix<double> reconstruct_dense_hss(const HMatrix<double>&, Index);
template Matrix<complex> reconstruct_dense_hss(const HMatrix<complex>&, Index);

}  // namespace smash
