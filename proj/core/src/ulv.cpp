#include "smash/ulv.hpp"

#include <string>

namespace smash {

namespace {

constexpr double kPivotTol = 1e-13;

template <typename Scalar>
Index sibling_of(const ClusterTree& T, Index c) {
  const TreeNode& p = T.node(T.node(c).parent);
  return p.children[0] == c ? p.children[1] : p.children[0];
}

}  // namespace

template <typename Scalar>
UlvFactorization<Scalar> ulv_factor(const HMatrix<Scalar>& h) {
  require(h.structure == Structure::hss, "ulv_factor: an HSS matrix is required");
  require(h.rows() == h.cols(), "ulv_factor: the matrix must be square");
  const ClusterTree& T = *h.tree;
  for (const auto& nd : T.nodes)
    require(nd.is_leaf() || nd.children.size() == 2, "ulv_factor: the tree must be binary");

  UlvFactorization<Scalar> f;
  f.tree = h.tree;
  const auto N = static_cast<std::size_t>(T.size());
  f.nodes.resize(N);
  f.R.resize(N);
  f.W.resize(N);
  f.B.resize(N);

  std::vector<Index> leaf_block(N, -1);
  for (std::size_t t = 0; t < h.nearfield.size(); ++t) {
    const auto& b = h.nearfield[t];
    require(b.row_node == b.col_node && T.node(b.row_node).is_leaf(), "ulv_factor: unexpected nearfield block");
    leaf_block[static_cast<std::size_t>(b.row_node)] = static_cast<Index>(t);
  }

  // Transfers and sibling couplings.
  for (Index p = 0; p < T.size(); ++p) {
    const TreeNode& nd = T.node(p);
    if (nd.is_leaf()) continue;
    Matrix<Scalar> Fr, Fc;
    if (p != T.root()) {
      Fr = h.row_basis[static_cast<std::size_t>(p)].to_dense();
      Fc = h.col_basis[static_cast<std::size_t>(p)].to_dense();
    }
    Index ro = 0, co = 0;
    for (Index c : nd.children) {
      const auto uc = static_cast<std::size_t>(c);
      const Index kr = h.row_basis[uc].k, kc = h.col_basis[uc].k;
      if (p != T.root()) {
        f.R[uc] = Fr.middleRows(ro, kr);
        f.W[uc] = Fc.middleRows(co, kc);
      }
      ro += kr;
      co += kc;
      const Index b = h.find_coupling(c, sibling_of<Scalar>(T, c));
      require(b >= 0, "ulv_factor: missing sibling coupling");
      f.B[uc] = h.coupling(h.couplings[static_cast<std::size_t>(b)]);
    }
  }

  for (Index i = 0; i < T.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const TreeNode& nd = T.node(i);
    Matrix<Scalar> D, U, V;
    if (nd.is_leaf()) {
      require(leaf_block[ui] >= 0, "ulv_factor: missing leaf block");
      D = h.near(h.nearfield[static_cast<std::size_t>(leaf_block[ui])]);
      if (i != T.root()) {
        U = h.row_basis[ui].to_dense();
        V = h.col_basis[ui].to_dense();
      }
    } else {
      const Index c1 = nd.children[0], c2 = nd.children[1];
      const auto& n1 = f.nodes[static_cast<std::size_t>(c1)];
      const auto& n2 = f.nodes[static_cast<std::size_t>(c2)];
      const Index r1 = n1.D.rows(), r2 = n2.D.rows(), k1 = n1.D.cols(), k2 = n2.D.cols();
      D.resize(r1 + r2, k1 + k2);
      D.topLeftCorner(r1, k1) = n1.D;
      D.bottomRightCorner(r2, k2) = n2.D;
      D.topRightCorner(r1, k2) = n1.U * f.B[static_cast<std::size_t>(c1)] * n2.V.transpose();
      D.bottomLeftCorner(r2, k1) = n2.U * f.B[static_cast<std::size_t>(c2)] * n1.V.transpose();
      if (i != T.root()) {
        const Index kr = h.row_basis[ui].k, kc = h.col_basis[ui].k;
        U.resize(r1 + r2, kr);
        U << n1.U * f.R[static_cast<std::size_t>(c1)], n2.U * f.R[static_cast<std::size_t>(c2)];
        V.resize(k1 + k2, kc);
        V << n1.V * f.W[static_cast<std::size_t>(c1)], n2.V * f.W[static_cast<std::size_t>(c2)];
      }
    }

    if (i == T.root()) {
      require(D.rows() == D.cols(), "ulv_factor: reduced root block is not square");
      f.root.compute(D);
      f.root.setThreshold(kPivotTol);
      if (D.size() > 0 && !f.root.isInvertible())
        throw NumericalError("ulv_factor: singular pivot block at node " + std::to_string(i));
      break;
    }

    UlvNode<Scalar>& u = f.nodes[ui];
    const Index m = D.rows(), n = D.cols(), k = U.cols();
    Eigen::HouseholderQR<Matrix<Scalar>> qr(U);
    u.Q = qr.householderQ() * Matrix<Scalar>::Identity(m, m);
    const Index e = std::min(m - std::min(m, k), n);
    u.eliminated = e;
    const Matrix<Scalar> QhD = u.Q.adjoint() * D;
    const Matrix<Scalar> QhU = u.Q.adjoint() * U;
    if (e > 0) {
      const Matrix<Scalar> M = QhD.bottomRows(e).adjoint();
      Eigen::HouseholderQR<Matrix<Scalar>> lq(M);
      u.Q2 = lq.householderQ() * Matrix<Scalar>::Identity(n, n);
      u.L = lq.matrixQR().topRows(e).template triangularView<Eigen::Upper>().toDenseMatrix().adjoint();
      const double scale = D.norm();
      for (Index t = 0; t < e; ++t)
        if (!(std::abs(u.L(t, t)) > kPivotTol * scale))
          throw NumericalError("ulv_factor: singular pivot block at node " + std::to_string(i));
    } else {
      u.Q2 = Matrix<Scalar>::Identity(n, n);
      u.L.resize(0, 0);
    }
    const Matrix<Scalar> Tq = QhD.topRows(m - e) * u.Q2;
    u.E1 = Tq.leftCols(e);
    u.D = Tq.rightCols(n - e);
    u.U = QhU.topRows(m - e);
    const Matrix<Scalar> QV = u.Q2.transpose() * V;
    u.V_elim = QV.topRows(e);
    u.V = QV.bottomRows(n - e);
  }
  return f;
}

template <typename Scalar>
Vector<Scalar> ulv_solve(const UlvFactorization<Scalar>& f, const Vector<Scalar>& b) {
  const ClusterTree& T = *f.tree;
  require(b.size() == T.num_rows(), "ulv_solve: right-hand side length does not match the matrix");
  const auto N = static_cast<std::size_t>(T.size());
  Vector<Scalar> bp(b.size());
  for (Index a = 0; a < b.size(); ++a) bp(a) = b(T.row_perm[static_cast<std::size_t>(a)]);

  std::vector<Vector<Scalar>> rhs(N), xi(N), ye(N), u(N);
  for (Index i = 0; i < T.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const TreeNode& nd = T.node(i);
    Vector<Scalar> r;
    if (nd.is_leaf()) {
      r = bp.segment(nd.row_begin, nd.num_rows());
    } else {
      const Index c1 = nd.children[0], c2 = nd.children[1];
      const auto u1 = static_cast<std::size_t>(c1), u2 = static_cast<std::size_t>(c2);
      const Vector<Scalar> r1 = rhs[u1] - f.nodes[u1].U * (f.B[u1] * xi[u2]);
      const Vector<Scalar> r2 = rhs[u2] - f.nodes[u2].U * (f.B[u2] * xi[u1]);
      r.resize(r1.size() + r2.size());
      r << r1, r2;
    }
    if (i == T.root()) {
      u[ui] = r.size() > 0 ? Vector<Scalar>(f.root.solve(r)) : r;
      break;
    }
    const UlvNode<Scalar>& nf = f.nodes[ui];
    const Index e = nf.eliminated;
    const Vector<Scalar> qb = nf.Q.adjoint() * r;
    ye[ui] = qb.tail(e);
    if (e > 0) nf.L.template triangularView<Eigen::Lower>().solveInPlace(ye[ui]);
    rhs[ui] = qb.head(qb.size() - e) - nf.E1 * ye[ui];
    xi[ui] = nf.V_elim.transpose() * ye[ui];
    for (Index c : nd.children) xi[ui] += f.W[static_cast<std::size_t>(c)].transpose() * xi[static_cast<std::size_t>(c)];
  }

  Vector<Scalar> xp(T.num_cols());
  for (Index i = T.root(); i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    const TreeNode& nd = T.node(i);
    if (i != T.root()) {
      const TreeNode& p = T.node(nd.parent);
      Index off = 0;
      for (Index c : p.children) {
        if (c == i) break;
        off += f.nodes[static_cast<std::size_t>(c)].D.cols();
      }
      const UlvNode<Scalar>& nf = f.nodes[ui];
      Vector<Scalar> y(nf.Q2.cols());
      y << ye[ui], u[static_cast<std::size_t>(nd.parent)].segment(off, nf.D.cols());
      u[ui] = nf.Q2 * y;
    }
    if (nd.is_leaf()) xp.segment(nd.col_begin, nd.num_cols()) = u[ui];
  }
  Vector<Scalar> x(xp.size());
  for (Index a = 0; a < xp.size(); ++a) x(T.col_perm[static_cast<std::size_t>(a)]) = xp(a);
  return x;
}

template struct UlvFactorization<double>;
template struct UlvFactorization<complex>;
template UlvFactorization<double> ulv_factor(const HMatrix<double>&);
template UlvFactorization<complex> ulv_factor(const HMatrix<complex>&);
template Vector<double> ulv_solve(const UlvFactorization<double>&, const Vector<double>&);
template Vector<complex> ulv_solve(const UlvFactorization<complex>&, const Vector<complex>&);

}  // namespace smash
