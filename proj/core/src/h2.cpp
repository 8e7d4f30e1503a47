#include "smash/h2.hpp"

#include "build_common.hpp"

namespace smash {

template <typename Scalar>
HMatrix<Scalar> build_h2(std::shared_ptr<const ClusterTree> tree, std::shared_ptr<const Kernel<Scalar>> kernel,
                         const BuildParams& params) {
  require(tree && kernel, "build_h2: tree and kernel are required");
  require(params.tau > 0.0 && params.tau < 1.0, "build_h2: tau must lie in (0, 1)");
  require(tree->num_rows() == kernel->rows() && tree->num_cols() == kernel->cols(),
          "build_h2: tree and kernel sizes differ");
  const ClusterTree& T = *tree;

  HMatrix<Scalar> h;
  h.structure = Structure::h2;
  h.tree = tree;
  h.kernel = kernel;
  h.params = params;
  const auto N = static_cast<std::size_t>(T.size());
  h.row_basis.resize(N);
  h.col_basis.resize(N);

  const auto levels = T.by_level();
  for (int l = T.levels; l >= 2; --l) {
    ExpansionOptions eo = params.expansion;
    eo.order = params.order_at(l);
    for (Index i : levels[static_cast<std::size_t>(l)]) {
      const auto ui = static_cast<std::size_t>(i);
      const Box& box = T.node(i).box;
      const IndexList rbar = detail::candidate_set(T, i, true, h.row_basis);
      const IndexList cbar = detail::candidate_set(T, i, false, h.col_basis);
      h.row_basis[ui] = detail::compress<Scalar>(kernel->row_basis(rbar, box, eo), rbar, params);
      h.col_basis[ui] = detail::compress<Scalar>(kernel->col_basis(cbar, box, eo), cbar, params);
    }
  }

  const LeafSets ls = leaf_sets(T, params.tau, Structure::h2);
  for (const auto& [i, j] : ls.admissible) h.couplings.push_back({i, j, false, {}});
  for (const auto& [i, j] : ls.inadmissible) h.nearfield.push_back({i, j, false, {}});
  detail::sort_blocks(h.couplings);
  detail::sort_blocks(h.nearfield);
  return h;
}

template <typename Scalar>
Matrix<Scalar> reconstruct_dense_h2(const HMatrix<Scalar>& h, Index budget) {
  return h.tree->is_perfect() ? h.reconstruct_telescoping(budget) : h.reconstruct(budget);
}

template HMatrix<double> build_h2(std::shared_ptr<const ClusterTree>, std::shared_ptr<const Kernel<double>>,
                                  const BuildParams&);
template HMatrix<complex> build_h2(std::shared_ptr<const ClusterTree>, std::shared_ptr<const Kernel<complex>>,
                                   const BuildParams&);
template Matrix<double> reconstruct_dense_h2(const HMatrix<double>&, Index);
template Matrix<complex> reconstruct_dense_h2(const HMatrix<complex>&, Index);

}  // namespace smash
