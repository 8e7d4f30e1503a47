#ifndef SMASH_EXPERIMENTS_HPP
#define SMASH_EXPERIMENTS_HPP

#include <functional>
#include <optional>

#include "smash/bounds.hpp"
#include "smash/io.hpp"

namespace smash {

struct ExperimentConfig {
  std::string name;
  /// Problem sizes; each experiment has its own default ladder.
  std::vector<Index> sizes;
  /// Geometries to run; empty selects the experiment's defaults.
  std::vector<Geometry> geometries;
  /// Target accuracy ε driving τ, r and ε_SVD.
  std::optional<double> tol;
  Index leaf_cap = 50;
  std::optional<double> tau;
  std::optional<int> order;
  std::optional<double> svd_tol;
  std::optional<Expansion> expansion;
  std::uint64_t seed = 1;
  Index dense_budget = kDefaultDenseBudget;
  int repeats = 3;
  /// ε values of the rank study; ε_far values of the storage study.
  std::vector<double> eps_list;
  /// Oracle columns that cost O(n²) work (max error, residual against exact A).
  bool oracles = true;
  /// cond(A) by dense SVD, within the dense budget.
  bool condition_numbers = false;
  /// Run independent configurations (geometry, n) concurrently.
  bool concurrent = false;
};

std::vector<std::string> experiment_names();

/// Runs a named experiment: h2_matvec_scaling, cauchy_solve, laplace_dirichlet,
/// rank_study or storage_study.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// A q computed in row blocks straight from the kernel, without storing A.
template <typename Scalar>
Vector<Scalar> kernel_matvec(const Kernel<Scalar>& kernel, const Vector<Scalar>& q);

/// max |A − Â| from the reconstructed operator; throws when A exceeds the budget.
template <typename Scalar>
double max_abs_error(const HMatrix<Scalar>& h, const Kernel<Scalar>& kernel, Index budget = kDefaultDenseBudget);

/// max |A − Â| over randomly chosen columns holding about `samples` entries.
template <typename Scalar>
double sampled_max_abs_error(const HMatrix<Scalar>& h, const Kernel<Scalar>& kernel, Index samples,
                             std::mt19937_64& rng);

/// HSS of diag(w₁) C diag(v₁) + … built from one HSS of the Cauchy matrix C.
template <typename Scalar>
HMatrix<Scalar> build_cauchy_like_hss(std::shared_ptr<const ClusterTree> tree,
                                      std::shared_ptr<const CauchyKernel<Scalar>> cauchy, const Matrix<Scalar>& w,
                                      const Matrix<Scalar>& v, const BuildParams& params);

/// Median wall-clock seconds of `repeats` calls.
double median_seconds(const std::function<void()>& fn, int repeats);

/// Seconds per call, averaged over enough calls to fill `min_total` seconds.
double per_call_seconds(const std::function<void()>& fn, double min_total = 0.1);

}  // namespace smash

#endif
