#include "smash/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <limits>

#include "smash/h2.hpp"
#include "smash/hss.hpp"
#include "smash/nystrom.hpp"
#include "smash/svd.hpp"
#include "smash/ulv.hpp"

namespace smash {

namespace {

using Clock = std::chrono::steady_clock;
using Row = std::vector<Cell>;
using Task = std::function<std::vector<Row>()>;

constexpr Index kSampledEntries = 1000000;
constexpr Index kRowChunk = 256;

Cell absent() { return std::monostate{}; }
Cell num(double v) { return v; }
Cell num(Index v) { return static_cast<std::int64_t>(v); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Per-configuration generator so results do not depend on execution order.
std::mt19937_64 config_rng(std::uint64_t seed, Geometry g, Index n, std::uint64_t salt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

template <typename Scalar>
Vector<Scalar> rand01(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector<Scalar> v(n);
  for (Index i = 0; i < n; ++i) v(i) = Scalar(u(rng));
  return v;
}

template <typename Scalar>
double rel(const Vector<Scalar>& a, const Vector<Scalar>& ref) {
  return (a - ref).norm() / ref.norm();
}

std::vector<Index> sizes_or(const ExperimentConfig& cfg, std::vector<Index> def) {
  const auto& s = cfg.sizes.empty() ? def : cfg.sizes;
  for (Index n : s) require(n >= 1, "experiment: sizes must be positive");
  return s;
}

std::vector<Geometry> geometries_or(const ExperimentConfig& cfg, std::vector<Geometry> def,
                                    const std::vector<Geometry>& allowed, const std::string& name) {
  const auto& g = cfg.geometries.empty() ? def : cfg.geometries;
  for (Geometry x : g)
    require(std::find(allowed.begin(), allowed.end(), x) != allowed.end(),
            name + ": geometry " + to_string(x) + " is not supported");
  return g;
}

BuildParams make_params(const ExperimentConfig& cfg, double default_tol, int d, Expansion default_kind) {
  const ParamChoice pc = choose_params(cfg.tol.value_or(default_tol), d);
  BuildParams bp;
  bp.tau = cfg.tau.value_or(pc.tau);
  bp.expansion = {cfg.expansion.value_or(default_kind), cfg.order.value_or(pc.order)};
  bp.svd_tol = cfg.svd_tol.value_or(pc.svd_tol);
  bp.s = pc.s;
  return bp;
}

std::vector<std::string> echo_columns() { return {"tau", "order", "expansion", "svd_tol", "leaf_cap", "seed"}; }

void echo(Row& row, const BuildParams& bp, const ExperimentConfig& cfg) {
  row.push_back(num(bp.tau));
  row.push_back(num(Index{bp.expansion.order}));
  row.push_back(std::string(bp.expansion.kind == Expansion::taylor ? "taylor" : "chebyshev"));
  row.push_back(num(bp.svd_tol));
  row.push_back(num(cfg.leaf_cap));
  row.push_back(static_cast<std::int64_t>(cfg.seed));
}

std::shared_ptr<const ClusterTree> make_tree(const PointSet& X, const PointSet& Y, Index leaf_cap, Branching mode) {
  TreeOptions to;
  to.leaf_cap = leaf_cap;
  to.mode = mode;
  return std::make_shared<ClusterTree>(build_tree(X, Y, to));
}

/// Exact max error within the budget, sampled beyond it.
template <typename Scalar>
void max_error_cells(Row& row, const HMatrix<Scalar>& h, const Kernel<Scalar>& k, const ExperimentConfig& cfg,
                     std::mt19937_64& rng) {
  if (!cfg.oracles) {
    row.push_back(absent());
    row.push_back(absent());
  } else if (h.rows() * h.cols() <= cfg.dense_budget) {
    row.push_back(num(max_abs_error(h, k, cfg.dense_budget)));
    row.push_back(absent());
  } else {
    row.push_back(absent());
    row.push_back(num(sampled_max_abs_error(h, k, kSampledEntries, rng)));
  }
}

template <typename Scalar>
Cell condition_cell(const Kernel<Scalar>& k, const ExperimentConfig& cfg) {
  if (!cfg.condition_numbers || k.rows() * k.cols() > cfg.dense_budget) return absent();
  const VectorXd s = singular_values<Scalar>(assemble_dense(k, cfg.dense_budget));
  if (s.size() == 0 || s(s.size() - 1) == 0.0) return num(std::numeric_limits<double>::infinity());
  return num(s(0) / s(s.size() - 1));
}

/// Median over repeats of the averaged per-call time; the caller materializes first.
double median_of_calls(const std::function<void()>& fn, int repeats) {
  std::vector<double> t;
  for (int r = 0; r < std::max(repeats, 1); ++r) t.push_back(per_call_seconds(fn));
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

std::vector<Row> run_tasks(const std::vector<Task>& tasks, bool concurrent) {
  std::vector<Row> rows;
  if (!concurrent) {
    for (const auto& t : tasks)
      for (auto& r : t()) rows.push_back(std::move(r));
    return rows;
  }
  std::vector<std::future<std::vector<Row>>> fut;
  for (const auto& t : tasks) fut.push_back(std::async(std::launch::async, t));
  for (auto& f : fut)
    for (auto& r : f.get()) rows.push_back(std::move(r));
  return rows;
}

// Uniform grid, complex Cauchy kernel with unit diagonal, H² matvec.
ExperimentReport h2_matvec_scaling(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "h2_matvec_scaling";
  rep.columns = {"n", "relerr", "t_constr", "t_matvec", "max_rank", "levels"};
  for (auto& c : echo_columns()) rep.columns.push_back(c);
  const auto geos = geometries_or(cfg, {Geometry::grid2d}, {Geometry::grid2d}, rep.name);
  const BuildParams bp = make_params(cfg, 1e-7, 2, Expansion::taylor);
  std::vector<Task> tasks;
  for (Index n : sizes_or(cfg, {1600, 6400, 25600})) {
    tasks.push_back([&cfg, bp, n] {
      auto rng = config_rng(cfg.seed, Geometry::grid2d, n);
      const PointPair pp = cauchy_points(Geometry::grid2d, n, rng);
      auto K = std::make_shared<CauchyKernel<complex>>(pp.X, pp.Y, complex(1.0));
      auto T = make_tree(pp.X, pp.Y, cfg.leaf_cap, Branching::two_to_d);
      HMatrix<complex> H;
      const double tc = median_seconds([&] { H = build_h2<complex>(T, K, bp); }, cfg.repeats);
      H.materialize();
      const Vector<complex> u = rand01<complex>(n, rng);
      Vector<complex> z;
      const double tm = median_of_calls([&] { z = H.matvec(u); }, cfg.repeats);
      Row row{num(n), cfg.oracles ? num(rel(z, kernel_matvec<complex>(*K, u))) : absent(), num(tc), num(tm),
              num(H.max_rank()), num(Index{T->levels})};
      echo(row, bp, cfg);
      return std::vector<Row>{row};
    });
  }
  rep.rows = run_tasks(tasks, cfg.concurrent);
  return rep;
}

// Cauchy-like A = Σ_l diag(w_l) C diag(v_l), p = 2, solved by ULV.
template <typename Scalar>
Row cauchy_solve_row(const ExperimentConfig& cfg, const BuildParams& bp, Geometry g, Index n) {
  auto rng = config_rng(cfg.seed, g, n);
  const PointPair pp = cauchy_points(g, n, rng);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Matrix<Scalar> w(n, 2), v(n, 2);
  for (Index i = 0; i < n; ++i)
    for (Index l = 0; l < 2; ++l) {
      w(i, l) = Scalar(u01(rng));
      v(i, l) = Scalar(u01(rng));
    }
  auto C = std::make_shared<CauchyKernel<Scalar>>(pp.X, pp.Y, Scalar(0));
  const CauchyLikeKernel<Scalar> A(pp.X, pp.Y, w, v);
  auto T = make_tree(pp.X, pp.Y, cfg.leaf_cap, Branching::binary);
  HMatrix<Scalar> H;
  const double tc = median_seconds([&] { H = build_cauchy_like_hss<Scalar>(T, C, w, v, bp); }, cfg.repeats);
  const Vector<Scalar> u = rand01<Scalar>(n, rng);
  const Vector<Scalar> b = kernel_matvec<Scalar>(A, u);
  Vector<Scalar> x;
  const double ts = median_seconds([&] { x = ulv_solve(ulv_factor(H), b); }, cfg.repeats);
  Vector<Scalar> z;
  const double tm = median_of_calls([&] { z = H.matvec(u); }, cfg.repeats);
  Row row{to_string(g),
          num(n),
          num(rel(x, u)),
          cfg.oracles ? num(rel(kernel_matvec<Scalar>(A, x), b)) : absent(),
          num(tc),
          num(ts),
          num(tm),
          num(H.max_rank())};
  echo(row, bp, cfg);
  return row;
}

ExperimentReport cauchy_solve(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "cauchy_solve";
  rep.columns = {"geometry", "n", "forward_error", "residual", "t_constr", "t_sol", "t_matvec", "max_rank"};
  for (auto& c : echo_columns()) rep.columns.push_back(c);
  const auto geos = geometries_or(cfg, {Geometry::interval, Geometry::honeybee, Geometry::snail},
                                  {Geometry::interval, Geometry::honeybee, Geometry::snail, Geometry::ramhead,
                                   Geometry::sunflower, Geometry::circle},
                                  rep.name);
  const BuildParams bp = make_params(cfg, 1e-8, 1, Expansion::taylor);
  std::vector<Task> tasks;
  for (Geometry g : geos)
    for (Index n : sizes_or(cfg, {1600, 3200, 6400})) {
      tasks.push_back([&cfg, bp, g, n] {
        return std::vector<Row>{geometry_is_real(g) ? cauchy_solve_row<double>(cfg, bp, g, n)
                                                    : cauchy_solve_row<complex>(cfg, bp, g, n)};
      });
    }
  rep.rows = run_tasks(tasks, cfg.concurrent);
  return rep;
}

DirichletProblem dirichlet_problem(Geometry g, Index n) {
  return g == Geometry::ramhead ? DirichletProblem::ramhead(n) : DirichletProblem::sunflower(n);
}

// Second-kind double-layer equation on a closed curve, HSS plus ULV.
ExperimentReport laplace_dirichlet(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "laplace_dirichlet";
  rep.columns = {"geometry", "n",        "error",    "max_error", "max_error_est",
                 "cond",     "t_constr", "t_sol",    "max_rank"};
  for (auto& c : echo_columns()) rep.columns.push_back(c);
  const auto geos = geometries_or(cfg, {Geometry::ramhead, Geometry::sunflower},
                                  {Geometry::ramhead, Geometry::sunflower}, rep.name);
  const BuildParams bp = make_params(cfg, 1e-10, 1, Expansion::chebyshev);
  std::vector<Task> tasks;
  for (Geometry g : geos) {
    const auto def = g == Geometry::ramhead ? std::vector<Index>{160, 320, 640, 1280}
                                            : std::vector<Index>{640, 1280, 2560, 5120};
    for (Index n : sizes_or(cfg, def)) {
      tasks.push_back([&cfg, bp, g, n] {
        auto rng = config_rng(cfg.seed, g, n);
        const DirichletProblem P = dirichlet_problem(g, n);
        auto K = std::make_shared<LaplaceDlpKernel>(P.curve, n);
        auto T = make_tree(K->row_points(), K->col_points(), cfg.leaf_cap, Branching::binary);
        HMatrix<double> H;
        const double tc = median_seconds([&] { H = build_hss<double>(T, K, bp); }, cfg.repeats);
        const VectorXd rhs = dirichlet_rhs(P);
        VectorXd sigma;
        const double ts = median_seconds([&] { sigma = ulv_solve(ulv_factor(H), rhs); }, cfg.repeats);
        const double err = std::abs(evaluate_potential(P.curve, sigma, P.xstar) - exact_solution(P, P.xstar));
        Row row{to_string(g), num(n), num(err)};
        max_error_cells(row, H, *K, cfg, rng);
        row.push_back(condition_cell<double>(*K, cfg));
        row.push_back(num(tc));
        row.push_back(num(ts));
        row.push_back(num(H.max_rank()));
        echo(row, bp, cfg);
        return std::vector<Row>{row};
      });
    }
  }
  rep.rows = run_tasks(tasks, cfg.concurrent);
  return rep;
}

// Exact ε-rank of the root children's off-diagonal block against the HSS skeleton size.
ExperimentReport rank_study(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "rank_study";
  rep.columns = {"geometry", "n", "block_rows", "block_cols", "eps", "r_eps", "size_B"};
  for (auto& c : echo_columns()) rep.columns.push_back(c);
  const auto geos = geometries_or(cfg, {Geometry::ramhead, Geometry::sunflower},
                                  {Geometry::ramhead, Geometry::sunflower}, rep.name);
  const std::vector<double> eps = cfg.eps_list.empty() ? std::vector<double>{1e-3, 1e-6, 1e-10} : cfg.eps_list;
  std::vector<Task> tasks;
  for (Geometry g : geos)
    for (Index n : sizes_or(cfg, {1280})) {
      tasks.push_back([&cfg, eps, g, n] {
        const DirichletProblem P = dirichlet_problem(g, n);
        auto K = std::make_shared<LaplaceDlpKernel>(P.curve, n);
        auto T = make_tree(K->row_points(), K->col_points(), cfg.leaf_cap, Branching::binary);
        const TreeNode& root = T->node(T->root());
        require(root.children.size() == 2, "rank_study: the tree has a single leaf");
        const Index c1 = root.children[0], c2 = root.children[1];
        const Index br = T->node(c1).num_rows(), bc = T->node(c2).num_cols();
        std::optional<VectorXd> sv;
        if (cfg.oracles && br * bc <= cfg.dense_budget) sv = singular_values<double>(K->block(T->rows(c1), T->cols(c2)));
        std::vector<Row> rows;
        for (double e : eps) {
          ExperimentConfig c = cfg;
          c.tol = e;
          const BuildParams bp = make_params(c, e, 1, Expansion::chebyshev);
          const HMatrix<double> H = build_hss<double>(T, K, bp);
          Cell re = absent();
          if (sv) {
            Index r = 0;
            while (r < sv->size() && (*sv)(r) >= e * (*sv)(0)) ++r;
            re = num(r);
          }
          const Index sb = std::max(H.row_basis[static_cast<std::size_t>(c1)].k, H.col_basis[static_cast<std::size_t>(c2)].k);
          Row row{to_string(g), num(n), num(br), num(bc), num(e), re, num(sb)};
          echo(row, bp, cfg);
          rows.push_back(std::move(row));
        }
        return rows;
      });
    }
  rep.rows = run_tasks(tasks, cfg.concurrent);
  return rep;
}

// Compressed SMASH storage against dense generators and the dense matrix.
ExperimentReport storage_study(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "storage_study";
  rep.columns = {"geometry", "n", "eps_far", "eps_svd", "storage_A_MB", "hss0_MB", "smash_MB", "max_rank"};
  for (auto& c : echo_columns()) rep.columns.push_back(c);
  const auto geos = geometries_or(cfg, {Geometry::ramhead, Geometry::sunflower},
                                  {Geometry::ramhead, Geometry::sunflower}, rep.name);
  const std::vector<double> eps = cfg.eps_list.empty() ? std::vector<double>{1e-4, 1e-10} : cfg.eps_list;
  constexpr double MB = 1024.0 * 1024.0;
  std::vector<Task> tasks;
  for (Geometry g : geos)
    for (Index n : sizes_or(cfg, {2560})) {
      tasks.push_back([&cfg, eps, g, n] {
        const DirichletProblem P = dirichlet_problem(g, n);
        auto K = std::make_shared<LaplaceDlpKernel>(P.curve, n);
        auto T = make_tree(K->row_points(), K->col_points(), cfg.leaf_cap, Branching::binary);
        std::vector<Row> rows;
        for (double e : eps) {
          ExperimentConfig c = cfg;
          c.tol = e;
          const BuildParams bp = make_params(c, e, 1, Expansion::chebyshev);
          const HMatrix<double> H = build_hss<double>(T, K, bp);
          const StorageReport s = storage_report(H);
          Row row{to_string(g),
                  num(n),
                  num(e),
                  num(bp.svd_tol),
                  num(s.dense_bytes / MB),
                  num(s.dense_generator_bytes / MB),
                  num(s.compressed_bytes / MB),
                  num(H.max_rank())};
          echo(row, bp, cfg);
          rows.push_back(std::move(row));
        }
        return rows;
      });
    }
  rep.rows = run_tasks(tasks, cfg.concurrent);
  return rep;
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"h2_matvec_scaling", "cauchy_solve", "laplace_dirichlet", "rank_study", "storage_study"};
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  require(cfg.leaf_cap >= 1, "experiment: leaf_cap must be positive");
  require(cfg.repeats >= 1, "experiment: repeats must be positive");
  require(cfg.dense_budget >= 0, "experiment: dense budget must be nonnegative");
  if (cfg.name == "h2_matvec_scaling") return h2_matvec_scaling(cfg);
  if (cfg.name == "cauchy_solve") return cauchy_solve(cfg);
  if (cfg.name == "laplace_dirichlet") return laplace_dirichlet(cfg);
  if (cfg.name == "rank_study") return rank_study(cfg);
  if (cfg.name == "storage_study") return storage_study(cfg);
  throw ValidationError("unknown experiment '" + cfg.name + "'");
}

template <typename Scalar>
Vector<Scalar> kernel_matvec(const Kernel<Scalar>& kernel, const Vector<Scalar>& q) {
  require(q.size() == kernel.cols(), "kernel_matvec: vector length does not match the kernel");
  const Index m = kernel.rows(), n = kernel.cols();
  IndexList cols(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) cols[static_cast<std::size_t>(j)] = j;
  Vector<Scalar> out(m);
  Matrix<Scalar> blk;
  for (Index r0 = 0; r0 < m; r0 += kRowChunk) {
    const Index len = std::min(kRowChunk, m - r0);
    IndexList rows(static_cast<std::size_t>(len));
    for (Index a = 0; a < len; ++a) rows[static_cast<std::size_t>(a)] = r0 + a;
    kernel.block(rows, cols, blk);
    out.segment(r0, len) = blk * q;
  }
  return out;
}

template <typename Scalar>
double max_abs_error(const HMatrix<Scalar>& h, const Kernel<Scalar>& kernel, Index budget) {
  require(h.rows() == kernel.rows() && h.cols() == kernel.cols(), "max_abs_error: sizes differ");
  const Matrix<Scalar> Ah = h.reconstruct(budget);
  const Index m = kernel.rows(), n = kernel.cols();
  IndexList cols(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) cols[static_cast<std::size_t>(j)] = j;
  double err = 0.0;
  Matrix<Scalar> blk;
  for (Index r0 = 0; r0 < m; r0 += kRowChunk) {
    const Index len = std::min(kRowChunk, m - r0);
    IndexList rows(static_cast<std::size_t>(len));
    for (Index a = 0; a < len; ++a) rows[static_cast<std::size_t>(a)] = r0 + a;
    kernel.block(rows, cols, blk);
    err = std::max(err, (blk - Ah.middleRows(r0, len)).cwiseAbs().maxCoeff());
  }
  return err;
}

template <typename Scalar>
double sampled_max_abs_error(const HMatrix<Scalar>& h, const Kernel<Scalar>& kernel, Index samples,
                             std::mt19937_64& rng) {
  require(h.rows() == kernel.rows() && h.cols() == kernel.cols(), "sampled_max_abs_error: sizes differ");
  const Index m = h.rows(), n = h.cols();
  if (m == 0 || n == 0) return 0.0;
  const Index ncols = std::clamp<Index>((samples + m - 1) / m, 1, n);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  IndexList rows(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
  double err = 0.0;
  Vector<Scalar> e = Vector<Scalar>::Zero(n);
  for (Index t = 0; t < ncols; ++t) {
    const Index j = pick(rng);
    e(j) = Scalar(1);
    const Vector<Scalar> col = h.matvec(e);
    e(j) = Scalar(0);
    const Index jj[1] = {j};
    err = std::max(err, (kernel.block(rows, jj) - col).cwiseAbs().maxCoeff());
  }
  return err;
}

template <typename Scalar>
HMatrix<Scalar> build_cauchy_like_hss(std::shared_ptr<const ClusterTree> tree,
                                      std::shared_ptr<const CauchyKernel<Scalar>> cauchy, const Matrix<Scalar>& w,
                                      const Matrix<Scalar>& v, const BuildParams& params) {
  require(w.cols() == v.cols() && w.cols() >= 1, "build_cauchy_like_hss: w and v need the same positive width");
  require(w.rows() == cauchy->rows() && v.rows() == cauchy->cols(), "build_cauchy_like_hss: generator sizes differ");
  const HMatrix<Scalar> C = build_hss<Scalar>(std::move(tree), cauchy, params);
  HMatrix<Scalar> out = diag_scale<Scalar>(C, w.col(0), v.col(0));
  for (Index l = 1; l < w.cols(); ++l) out = hss_add(out, diag_scale<Scalar>(C, w.col(l), v.col(l)));
  return out;
}

double median_seconds(const std::function<void()>& fn, int repeats) {
  std::vector<double> t;
  for (int r = 0; r < std::max(repeats, 1); ++r) {
    const auto t0 = Clock::now();
    fn();
    t.push_back(seconds_since(t0));
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

double per_call_seconds(const std::function<void()>& fn, double min_total) {
  fn();
  Index calls = 0;
  const auto t0 = Clock::now();
  double el = 0.0;
  do {
    fn();
    ++calls;
    el = seconds_since(t0);
  } while (el < min_total);
  return el / static_cast<double>(calls);
}

template Vector<double> kernel_matvec(const Kernel<double>&, const Vector<double>&);
template Vector<complex> kernel_matvec(const Kernel<complex>&, const Vector<complex>&);
template double max_abs_error(const HMatrix<double>&, const Kernel<double>&, Index);
template double max_abs_error(const HMatrix<complex>&, const Kernel<complex>&, Index);
template double sampled_max_abs_error(const HMatrix<double>&, const Kernel<double>&, Index, std::mt19937_64&);
template double sampled_max_abs_error(const HMatrix<complex>&, const Kernel<complex>&, Index, std::mt19937_64&);
template HMatrix<double> build_cauchy_like_hss(std::shared_ptr<const ClusterTree>,
                                               std::shared_ptr<const CauchyKernel<double>>, const Matrix<double>&,
                                               const Matrix<double>&, const BuildParams&);
template HMatrix<complex> build_cauchy_like_hss(std::shared_ptr<const ClusterTree>,
                                                std::shared_ptr<const CauchyKernel<complex>>, const Matrix<complex>&,
                                                const Matrix<complex>&, const BuildParams&);

}  // namespace smash
