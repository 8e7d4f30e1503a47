#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "smash/experiments.hpp"
#include "smash/h2.hpp"
#include "smash/hss.hpp"
#include "smash/nystrom.hpp"
#include "smash/serialize.hpp"
#include "smash/ulv.hpp"

using namespace smash;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr double kMB = 1024.0 * 1024.0;

struct Options {
  std::string kernel = "cauchy";
  std::string geometry = "interval";
  std::vector<std::string> geometries;
  Index n = 1600;
  std::string structure = "hss";
  std::string points;
  std::optional<double> tol;
  Index leaf_cap = 50;
  std::optional<double> tau;
  std::optional<int> order;
  std::optional<double> svd_tol;
  std::optional<std::string> expansion;
  std::uint64_t seed = 1;
  Index dense_budget = kDefaultDenseBudget;
  std::string out;
  bool json = false;
  double diagonal = 1.0;
  Index generators = 2;
  std::string w_file, v_file;
  // build
  std::string save;
  bool check = false;
  // matvec / solve
  std::string load;
  std::string input;
  std::string result;
  std::string format = "text";
  bool no_check = false;
  std::optional<double> max_residual;
  // experiment
  std::string experiment;
  std::vector<Index> sizes;
  std::vector<double> eps;
  int repeats = 3;
  bool no_oracles = false;
  bool cond = false;
  bool concurrent = false;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void emit(const ExperimentReport& rep, const Options& o) {
  auto write = [&](std::ostream& os) { o.json ? write_json(rep, os) : write_csv(rep, os); };
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream os(o.out);
  if (!os) throw ValidationError("cannot write " + o.out);
  write(os);
}

/// Kernel, points and target accuracy derived from the command line.
template <typename Scalar>
struct Problem {
  std::shared_ptr<const Kernel<Scalar>> kernel;
  /// Cauchy kernel behind a cauchy-like problem.
  std::shared_ptr<const CauchyKernel<Scalar>> cauchy;
  Matrix<Scalar> w, v;
  std::optional<DirichletProblem> dirichlet;
  int dim = 1;
};

CurveSpec curve_of(Geometry g) { return CurveSpec{parse_curve(to_string(g))}; }

int intrinsic_dim(Geometry g) { return g == Geometry::grid2d ? 2 : 1; }

PointPair load_points(const Options& o, Geometry g, std::mt19937_64& rng) {
  if (o.points.empty()) return cauchy_points(g, o.n, rng);
  const PointSet P = read_points_file(o.points);
  require(P.dim() <= 2, "cauchy kernels take points on the line or in the plane");
  return {P, P};
}

template <typename Scalar>
Problem<Scalar> make_problem(const Options& o) {
  const Geometry g = parse_geometry(o.geometry);
  std::mt19937_64 rng(o.seed);
  Problem<Scalar> p;
  p.dim = intrinsic_dim(g);
  if (o.kernel == "laplace-dlp") {
    if constexpr (std::is_same_v<Scalar, double>) {
      require(o.points.empty(), "laplace-dlp places its own nodes; --points is not accepted");
      DirichletProblem d = g == Geometry::ramhead     ? DirichletProblem::ramhead(o.n)
                           : g == Geometry::sunflower ? DirichletProblem::sunflower(o.n)
                                                      : DirichletProblem{curve_of(g), {2.0, 1.5}, {0.1, 0.1}, o.n};
      p.kernel = std::make_shared<LaplaceDlpKernel>(d.curve, o.n);
      p.dirichlet = d;
    }
    return p;
  }
  const PointPair pp = load_points(o, g, rng);
  if (!o.points.empty()) p.dim = static_cast<int>(pp.X.dim());
  if (o.kernel == "cauchy") {
    p.cauchy = std::make_shared<CauchyKernel<Scalar>>(pp.X, pp.Y, Scalar(o.diagonal));
    p.kernel = p.cauchy;
    return p;
  }
  require(o.kernel == "cauchy-like", "unknown kernel '" + o.kernel + "'");
  const Index n = pp.X.size();
  auto generator = [&](const std::string& file) {
    Matrix<Scalar> m;
    if (!file.empty()) {
      m = read_table_file(file).cast<Scalar>();
      require(m.rows() == n, "generator file " + file + " must have one row per point");
    } else {
      require(o.generators >= 1, "--generators must be positive");
      std::uniform_real_distribution<double> u(0.0, 1.0);
      m.resize(n, o.generators);
      for (Index i = 0; i < n; ++i)
        for (Index l = 0; l < o.generators; ++l) m(i, l) = Scalar(u(rng));
    }
    return m;
  };
  p.w = generator(o.w_file);
  p.v = generator(o.v_file);
  require(p.w.cols() == p.v.cols(), "w and v must have the same number of columns");
  p.cauchy = std::make_shared<CauchyKernel<Scalar>>(pp.X, pp.Y, Scalar(0));
  p.kernel = std::make_shared<CauchyLikeKernel<Scalar>>(pp.X, pp.Y, p.w, p.v);
  return p;
}

struct Setup {
  BuildParams params;
  double eps = 0.0;
  Structure structure = Structure::hss;
};

Setup make_setup(const Options& o, int dim) {
  Setup s;
  s.structure = o.structure == "h2" ? Structure::h2 : Structure::hss;
  require(o.structure == "h2" || o.structure == "hss", "unknown structure '" + o.structure + "'");
  const bool laplace = o.kernel == "laplace-dlp";
  s.eps = o.tol.value_or(laplace ? 1e-10 : s.structure == Structure::h2 ? 1e-7 : 1e-8);
  const ParamChoice pc = choose_params(s.eps, dim);
  const Expansion def = laplace || (s.structure == Structure::h2 && !o.points.empty()) ? Expansion::chebyshev
                                                                                         : Expansion::taylor;
  s.params.tau = o.tau.value_or(pc.tau);
  s.params.expansion = {o.expansion ? parse_expansion(*o.expansion) : def, o.order.value_or(pc.order)};
  s.params.svd_tol = o.svd_tol.value_or(pc.svd_tol);
  return s;
}

template <typename Scalar>
HMatrix<Scalar> build(const Options& o, const Problem<Scalar>& p, const Setup& s) {
  TreeOptions to;
  to.leaf_cap = o.leaf_cap;
  to.mode = s.structure == Structure::h2 ? Branching::two_to_d : Branching::binary;
  auto T = std::make_shared<ClusterTree>(build_tree(p.kernel->row_points(), p.kernel->col_points(), to));
  if (s.structure == Structure::h2) {
    require(o.kernel != "cauchy-like", "cauchy-like matrices are built as HSS");
    return build_h2<Scalar>(T, p.kernel, s.params);
  }
  if (o.kernel == "cauchy-like") return build_cauchy_like_hss<Scalar>(T, p.cauchy, p.w, p.v, s.params);
  return build_hss<Scalar>(T, p.kernel, s.params);
}

template <typename Scalar>
HMatrix<Scalar> obtain(const Options& o, const Problem<Scalar>& p, const Setup& s, double& t_constr) {
  const auto t0 = Clock::now();
  if (!o.load.empty()) {
    HMatrix<Scalar> h = load_file<Scalar>(o.load, o.kernel == "cauchy-like" ? nullptr : p.kernel);
    require(h.rows() == p.kernel->rows() && h.cols() == p.kernel->cols(),
            "loaded matrix does not match the problem size");
    t_constr = since(t0);
    return h;
  }
  HMatrix<Scalar> h = build(o, p, s);
  t_constr = since(t0);
  return h;
}

double far_tol(const Setup& s) {
  return s.params.expansion.kind == Expansion::taylor ? taylor::error_bound(s.params.tau, s.params.expansion.order)
                                                      : s.eps;
}

void echo_params(ExperimentReport& rep, std::vector<Cell>& row, const Options& o, const Setup& s) {
  for (const char* c : {"kernel", "geometry", "structure", "tau", "order", "expansion", "svd_tol", "leaf_cap", "seed"})
    rep.columns.push_back(c);
  row.push_back(o.kernel);
  row.push_back(o.points.empty() ? o.geometry : std::string("file"));
  row.push_back(o.structure);
  row.push_back(s.params.tau);
  row.push_back(std::int64_t{s.params.expansion.order});
  row.push_back(std::string(s.params.expansion.kind == Expansion::taylor ? "taylor" : "chebyshev"));
  row.push_back(s.params.svd_tol);
  row.push_back(static_cast<std::int64_t>(o.leaf_cap));
  row.push_back(static_cast<std::int64_t>(o.seed));
}

template <typename Scalar>
int cmd_build(const Options& o) {
  const Problem<Scalar> p = make_problem<Scalar>(o);
  const Setup s = make_setup(o, p.dim);
  double tc = 0.0;
  const HMatrix<Scalar> h = obtain(o, p, s, tc);
  if (!o.save.empty()) save_file(h, o.save);
  const StorageReport st = storage_report(h);
  const BoundValues b = error_bound(bound_inputs(h, far_tol(s), p.dim), h.structure);
  ExperimentReport rep;
  rep.name = "build";
  rep.columns = {"n",        "levels",      "max_rank",  "t_constr",  "smash_MB",
                 "hss0_MB",  "storage_A_MB", "bound_cor", "bound_lvl", "fro_error"};
  std::vector<Cell> row{std::int64_t{h.rows()},   std::int64_t{h.tree->levels},   std::int64_t{h.max_rank()},
                        tc,                       st.compressed_bytes / kMB,      st.dense_generator_bytes / kMB,
                        st.dense_bytes / kMB,     b.corollary,                    b.level_resolved};
  std::optional<double> fro;
  if (o.check && h.rows() * h.cols() <= o.dense_budget) {
    const Matrix<Scalar> A = assemble_dense(*p.kernel, o.dense_budget);
    fro = (A - h.reconstruct(o.dense_budget)).norm() / A.norm();
  }
  row.push_back(fro ? Cell{*fro} : Cell{});
  echo_params(rep, row, o, s);
  rep.add_row(std::move(row));
  emit(rep, o);
  if (fro && *fro > b.level_resolved)
    throw NumericalError("measured error " + std::to_string(*fro) + " exceeds the error bound");
  return 0;
}

template <typename Scalar>
Vector<Scalar> input_vector(const Options& o, Index n, std::mt19937_64& rng) {
  const VectorFormat fmt = o.format == "binary" ? VectorFormat::binary : VectorFormat::text;
  require(o.format == "binary" || o.format == "text", "unknown vector format '" + o.format + "'");
  if (!o.input.empty()) {
    Vector<Scalar> v = read_vector_file<Scalar>(o.input, fmt);
    require(v.size() == n, "input vector has length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
    return v;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector<Scalar> v(n);
  for (Index i = 0; i < n; ++i) v(i) = Scalar(u(rng));
  return v;
}

template <typename Scalar>
void write_result(const Options& o, const Vector<Scalar>& v) {
  if (o.result.empty()) return;
  write_vector_file(o.result, v, o.format == "binary" ? VectorFormat::binary : VectorFormat::text);
}

template <typename Scalar>
int cmd_matvec(const Options& o) {
  const Problem<Scalar> p = make_problem<Scalar>(o);
  const Setup s = make_setup(o, p.dim);
  double tc = 0.0;
  HMatrix<Scalar> h = obtain(o, p, s, tc);
  h.materialize();
  std::mt19937_64 rng(o.seed ^ 0x5eedULL);
  const Vector<Scalar> q = input_vector<Scalar>(o, h.cols(), rng);
  Vector<Scalar> z;
  const double tm = median_seconds([&] { z = h.matvec(q); }, 3);
  write_result(o, z);
  ExperimentReport rep;
  rep.name = "matvec";
  rep.columns = {"n", "t_constr", "t_matvec", "relerr"};
  std::vector<Cell> row{std::int64_t{h.rows()}, tc, tm};
  if (o.no_check) row.push_back(Cell{});
  else row.push_back((z - kernel_matvec(*p.kernel, q)).norm() / kernel_matvec(*p.kernel, q).norm());
  echo_params(rep, row, o, s);
  rep.add_row(std::move(row));
  emit(rep, o);
  return 0;
}

template <typename Scalar>
int cmd_solve(const Options& o) {
  require(o.structure == "hss", "solve requires --structure hss");
  const Problem<Scalar> p = make_problem<Scalar>(o);
  const Setup s = make_setup(o, p.dim);
  double tc = 0.0;
  const HMatrix<Scalar> h = obtain(o, p, s, tc);
  require(h.rows() == h.cols(), "solve requires a square matrix");
  std::mt19937_64 rng(o.seed ^ 0x5eedULL);
  std::optional<Vector<Scalar>> exact;
  Vector<Scalar> b;
  if (!o.input.empty()) {
    b = input_vector<Scalar>(o, h.rows(), rng);
  } else if (p.dirichlet) {
    if constexpr (std::is_same_v<Scalar, double>) b = dirichlet_rhs(*p.dirichlet);
  } else {
    exact = input_vector<Scalar>(o, h.cols(), rng);
    b = kernel_matvec(*p.kernel, *exact);
  }
  Vector<Scalar> x;
  const double ts = median_seconds([&] { x = ulv_solve(ulv_factor(h), b); }, 1);
  write_result(o, x);
  std::optional<double> res;
  if (!o.no_check) res = (kernel_matvec(*p.kernel, x) - b).norm() / b.norm();
  ExperimentReport rep;
  rep.name = "solve";
  rep.columns = {"n", "t_constr", "t_sol", "residual", "forward_error", "point_error"};
  std::vector<Cell> row{std::int64_t{h.rows()}, tc, ts, res ? Cell{*res} : Cell{}};
  row.push_back(exact ? Cell{(x - *exact).norm() / exact->norm()} : Cell{});
  Cell point;
  if constexpr (std::is_same_v<Scalar, double>) {
    if (p.dirichlet && o.input.empty()) {
      const DirichletProblem& d = *p.dirichlet;
      point = std::abs(evaluate_potential(d.curve, x, d.xstar) - exact_solution(d, d.xstar));
    }
  }
  row.push_back(point);
  echo_params(rep, row, o, s);
  rep.add_row(std::move(row));
  emit(rep, o);
  if (o.max_residual && res && *res > *o.max_residual)
    throw NumericalError("residual " + std::to_string(*res) + " exceeds " + std::to_string(*o.max_residual));
  return 0;
}

int cmd_experiment(const Options& o) {
  ExperimentConfig c;
  c.name = o.experiment;
  c.sizes = o.sizes;
  for (const auto& g : o.geometries) c.geometries.push_back(parse_geometry(g));
  c.tol = o.tol;
  c.leaf_cap = o.leaf_cap;
  c.tau = o.tau;
  c.order = o.order;
  c.svd_tol = o.svd_tol;
  if (o.expansion) c.expansion = parse_expansion(*o.expansion);
  c.seed = o.seed;
  c.dense_budget = o.dense_budget;
  c.repeats = o.repeats;
  c.eps_list = o.eps;
  c.oracles = !o.no_oracles;
  c.condition_numbers = o.cond;
  c.concurrent = o.concurrent;
  emit(run_experiment(c), o);
  return 0;
}

/// Real arithmetic for line problems and the Laplace kernel, complex otherwise.
bool complex_problem(const Options& o) {
  if (o.kernel == "laplace-dlp") return false;
  if (!o.points.empty()) return read_points_file(o.points).dim() == 2;
  return !geometry_is_real(parse_geometry(o.geometry));
}

template <template <typename> class F>
int dispatch(const Options& o) {
  return complex_problem(o) ? F<complex>::run(o) : F<double>::run(o);
}

template <typename S>
struct Build {
  static int run(const Options& o) { return cmd_build<S>(o); }
};
template <typename S>
struct Matvec {
  static int run(const Options& o) { return cmd_matvec<S>(o); }
};
template <typename S>
struct Solve {
  static int run(const Options& o) { return cmd_solve<S>(o); }
};

void problem_flags(CLI::App* sub, Options& o) {
  sub->add_option("--kernel", o.kernel, "cauchy, cauchy-like or laplace-dlp")
      ->check(CLI::IsMember({"cauchy", "cauchy-like", "laplace-dlp"}));
  sub->add_option("--geometry", o.geometry, "interval, grid2d, ramhead, sunflower, honeybee, snail or circle");
  sub->add_option("--n", o.n, "problem size")->check(CLI::PositiveNumber);
  sub->add_option("--points", o.points, "point file (one point per line), used as both X and Y");
  sub->add_option("--structure", o.structure, "hss or h2")->check(CLI::IsMember({"hss", "h2"}));
  sub->add_option("--diagonal", o.diagonal, "diagonal value of the cauchy kernel where x = y");
  sub->add_option("--generators", o.generators, "random generator columns for cauchy-like");
  sub->add_option("--w", o.w_file, "CSV of row generators w for cauchy-like");
  sub->add_option("--v", o.v_file, "CSV of column generators v for cauchy-like");
}

void param_flags(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "target accuracy driving tau, order and svd tolerance");
  sub->add_option("--leaf-cap", o.leaf_cap, "maximum points per leaf")->check(CLI::PositiveNumber);
  sub->add_option("--tau", o.tau, "separation ratio");
  sub->add_option("--order", o.order, "expansion order r");
  sub->add_option("--svd-tol", o.svd_tol, "relative nearfield SVD tolerance");
  sub->add_option("--expansion", o.expansion, "taylor or chebyshev")->check(CLI::IsMember({"taylor", "chebyshev"}));
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--dense-budget", o.dense_budget, "largest dense oracle in entries");
  sub->add_option("--out", o.out, "report path (CSV unless --json)");
  sub->add_flag("--json", o.json, "write the report as JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical kernel matrix construction, matvec and solve"};
  app.require_subcommand(1);
  Options o;

  auto* b = app.add_subcommand("build", "build a hierarchical matrix and report ranks, storage and bounds");
  problem_flags(b, o);
  param_flags(b, o);
  b->add_option("--save", o.save, "write the matrix container");
  b->add_flag("--check", o.check, "measure the Frobenius error against the dense matrix");

  auto* m = app.add_subcommand("matvec", "multiply by a vector");
  auto* s = app.add_subcommand("solve", "solve with an HSS matrix by ULV factorization");
  for (auto* sub : {m, s}) {
    problem_flags(sub, o);
    param_flags(sub, o);
    sub->add_option("--load", o.load, "read a matrix container instead of building");
    sub->add_option("--input", o.input, "input vector file (random when absent)");
    sub->add_option("--result", o.result, "write the output vector");
    sub->add_option("--format", o.format, "vector file format")->check(CLI::IsMember({"text", "binary"}));
    sub->add_flag("--no-check", o.no_check, "skip the exact-kernel comparison");
  }
  s->add_option("--max-residual", o.max_residual, "fail with exit code 3 above this relative residual");

  auto* e = app.add_subcommand("experiment", "run a named experiment");
  e->add_option("name", o.experiment, "experiment name")->required()->check(CLI::IsMember(experiment_names()));
  e->add_option("--geometry", o.geometries, "geometries to run")->delimiter(',');
  e->add_option("--sizes,--n", o.sizes, "problem sizes")->delimiter(',');
  e->add_option("--eps", o.eps, "accuracy list for rank_study and storage_study")->delimiter(',');
  e->add_option("--repeats", o.repeats, "timing repetitions")->check(CLI::PositiveNumber);
  e->add_flag("--no-oracles", o.no_oracles, "skip O(n^2) oracle columns");
  e->add_flag("--cond", o.cond, "condition numbers by dense SVD within the budget");
  e->add_flag("--concurrent", o.concurrent, "run independent configurations concurrently");
  param_flags(e, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitValidation;
  }

  try {
    if (*b) return dispatch<Build>(o);
    if (*m) return dispatch<Matvec>(o);
    if (*s) return dispatch<Solve>(o);
    return cmd_experiment(o);
  } catch (const ValidationError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kExitNumerical;
  }
}
