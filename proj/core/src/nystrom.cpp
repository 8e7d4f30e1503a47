#include "smash/nystrom.hpp"

#include <cmath>

namespace smash {

DirichletProblem DirichletProblem::ramhead(Index n) {
  return {CurveSpec{CurveId::ramhead}, Vec2(2.0, 1.5), Vec2(0.1, 0.1), n};
}

DirichletProblem DirichletProblem::sunflower(Index n) {
  return {CurveSpec{CurveId::sunflower}, Vec2(2.0, 1.5), Vec2(1.5, 0.0), n};
}

VectorXd dirichlet_rhs(const DirichletProblem& p) {
  require(p.curve.closed(), "nystrom_system: curve must be closed");
  require(p.n >= 1, "nystrom_system: n must be positive");
  require(winding_number(p.curve, p.x0) == 0, "nystrom_system: x0 must lie outside the curve");
  VectorXd rhs(p.n);
  for (Index i = 0; i < p.n; ++i)
    rhs(i) = std::log((p.curve.point(double(i) / double(p.n)) - p.x0).norm());
  return rhs;
}

NystromSystem nystrom_system(const DirichletProblem& p, Index budget) {
  NystromSystem out;
  out.rhs = dirichlet_rhs(p);
  out.matrix = assemble_dense(LaplaceDlpKernel(p.curve, p.n), budget);
  out.nodes.resize(p.n);
  for (Index j = 0; j < p.n; ++j) out.nodes(j) = double(j) / double(p.n);
  return out;
}

double evaluate_potential(const CurveSpec& curve, const VectorXd& sigma, const Vec2& x) {
  require(curve.closed(), "evaluate_potential: curve must be closed");
  require(winding_number(curve, x) != 0, "evaluate_potential: point is not inside the curve");
  const Index n = sigma.size();
  require(n > 0, "evaluate_potential: empty density");
  double sum = 0.0;
  for (Index j = 0; j < n; ++j) sum += LaplaceDlpKernel::kappa_at(curve, x, double(j) / double(n)) * sigma(j);
  return sum / double(n);
}

}  // namespace smash
