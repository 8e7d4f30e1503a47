#ifndef SMASH_NYSTROM_HPP
#define SMASH_NYSTROM_HPP

#include "smash/kernel.hpp"

namespace smash {

/// Interior Dirichlet problem with exact solution u(x) = log|x − x0|.
struct DirichletProblem {
  CurveSpec curve;
  Vec2 x0{2.0, 1.5};
  Vec2 xstar{0.1, 0.1};
  Index n = 640;

  static DirichletProblem ramhead(Index n);
  static DirichletProblem sunflower(Index n);
};

struct NystromSystem {
  MatrixXd matrix;
  VectorXd rhs;
  VectorXd nodes;
};

/// Validates the problem geometry and returns the rhs u_D(r(t_i)).
VectorXd dirichlet_rhs(const DirichletProblem& problem);

/// Dense K − ½I, rhs and nodes t_j = j/n.
NystromSystem nystrom_system(const DirichletProblem& problem, Index budget = kDefaultDenseBudget);

/// (1/n) Σ_j κ_x(t_j) σ_j for an interior point x.
double evaluate_potential(const CurveSpec& curve, const VectorXd& sigma, const Vec2& x);

inline double exact_solution(const DirichletProblem& p, const Vec2& x) { return std::log((x - p.x0).norm()); }

}  // namespace smash

#endif
