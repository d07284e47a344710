#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "repday/lp.hpp"

namespace repday::lp {

VerificationReport verify_optimality(const LinearProgram& lp, const LpSolution& solution) {
  if (solution.status != SolveStatus::Optimal) {
    throw std::invalid_argument("verify_optimality requires an Optimal solution");
  }
  const int n = lp.n_variables();
  const int m = lp.n_constraints();
  if (static_cast<int>(solution.primal.size()) != n ||
      static_cast<int>(solution.duals.size()) != m) {
    throw std::invalid_argument("verify_optimality: solution does not match the program");
  }

  VerificationReport rep;
  rep.primal_objective = lp.objective_value(solution.primal);

  // Primal feasibility and the y'b part of the dual objective.
  double dual_obj = 0.0;
  std::vector<double> yta(static_cast<size_t>(n), 0.0);  // A'y, built row by row
  for (int i = 0; i < m; ++i) {
    const Constraint& c = lp.constraint(i);
    const double y = solution.duals[static_cast<size_t>(i)];
    double activity = 0.0;
    for (const auto& [j, a] : c.terms) {
      activity += a * solution.primal[static_cast<size_t>(j)];
      yta[static_cast<size_t>(j)] += a * y;
    }
    double violation = 0.0;
    double slack = 0.0;
    double sign_violation = 0.0;
    switch (c.sense) {
      case Sense::LessEqual:
        violation = std::max(0.0, activity - c.rhs);
        slack = std::max(0.0, c.rhs - activity);
        sign_violation = std::max(0.0, y);  // minimization: y <= 0 on <= rows
        break;
      case Sense::Equal:
        violation = std::abs(activity - c.rhs);
        slack = 0.0;
        sign_violation = 0.0;
        break;
      case Sense::GreaterEqual:
        violation = std::max(0.0, c.rhs - activity);
        slack = std::max(0.0, activity - c.rhs);
        sign_violation = std::max(0.0, -y);  // minimization: y >= 0 on >= rows
        break;
    }
    rep.max_row_violation = std::max(rep.max_row_violation, violation);
    rep.max_dual_violation = std::max(rep.max_dual_violation, sign_violation);
    rep.max_complementarity = std::max(rep.max_complementarity, std::abs(y) * slack);
    dual_obj += y * c.rhs;
  }

  // Bound feasibility, reduced-cost sign feasibility, complementary slackness,
  // and the bound term of the dual objective.
  for (int j = 0; j < n; ++j) {
    const Variable& v = lp.variable(j);
    const double x = solution.primal[static_cast<size_t>(j)];
    rep.max_bound_violation =
        std::max({rep.max_bound_violation, v.lower - x, x - v.upper});
    const double d = v.cost - yta[static_cast<size_t>(j)];
    if (d > 0.0) {
      // Positive reduced cost must be supported by a finite lower bound.
      if (v.lower == -kInfinity) {
        rep.max_dual_violation = std::max(rep.max_dual_violation, d);
      } else {
        rep.max_complementarity = std::max(rep.max_complementarity, d * std::abs(x - v.lower));
        dual_obj += d * v.lower;
      }
    } else if (d < 0.0) {
      if (v.upper == kInfinity) {
        rep.max_dual_violation = std::max(rep.max_dual_violation, -d);
      } else {
        rep.max_complementarity = std::max(rep.max_complementarity, -d * std::abs(v.upper - x));
        dual_obj += d * v.upper;
      }
    }
  }
  rep.max_bound_violation = std::max(rep.max_bound_violation, 0.0);

  rep.dual_objective = dual_obj;
  rep.relative_gap =
      std::abs(rep.primal_objective - dual_obj) / (1.0 + std::abs(rep.primal_objective));
  return rep;
}

}  // namespace repday::lp
