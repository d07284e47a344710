#include "repday/lp.hpp"

#include <algorithm>
#include <cmath>

namespace repday::lp {

int LinearProgram::add_variable(const std::string& name, double lower, double upper, double cost) {
  if (std::isnan(lower) || std::isnan(upper) || std::isnan(cost)) {
    throw InvalidLpError("variable '" + name + "' has NaN data");
  }
  if (!(lower <= upper)) {
    throw InvalidLpError("variable '" + name + "' has lower > upper");
  }
  if (lower == kInfinity || upper == -kInfinity) {
    throw InvalidLpError("variable '" + name + "' has an empty domain");
  }
  variables_.push_back({name, lower, upper, cost});
  return static_cast<int>(variables_.size()) - 1;
}

void LinearProgram::set_cost(int variable, double cost) {
  if (variable < 0 || variable >= n_variables()) {
    throw InvalidLpError("set_cost: variable index out of range");
  }
  if (std::isnan(cost)) throw InvalidLpError("set_cost: NaN");
  variables_[static_cast<size_t>(variable)].cost = cost;
}

int LinearProgram::add_constraint(const std::string& name,
                                  std::vector<std::pair<int, double>> terms, Sense sense,
                                  double rhs) {
  if (std::isnan(rhs)) throw InvalidLpError("constraint '" + name + "' has NaN rhs");
  for (const auto& [v, coeff] : terms) {
    if (v < 0 || v >= n_variables()) {
      throw InvalidLpError("constraint '" + name + "' references undeclared variable");
    }
    if (std::isnan(coeff) || std::isinf(coeff)) {
      throw InvalidLpError("constraint '" + name + "' has non-finite coefficient");
    }
  }
  // Merge duplicate variable references deterministically.
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, double>> merged;
  merged.reserve(terms.size());
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().first == t.first) {
      merged.back().second += t.second;
    } else {
      merged.push_back(t);
    }
  }
  constraints_.push_back({name, std::move(merged), sense, rhs});
  return static_cast<int>(constraints_.size()) - 1;
}

double LinearProgram::objective_value(const std::vector<double>& x) const {
  double obj = 0.0;
  for (size_t j = 0; j < variables_.size(); ++j) obj += variables_[j].cost * x[j];
  return obj;
}

LpSolution solve(const LinearProgram& lp, const SolverOptions& options) {
  return SimplexBackend(options).solve(lp);
}

}  // namespace repday::lp
