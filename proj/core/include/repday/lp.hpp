#ifndef REPDAY_LP_HPP
#define REPDAY_LP_HPP

#include <iosfwd>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace repday::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class SolveStatus { Optimal, Infeasible, Unbounded };

class InvalidLpError : public std::runtime_error {
 public:
  explicit InvalidLpError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when no pivot above the pivot tolerance exists and no refactor
/// recovers one; the instance needs rescaling.
class NumericalBreakdown : public std::runtime_error {
 public:
  explicit NumericalBreakdown(const std::string& what) : std::runtime_error(what) {}
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;  // objective coefficient, minimization
};

struct Constraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// Sparse minimization LP: min c'x subject to row senses and variable box
/// bounds. Rows and columns are identified by insertion index.
class LinearProgram {
 public:
  int add_variable(const std::string& name, double lower, double upper, double cost = 0.0);
  void set_cost(int variable, double cost);

  /// Terms referencing the same variable twice are summed. Every index must
  /// name a declared variable.
  int add_constraint(const std::string& name, std::vector<std::pair<int, double>> terms,
                     Sense sense, double rhs);

  int n_variables() const { return static_cast<int>(variables_.size()); }
  int n_constraints() const { return static_cast<int>(constraints_.size()); }
  const Variable& variable(int i) const { return variables_[static_cast<size_t>(i)]; }
  const Constraint& constraint(int i) const { return constraints_[static_cast<size_t>(i)]; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  double objective_value(const std::vector<double>& x) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
};

struct LpSolution {
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;          // +inf if infeasible, -inf if unbounded
  std::vector<double> primal;      // per variable (empty unless Optimal)
  std::vector<double> duals;       // per constraint (empty unless Optimal)

  // Diagnostics.
  long iterations = 0;
  long phase1_iterations = 0;
};

struct SolverOptions {
  double feasibility_tol = 1e-7;  // absolute, per row after row scaling
  double optimality_tol = 1e-9;   // reduced-cost threshold
  double pivot_tol = 1e-11;       // smallest acceptable pivot magnitude
  long max_iterations = 0;        // 0 = automatic from problem size
  int refactor_interval = 64;     // basis refactorizations cadence
  bool scale = true;              // powers-of-two equilibration
};

/// Pluggable solver interface; the pipeline depends only on this.
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual LpSolution solve(const LinearProgram& lp) const = 0;
  virtual std::string name() const = 0;
};

/// Bundled two-phase bounded-variable revised simplex (sparse LU + product-
/// form updates, Dantzig pricing with Bland fallback). Deterministic.
class SimplexBackend final : public LpBackend {
 public:
  explicit SimplexBackend(SolverOptions options = {}) : options_(options) {}
  LpSolution solve(const LinearProgram& lp) const override;
  std::string name() const override { return "bounded-simplex"; }

 private:
  SolverOptions options_;
};

/// Convenience: solve with the bundled backend.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

/// Independent optimality check, computed from the original (unscaled) data:
/// row and bound feasibility, dual sign feasibility combined with
/// complementary slackness, and the Lagrangian duality gap.
struct VerificationReport {
  double max_row_violation = 0.0;       // |a'x - b| past the sense, absolute
  double max_bound_violation = 0.0;     // distance outside [l, u]
  double max_dual_violation = 0.0;      // wrong-signed reduced cost / row dual
  double max_complementarity = 0.0;     // |y_i| * slack_i and |d_j| * (gap to bound)
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;            // |primal - dual| / (1 + |primal|)

  bool ok(double tol = 1e-6) const {
    return max_row_violation <= tol && max_bound_violation <= tol && max_dual_violation <= tol &&
           max_complementarity <= tol && relative_gap <= tol;
  }
};

VerificationReport verify_optimality(const LinearProgram& lp, const LpSolution& solution);

/// Fixed-format MPS export for cross-checking against external solvers.
void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& problem_name = "LP");
void write_mps(const LinearProgram& lp, const std::string& path,
               const std::string& problem_name = "LP");

}  // namespace repday::lp

#endif  // REPDAY_LP_HPP
