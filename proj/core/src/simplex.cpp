#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "repday/lp.hpp"

namespace repday::lp {
namespace {

constexpr double kInf = kInfinity;

size_t uz(int i) { return static_cast<size_t>(i); }

// ---------------------------------------------------------------------------
// Column-wise sparse storage of the structural constraint matrix.
// ---------------------------------------------------------------------------
struct Csc {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> start;  // n_cols + 1
  std::vector<int> row;
  std::vector<double> val;
};

Csc build_csc(const LinearProgram& lp) {
  Csc a;
  a.n_rows = lp.n_constraints();
  a.n_cols = lp.n_variables();
  std::vector<int> count(uz(a.n_cols), 0);
  for (const Constraint& c : lp.constraints()) {
    for (const auto& [v, coeff] : c.terms) {
      if (coeff != 0.0) count[uz(v)] += 1;
    }
  }
  a.start.assign(uz(a.n_cols) + 1, 0);
  for (int j = 0; j < a.n_cols; ++j) a.start[uz(j) + 1] = a.start[uz(j)] + count[uz(j)];
  a.row.resize(uz(a.start.back()));
  a.val.resize(uz(a.start.back()));
  std::vector<int> next(a.start.begin(), a.start.end() - 1);
  for (int i = 0; i < a.n_rows; ++i) {
    for (const auto& [v, coeff] : lp.constraint(i).terms) {
      if (coeff == 0.0) continue;
      const int slot = next[uz(v)]++;
      a.row[uz(slot)] = i;
      a.val[uz(slot)] = coeff;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Geometric-mean equilibration restricted to powers of two, so scaling never
// perturbs mantissas. Two row/column rounds are enough for this model family.
// ---------------------------------------------------------------------------
void equilibrate(Csc& a, std::vector<double>& row_scale, std::vector<double>& col_scale) {
  row_scale.assign(uz(a.n_rows), 1.0);
  col_scale.assign(uz(a.n_cols), 1.0);
  if (a.val.empty()) return;

  const auto pow2_mid = [](double lo_mag, double hi_mag) {
    const int e = (std::ilogb(lo_mag) + std::ilogb(hi_mag)) / 2;
    return std::ldexp(1.0, -e);
  };

  std::vector<double> delta_row(uz(a.n_rows));
  std::vector<double> delta_col(uz(a.n_cols));
  for (int round = 0; round < 2; ++round) {
    // Row sweep.
    std::vector<double> lo(uz(a.n_rows), kInf), hi(uz(a.n_rows), 0.0);
    for (size_t p = 0; p < a.val.size(); ++p) {
      const double m = std::abs(a.val[p]);
      if (m == 0.0) continue;
      const size_t r = uz(a.row[p]);
      lo[r] = std::min(lo[r], m);
      hi[r] = std::max(hi[r], m);
    }
    for (int i = 0; i < a.n_rows; ++i) {
      delta_row[uz(i)] = hi[uz(i)] == 0.0 ? 1.0 : pow2_mid(lo[uz(i)], hi[uz(i)]);
      row_scale[uz(i)] *= delta_row[uz(i)];
    }
    for (size_t p = 0; p < a.val.size(); ++p) a.val[p] *= delta_row[uz(a.row[p])];

    // Column sweep.
    for (int j = 0; j < a.n_cols; ++j) {
      double clo = kInf, chi = 0.0;
      for (int p = a.start[uz(j)]; p < a.start[uz(j) + 1]; ++p) {
        const double m = std::abs(a.val[uz(p)]);
        if (m == 0.0) continue;
        clo = std::min(clo, m);
        chi = std::max(chi, m);
      }
      delta_col[uz(j)] = chi == 0.0 ? 1.0 : pow2_mid(clo, chi);
      col_scale[uz(j)] *= delta_col[uz(j)];
      for (int p = a.start[uz(j)]; p < a.start[uz(j) + 1]; ++p) a.val[uz(p)] *= delta_col[uz(j)];
    }
  }
}

// ---------------------------------------------------------------------------
// Basis factorization: sparse LU (Gilbert-Peierls column elimination with
// symbolic DFS and partial pivoting) plus product-form eta updates.
//
// Index spaces: "rows" are constraint indices; "positions" are basis slots
// (columns of the basis matrix); "steps" are elimination order. ftran maps a
// row-indexed right-hand side to a position-indexed solution of B t = rhs;
// btran maps a position-indexed cost vector to the row-indexed solution of
// B' y = c. Etas live in position space.
// ---------------------------------------------------------------------------
class BasisFactor {
 public:
  bool factorize(int m, const std::vector<std::vector<std::pair<int, double>>>& cols,
                 double pivot_tol) {
    m_ = m;
    etas_.clear();
    rperm_.assign(uz(m), -1);
    cperm_.assign(uz(m), -1);
    step_of_row_.assign(uz(m), -1);
    Lstart_.assign(1, 0);
    Lrow_.clear();
    Lval_.clear();
    Ustart_.assign(1, 0);
    Ustep_.clear();
    Uval_.clear();
    Udiag_.assign(uz(m), 0.0);
    work_.assign(uz(m), 0.0);
    visited_.assign(uz(m), false);
    scratch_.assign(uz(m), 0.0);

    // Eliminate sparser columns first; deterministic tie-break by position.
    std::vector<int> order(uz(m));
    for (int p = 0; p < m; ++p) order[uz(p)] = p;
    std::stable_sort(order.begin(), order.end(), [&cols](int x, int y) {
      return cols[uz(x)].size() < cols[uz(y)].size();
    });

    std::vector<int> topo;
    std::vector<std::pair<int, int>> stack;  // (row node, next edge)
    for (int k = 0; k < m; ++k) {
      const int position = order[uz(k)];
      const auto& col = cols[uz(position)];

      // Symbolic: reachable set of the column pattern through L, postorder.
      topo.clear();
      for (const auto& [r0, v0] : col) {
        if (visited_[uz(r0)]) continue;
        visited_[uz(r0)] = true;
        stack.emplace_back(r0, 0);
        while (!stack.empty()) {
          auto& [r, e] = stack.back();
          const int s = step_of_row_[uz(r)];
          const int lbeg = s < 0 ? 0 : Lstart_[uz(s)];
          const int lend = s < 0 ? 0 : Lstart_[uz(s) + 1];
          if (lbeg + e < lend) {
            const int child = Lrow_[uz(lbeg + e)];
            ++e;
            if (!visited_[uz(child)]) {
              visited_[uz(child)] = true;
              stack.emplace_back(child, 0);
            }
          } else {
            topo.push_back(r);
            stack.pop_back();
          }
        }
      }

      // Numeric: scatter, then eliminate ancestors-first (reverse postorder).
      for (const auto& [r, v] : col) work_[uz(r)] += v;
      for (size_t idx = topo.size(); idx-- > 0;) {
        const int r = topo[idx];
        const int s = step_of_row_[uz(r)];
        if (s < 0) continue;
        const double xr = work_[uz(r)];
        if (xr == 0.0) continue;
        for (int p = Lstart_[uz(s)]; p < Lstart_[uz(s) + 1]; ++p) {
          work_[uz(Lrow_[uz(p)])] -= xr * Lval_[uz(p)];
        }
      }

      // Partial pivoting over not-yet-pivoted rows; ties to the lowest row.
      int pivot_row = -1;
      double pivot_mag = 0.0;
      for (const int r : topo) {
        if (step_of_row_[uz(r)] >= 0) continue;
        const double mag = std::abs(work_[uz(r)]);
        if (mag > pivot_mag || (mag == pivot_mag && pivot_row >= 0 && r < pivot_row)) {
          pivot_mag = mag;
          pivot_row = r;
        }
      }
      if (pivot_row < 0 || pivot_mag < pivot_tol) {
        for (const int r : topo) {
          work_[uz(r)] = 0.0;
          visited_[uz(r)] = false;
        }
        return false;  // numerically singular basis
      }
      const double pivot = work_[uz(pivot_row)];

      for (const int r : topo) {
        const int s = step_of_row_[uz(r)];
        const double v = work_[uz(r)];
        if (s >= 0) {
          if (v != 0.0) {
            Ustep_.push_back(s);
            Uval_.push_back(v);
          }
        } else if (r != pivot_row && v != 0.0) {
          Lrow_.push_back(r);
          Lval_.push_back(v / pivot);
        }
        work_[uz(r)] = 0.0;
        visited_[uz(r)] = false;
      }
      Lstart_.push_back(static_cast<int>(Lrow_.size()));
      Ustart_.push_back(static_cast<int>(Ustep_.size()));
      Udiag_[uz(k)] = pivot;
      rperm_[uz(k)] = pivot_row;
      cperm_[uz(k)] = position;
      step_of_row_[uz(pivot_row)] = k;
    }
    return true;
  }

  // Solve B t = rhs. Input row-indexed, output position-indexed, in place.
  void ftran(std::vector<double>& x) const {
    for (int k = 0; k < m_; ++k) {
      const double xr = x[uz(rperm_[uz(k)])];
      if (xr == 0.0) continue;
      for (int p = Lstart_[uz(k)]; p < Lstart_[uz(k) + 1]; ++p) {
        x[uz(Lrow_[uz(p)])] -= xr * Lval_[uz(p)];
      }
    }
    for (int k = m_; k-- > 0;) {
      const double yk = x[uz(rperm_[uz(k)])] / Udiag_[uz(k)];
      x[uz(rperm_[uz(k)])] = yk;
      if (yk == 0.0) continue;
      for (int p = Ustart_[uz(k)]; p < Ustart_[uz(k) + 1]; ++p) {
        x[uz(rperm_[uz(Ustep_[uz(p)])])] -= yk * Uval_[uz(p)];
      }
    }
    for (int k = 0; k < m_; ++k) scratch_[uz(cperm_[uz(k)])] = x[uz(rperm_[uz(k)])];
    x = scratch_;
    for (const Eta& e : etas_) {
      const double tp = x[uz(e.pos)] / e.diag;
      x[uz(e.pos)] = tp;
      if (tp == 0.0) continue;
      for (const auto& [i, v] : e.col) x[uz(i)] -= v * tp;
    }
  }

  // Solve B' y = c. Input position-indexed, output row-indexed, in place.
  void btran(std::vector<double>& x) const {
    for (size_t en = etas_.size(); en-- > 0;) {
      const Eta& e = etas_[en];
      double acc = x[uz(e.pos)];
      for (const auto& [i, v] : e.col) acc -= v * x[uz(i)];
      x[uz(e.pos)] = acc / e.diag;
    }
    for (int k = 0; k < m_; ++k) {
      double acc = x[uz(cperm_[uz(k)])];
      for (int p = Ustart_[uz(k)]; p < Ustart_[uz(k) + 1]; ++p) {
        acc -= Uval_[uz(p)] * scratch_[uz(Ustep_[uz(p)])];
      }
      scratch_[uz(k)] = acc / Udiag_[uz(k)];
    }
    for (int k = m_; k-- > 0;) {
      double acc = scratch_[uz(k)];
      for (int p = Lstart_[uz(k)]; p < Lstart_[uz(k) + 1]; ++p) {
        acc -= Lval_[uz(p)] * scratch_[uz(step_of_row_[uz(Lrow_[uz(p)])])];
      }
      scratch_[uz(k)] = acc;
    }
    for (int k = 0; k < m_; ++k) x[uz(rperm_[uz(k)])] = scratch_[uz(k)];
  }

  void push_eta(int pos, const std::vector<double>& t_dense) {
    Eta e;
    e.pos = pos;
    e.diag = t_dense[uz(pos)];
    for (int i = 0; i < m_; ++i) {
      if (i != pos && t_dense[uz(i)] != 0.0) e.col.emplace_back(i, t_dense[uz(i)]);
    }
    etas_.push_back(std::move(e));
  }

  int eta_count() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int pos = 0;
    double diag = 1.0;
    std::vector<std::pair<int, double>> col;  // off-diagonal entries
  };

  int m_ = 0;
  std::vector<int> rperm_, cperm_, step_of_row_;
  std::vector<int> Lstart_, Lrow_;
  std::vector<double> Lval_;
  std::vector<int> Ustart_, Ustep_;
  std::vector<double> Uval_;
  std::vector<double> Udiag_;
  std::vector<Eta> etas_;
  mutable std::vector<double> work_, scratch_;
  mutable std::vector<bool> visited_;
};

// ---------------------------------------------------------------------------
// Two-phase bounded-variable revised simplex.
// ---------------------------------------------------------------------------
enum class VState : unsigned char { Basic, AtLower, AtUpper };

class SimplexEngine {
 public:
  SimplexEngine(const LinearProgram& lp, const SolverOptions& opt) : lp_(lp), opt_(opt) {}

  LpSolution run() {
    if (lp_.n_constraints() == 0) return solve_unconstrained();
    setup();
    initial_basis();
    factorize_or_throw();
    recompute_x();

    if (!ar_row_.empty()) {
      cost_ = &cost1_;
      const PhaseEnd p1 = phase_loop(/*phase1=*/true);
      (void)p1;  // phase 1 cannot be unbounded; Stall throws inside
      double infeas = 0.0;
      for (size_t k = 0; k < ar_row_.size(); ++k) infeas += x_[uz(first_artificial_) + k];
      double bmax = 0.0;
      for (double v : b_) bmax = std::max(bmax, std::abs(v));
      if (infeas > opt_.feasibility_tol * (1.0 + bmax)) {
        LpSolution out;
        out.status = SolveStatus::Infeasible;
        out.objective = kInf;
        out.iterations = iters_;
        out.phase1_iterations = phase1_iters_;
        return out;
      }
      expel_artificials();
    }

    cost_ = &cost2_;
    factorize_or_throw();
    recompute_x();
    const PhaseEnd p2 = phase_loop(/*phase1=*/false);
    if (p2 == PhaseEnd::Unbounded) {
      LpSolution out;
      out.status = SolveStatus::Unbounded;
      out.objective = -kInf;
      out.iterations = iters_;
      out.phase1_iterations = phase1_iters_;
      return out;
    }
    return extract();
  }

 private:
  enum class PhaseEnd { Optimal, Unbounded };
  enum class MoveKind { Pivot, Flip, Unbounded, Stall };
  struct Move {
    MoveKind kind = MoveKind::Stall;
    int pos = -1;       // leaving basis position (Pivot)
    double theta = 0.0;
    bool to_upper = false;  // leaving variable lands on its upper bound
  };

  // --- construction -------------------------------------------------------
  void setup() {
    m_ = lp_.n_constraints();
    ns_ = lp_.n_variables();
    ntot_ = ns_ + m_;
    A_ = build_csc(lp_);
    if (opt_.scale) {
      equilibrate(A_, row_scale_, col_scale_);
    } else {
      row_scale_.assign(uz(m_), 1.0);
      col_scale_.assign(uz(ns_), 1.0);
    }

    b_.resize(uz(m_));
    for (int i = 0; i < m_; ++i) b_[uz(i)] = lp_.constraint(i).rhs * row_scale_[uz(i)];

    lb_.assign(uz(ntot_), 0.0);
    ub_.assign(uz(ntot_), 0.0);
    cost2_.assign(uz(ntot_), 0.0);
    for (int j = 0; j < ns_; ++j) {
      const Variable& v = lp_.variable(j);
      lb_[uz(j)] = v.lower / col_scale_[uz(j)];
      ub_[uz(j)] = v.upper / col_scale_[uz(j)];
      cost2_[uz(j)] = v.cost * col_scale_[uz(j)];
    }
    for (int i = 0; i < m_; ++i) {
      const int j = ns_ + i;
      switch (lp_.constraint(i).sense) {
        case Sense::LessEqual:
          lb_[uz(j)] = 0.0;
          ub_[uz(j)] = kInf;
          break;
        case Sense::Equal:
          lb_[uz(j)] = 0.0;
          ub_[uz(j)] = 0.0;
          break;
        case Sense::GreaterEqual:
          lb_[uz(j)] = -kInf;
          ub_[uz(j)] = 0.0;
          break;
      }
    }
    first_artificial_ = ntot_;
  }

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < ns_) {
      for (int p = A_.start[uz(j)]; p < A_.start[uz(j) + 1]; ++p) f(A_.row[uz(p)], A_.val[uz(p)]);
    } else if (j < ntot_) {
      f(j - ns_, 1.0);
    } else {
      const size_t k = uz(j) - uz(ntot_);
      f(ar_row_[k], ar_sign_[k]);
    }
  }

  int n_columns() const { return ntot_ + static_cast<int>(ar_row_.size()); }

  void initial_basis() {
    x_.assign(uz(ntot_), 0.0);
    state_.assign(uz(ntot_), VState::AtLower);
    basis_.assign(uz(m_), -1);

    for (int j = 0; j < ns_; ++j) {
      if (lb_[uz(j)] > -kInf) {
        state_[uz(j)] = VState::AtLower;
        x_[uz(j)] = lb_[uz(j)];
      } else if (ub_[uz(j)] < kInf) {
        state_[uz(j)] = VState::AtUpper;
        x_[uz(j)] = ub_[uz(j)];
      } else {
        state_[uz(j)] = VState::AtLower;  // free variable parked at zero
        x_[uz(j)] = 0.0;
      }
    }

    std::vector<double> residual = b_;
    for (int j = 0; j < ns_; ++j) {
      const double xj = x_[uz(j)];
      if (xj == 0.0) continue;
      for_column(j, [&](int r, double v) { residual[uz(r)] -= v * xj; });
    }

    for (int i = 0; i < m_; ++i) {
      const int logical = ns_ + i;
      const double r = residual[uz(i)];
      if (r >= lb_[uz(logical)] && r <= ub_[uz(logical)]) {
        basis_[uz(i)] = logical;
        state_[uz(logical)] = VState::Basic;
        x_[uz(logical)] = r;
      } else {
        const double clamped = std::clamp(r, lb_[uz(logical)], ub_[uz(logical)]);
        state_[uz(logical)] = clamped == lb_[uz(logical)] ? VState::AtLower : VState::AtUpper;
        x_[uz(logical)] = clamped;
        const double rho = r - clamped;
        ar_row_.push_back(i);
        ar_sign_.push_back(rho >= 0.0 ? 1.0 : -1.0);
        const int art = ntot_ + static_cast<int>(ar_row_.size()) - 1;
        lb_.push_back(0.0);
        ub_.push_back(kInf);
        cost2_.push_back(0.0);
        x_.push_back(std::abs(rho));
        state_.push_back(VState::Basic);
        basis_[uz(i)] = art;
      }
    }
    cost1_.assign(uz(n_columns()), 0.0);
    for (int j = first_artificial_; j < n_columns(); ++j) cost1_[uz(j)] = 1.0;
  }

  void factorize_or_throw() {
    std::vector<std::vector<std::pair<int, double>>> cols(uz(m_));
    for (int p = 0; p < m_; ++p) {
      for_column(basis_[uz(p)], [&](int r, double v) { cols[uz(p)].emplace_back(r, v); });
    }
    if (!factor_.factorize(m_, cols, opt_.pivot_tol)) {
      throw NumericalBreakdown("basis factorization failed: numerically singular basis");
    }
  }

  void recompute_x() {
    std::vector<double> rhs = b_;
    const int n = n_columns();
    for (int j = 0; j < n; ++j) {
      if (state_[uz(j)] == VState::Basic) continue;
      const double xj = x_[uz(j)];
      if (xj == 0.0) continue;
      for_column(j, [&](int r, double v) { rhs[uz(r)] -= v * xj; });
    }
    factor_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[uz(basis_[uz(p)])] = rhs[uz(p)];
  }

  // --- pricing ------------------------------------------------------------
  struct Candidate {
    int j = -1;
    double reduced_cost = 0.0;
    int dir = +1;
  };

  bool price(Candidate& out) {
    std::vector<double> y(uz(m_), 0.0);
    for (int p = 0; p < m_; ++p) y[uz(p)] = (*cost_)[uz(basis_[uz(p)])];
    factor_.btran(y);

    const int n = n_columns();
    double best_score = opt_.optimality_tol;
    int best_j = -1;
    double best_d = 0.0;
    int best_dir = +1;
    for (int j = 0; j < n; ++j) {
      if (state_[uz(j)] == VState::Basic) continue;
      if (lb_[uz(j)] == ub_[uz(j)]) continue;  // fixed (includes spent artificials)
      double d = (*cost_)[uz(j)];
      for_column(j, [&](int r, double v) { d -= y[uz(r)] * v; });
      double score = 0.0;
      int dir = +1;
      const bool free_var = lb_[uz(j)] == -kInf && ub_[uz(j)] == kInf;
      if (free_var) {
        score = std::abs(d);
        dir = d < 0.0 ? +1 : -1;
      } else if (state_[uz(j)] == VState::AtLower) {
        score = -d;
        dir = +1;
      } else {
        score = d;
        dir = -1;
      }
      if (score > best_score) {
        best_score = score;
        best_j = j;
        best_d = d;
        best_dir = dir;
        if (bland_) break;  // Bland: first (lowest-index) improving column
      }
    }
    if (best_j < 0) return false;
    out = {best_j, best_d, best_dir};
    return true;
  }

  // --- ratio test (two-pass with feasibility-tolerance relaxation) --------
  Move ratio_test(int q, int dir, const std::vector<double>& t) const {
    const double span = ub_[uz(q)] - lb_[uz(q)];  // +inf unless both finite
    double theta_max = span;

    for (int p = 0; p < m_; ++p) {
      const double tp = t[uz(p)];
      if (std::abs(tp) <= 1e-12) continue;
      const int i = basis_[uz(p)];
      const double delta = dir * tp;
      if (delta > 0.0 && lb_[uz(i)] > -kInf) {
        theta_max = std::min(theta_max, (x_[uz(i)] - lb_[uz(i)] + opt_.feasibility_tol) / delta);
      } else if (delta < 0.0 && ub_[uz(i)] < kInf) {
        theta_max = std::min(theta_max, (x_[uz(i)] - ub_[uz(i)] - opt_.feasibility_tol) / delta);
      }
    }
    if (theta_max == kInf) {
      Move mv;
      mv.kind = MoveKind::Unbounded;
      return mv;
    }
    theta_max = std::max(theta_max, 0.0);

    int best_pos = -1;
    double best_piv = 0.0;
    double best_theta = 0.0;
    bool best_to_upper = false;
    for (int p = 0; p < m_; ++p) {
      const double tp = t[uz(p)];
      if (std::abs(tp) <= 1e-12) continue;
      const int i = basis_[uz(p)];
      const double delta = dir * tp;
      double theta;
      bool to_upper;
      if (delta > 0.0 && lb_[uz(i)] > -kInf) {
        theta = (x_[uz(i)] - lb_[uz(i)]) / delta;
        to_upper = false;
      } else if (delta < 0.0 && ub_[uz(i)] < kInf) {
        theta = (x_[uz(i)] - ub_[uz(i)]) / delta;
        to_upper = true;
      } else {
        continue;
      }
      theta = std::max(theta, 0.0);
      if (theta > theta_max) continue;
      if (std::abs(tp) < opt_.pivot_tol) continue;  // not an acceptable pivot
      if (std::abs(tp) > std::abs(best_piv)) {
        best_pos = p;
        best_piv = tp;
        best_theta = theta;
        best_to_upper = to_upper;
      }
    }

    Move mv;
    if (best_pos < 0) {
      if (span <= theta_max) {
        mv.kind = MoveKind::Flip;
        mv.theta = span;
      } else {
        mv.kind = MoveKind::Stall;
      }
      return mv;
    }
    if (span < best_theta) {
      mv.kind = MoveKind::Flip;
      mv.theta = span;
      return mv;
    }
    mv.kind = MoveKind::Pivot;
    mv.pos = best_pos;
    mv.theta = best_theta;
    mv.to_upper = best_to_upper;
    return mv;
  }

  void apply_move(const Candidate& cand, const Move& mv, const std::vector<double>& t) {
    const int q = cand.j;
    const double step = cand.dir * mv.theta;
    for (int p = 0; p < m_; ++p) {
      const double tp = t[uz(p)];
      if (tp == 0.0) continue;
      x_[uz(basis_[uz(p)])] -= step * tp;
    }
    if (mv.kind == MoveKind::Flip) {
      state_[uz(q)] = state_[uz(q)] == VState::AtLower ? VState::AtUpper : VState::AtLower;
      x_[uz(q)] = state_[uz(q)] == VState::AtLower ? lb_[uz(q)] : ub_[uz(q)];
      return;
    }
    const int leaving = basis_[uz(mv.pos)];
    state_[uz(leaving)] = mv.to_upper ? VState::AtUpper : VState::AtLower;
    x_[uz(leaving)] = mv.to_upper ? ub_[uz(leaving)] : lb_[uz(leaving)];  // snap to bound
    if (leaving >= first_artificial_) {
      lb_[uz(leaving)] = 0.0;  // an artificial that left never comes back
      ub_[uz(leaving)] = 0.0;
      x_[uz(leaving)] = 0.0;
    }
    x_[uz(q)] += step;
    basis_[uz(mv.pos)] = q;
    state_[uz(q)] = VState::Basic;
    factor_.push_eta(mv.pos, t);
  }

  // --- main loop ----------------------------------------------------------
  PhaseEnd phase_loop(bool phase1) {
    const long limit = opt_.max_iterations > 0
                           ? opt_.max_iterations
                           : 200 + 40L * (static_cast<long>(m_) + static_cast<long>(ns_));
    std::vector<double> t(uz(m_));
    Candidate cand;
    while (true) {
      if (iters_ > limit) {
        throw NumericalBreakdown("iteration limit exceeded (" + std::to_string(limit) + ")");
      }
      if (!price(cand)) return PhaseEnd::Optimal;

      std::fill(t.begin(), t.end(), 0.0);
      for_column(cand.j, [&](int r, double v) { t[uz(r)] += v; });
      factor_.ftran(t);

      Move mv = ratio_test(cand.j, cand.dir, t);
      if (mv.kind == MoveKind::Stall) {
        // Etas may have degraded the pivot column; retry from a fresh basis.
        if (factor_.eta_count() > 0) {
          factorize_or_throw();
          recompute_x();
          continue;
        }
        throw NumericalBreakdown("no pivot above tolerance for column '" +
                                 (cand.j < ns_ ? lp_.variable(cand.j).name
                                               : std::string("logical/artificial")) +
                                 "'");
      }
      if (mv.kind == MoveKind::Unbounded) {
        if (phase1) throw NumericalBreakdown("unbounded ray in phase 1");
        return PhaseEnd::Unbounded;
      }

      apply_move(cand, mv, t);
      ++iters_;
      if (phase1) ++phase1_iters_;

      if (mv.theta <= 1e-10) {
        if (++degenerate_run_ >= 50) bland_ = true;
      } else {
        degenerate_run_ = 0;
        bland_ = false;
      }
      if (factor_.eta_count() >= opt_.refactor_interval) {
        factorize_or_throw();
        recompute_x();
      }
    }
  }

  // Pivot zero-valued basic artificials out of the basis where possible and
  // fix every artificial to [0,0] so phase 2 never touches them again.
  void expel_artificials() {
    std::vector<double> e(uz(m_));
    std::vector<double> t(uz(m_));
    for (int p = 0; p < m_; ++p) {
      const int j = basis_[uz(p)];
      if (j < first_artificial_) continue;
      std::fill(e.begin(), e.end(), 0.0);
      e[uz(p)] = 1.0;
      factor_.btran(e);  // row p of B^{-1}

      int best_col = -1;
      double best_mag = std::max(opt_.pivot_tol, 1e-10);
      for (int jj = 0; jj < first_artificial_; ++jj) {
        if (state_[uz(jj)] == VState::Basic) continue;
        double alpha = 0.0;
        for_column(jj, [&](int r, double v) { alpha += e[uz(r)] * v; });
        if (std::abs(alpha) > best_mag) {
          best_mag = std::abs(alpha);
          best_col = jj;
        }
      }
      if (best_col < 0) continue;  // redundant row: artificial stays basic at 0

      std::fill(t.begin(), t.end(), 0.0);
      for_column(best_col, [&](int r, double v) { t[uz(r)] += v; });
      factor_.ftran(t);
      factor_.push_eta(p, t);
      basis_[uz(p)] = best_col;
      state_[uz(best_col)] = VState::Basic;
      state_[uz(j)] = VState::AtLower;
      x_[uz(j)] = 0.0;
      if (factor_.eta_count() >= opt_.refactor_interval) {
        factorize_or_throw();
        recompute_x();
      }
    }
    for (int j = first_artificial_; j < n_columns(); ++j) {
      lb_[uz(j)] = 0.0;
      ub_[uz(j)] = 0.0;
      if (state_[uz(j)] != VState::Basic) x_[uz(j)] = 0.0;
    }
  }

  // --- results ------------------------------------------------------------
  LpSolution extract() {
    factorize_or_throw();
    recompute_x();

    LpSolution out;
    out.status = SolveStatus::Optimal;
    out.iterations = iters_;
    out.phase1_iterations = phase1_iters_;

    out.primal.resize(uz(ns_));
    for (int j = 0; j < ns_; ++j) out.primal[uz(j)] = x_[uz(j)] * col_scale_[uz(j)];

    std::vector<double> y(uz(m_), 0.0);
    for (int p = 0; p < m_; ++p) y[uz(p)] = cost2_[uz(basis_[uz(p)])];
    factor_.btran(y);
    out.duals.resize(uz(m_));
    for (int i = 0; i < m_; ++i) out.duals[uz(i)] = y[uz(i)] * row_scale_[uz(i)];

    out.objective = lp_.objective_value(out.primal);
    return out;
  }

  LpSolution solve_unconstrained() {
    LpSolution out;
    out.primal.assign(uz(lp_.n_variables()), 0.0);
    for (int j = 0; j < lp_.n_variables(); ++j) {
      const Variable& v = lp_.variable(j);
      if (v.cost > 0.0) {
        if (v.lower == -kInf) {
          return LpSolution{SolveStatus::Unbounded, -kInf, {}, {}, 0, 0};
        }
        out.primal[uz(j)] = v.lower;
      } else if (v.cost < 0.0) {
        if (v.upper == kInf) {
          return LpSolution{SolveStatus::Unbounded, -kInf, {}, {}, 0, 0};
        }
        out.primal[uz(j)] = v.upper;
      } else {
        out.primal[uz(j)] = v.lower > -kInf ? v.lower : (v.upper < kInf ? v.upper : 0.0);
      }
    }
    out.status = SolveStatus::Optimal;
    out.objective = lp_.objective_value(out.primal);
    return out;
  }

  const LinearProgram& lp_;
  SolverOptions opt_;
  int m_ = 0, ns_ = 0, ntot_ = 0, first_artificial_ = 0;
  Csc A_;
  std::vector<double> row_scale_, col_scale_;
  std::vector<double> b_, lb_, ub_, cost1_, cost2_;
  const std::vector<double>* cost_ = nullptr;
  std::vector<int> ar_row_;
  std::vector<double> ar_sign_;
  std::vector<double> x_;
  std::vector<VState> state_;
  std::vector<int> basis_;
  BasisFactor factor_;
  long iters_ = 0, phase1_iters_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
};

}  // namespace

LpSolution SimplexBackend::solve(const LinearProgram& lp) const {
  SimplexEngine engine(lp, options_);
  return engine.run();
}

}  // namespace repday::lp
