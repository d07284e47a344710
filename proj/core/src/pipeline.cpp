#include "repday/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "repday/lp.hpp"

namespace repday::pipeline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

KMeansConfig kmeans_config(const RunConfig& cfg) {
  KMeansConfig kc;
  kc.k = cfg.k;
  kc.n_init = cfg.n_init;
  kc.seed = cfg.seed;
  return kc;
}

ClusterResult cluster_full(const Dataset& data, const KMeansConfig& kc) {
  auto [z, stats] = z_normalize(data);
  (void)stats;
  std::vector<Period> zp;
  zp.reserve(static_cast<size_t>(z.n_days()));
  for (int d = 0; d < z.n_days(); ++d) zp.push_back(z.day(d));
  return kmeans_multistart(zp, kc);
}

double annualized_capex(const resys::DesignVariables& dv, const resys::TechnologyParams& tp) {
  return tp.apvf() * (tp.capex_hp * dv.p_hp + tp.capex_eh * dv.p_eh + tp.capex_pv * dv.p_pv +
                      tp.capex_bat_power * dv.p_bat + tp.capex_bat_energy * dv.e_bat);
}

double deviation_pct_of(double repr, double ref) {
  if (std::abs(ref) > 1e-9) return (repr - ref) / ref * 100.0;
  return std::abs(repr) <= 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
}

/// Fixed-design evaluation over the whole series, decomposed into one LP per
/// day (periods are independent under the cyclic intra-day battery).
struct Evaluation {
  bool feasible = false;
  double opex = 0.0;  // sum of daily purchase costs; valid when feasible
  double max_heat_slack = 0.0;
  double max_el_slack = 0.0;
};

Evaluation evaluate_full_series(const resys::DesignVariables& dv, const Dataset& data,
                                const resys::TechnologyParams& tp,
                                const resys::GridLimit& grid) {
  Evaluation ev;
  ev.feasible = true;
  for (int d = 0; d < data.n_days(); ++d) {
    const auto strict = resys::build_operations_problem(dv, data.day(d), tp, grid, false);
    const auto sol = lp::solve(strict.lp);
    if (sol.status == lp::SolveStatus::Optimal) {
      ev.opex += sol.objective;
    } else {
      ev.feasible = false;
    }
    const auto relaxed = resys::build_operations_problem(dv, data.day(d), tp, grid, true);
    const auto rsol = lp::solve(relaxed.lp);
    if (rsol.status != lp::SolveStatus::Optimal) {
      throw lp::NumericalBreakdown("slack-relaxed evaluation of day " + std::to_string(d) +
                                   " did not solve to optimality");
    }
    for (int t = 0; t < data.hours_per_day(); ++t) {
      ev.max_heat_slack = std::max(
          ev.max_heat_slack,
          rsol.primal[static_cast<size_t>(relaxed.op_var(0, t, resys::OpVar::QSlackHeat))]);
      ev.max_el_slack = std::max(
          ev.max_el_slack,
          rsol.primal[static_cast<size_t>(relaxed.op_var(0, t, resys::OpVar::ESlackEl))]);
    }
  }
  if (!ev.feasible) ev.opex = 0.0;
  return ev;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::None: return "none";
    case Method::Simple: return "simple";
    case Method::Feasibility: return "feasibility";
    case Method::Slack: return "slack";
  }
  return "none";
}

Method method_from_string(const std::string& name) {
  if (name == "none") return Method::None;
  if (name == "simple") return Method::Simple;
  if (name == "feasibility") return Method::Feasibility;
  if (name == "slack") return Method::Slack;
  throw ConfigError("unknown method '" + name + "' (expected none|simple|feasibility|slack)");
}

std::string to_string(extremes::ModificationMode mode) {
  return mode == extremes::ModificationMode::FeasibilitySteps ? "steps" : "append";
}

extremes::ModificationMode modification_from_string(const std::string& name) {
  if (name == "steps" || name == "feasibility_steps") {
    return extremes::ModificationMode::FeasibilitySteps;
  }
  if (name == "append") return extremes::ModificationMode::Append;
  throw ConfigError("unknown modification '" + name + "' (expected steps|append)");
}

void RunConfig::validate() const {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (n_init < 1) throw ConfigError("n_init must be >= 1");
  if (!(grid_fraction >= 0.0)) throw ConfigError("grid_fraction must be >= 0");
  if (max_extremes < 0) throw ConfigError("max_extremes must be >= 0");
  if (!(slack_tol >= 0.0)) throw ConfigError("slack_tol must be >= 0");
  if (virtual_days) {
    if (method != Method::None) {
      throw ConfigError("virtual_days replaces extreme selection; combine it with method none");
    }
    if (modification != extremes::ModificationMode::FeasibilitySteps) {
      throw ConfigError("virtual days require the zero-weight (steps) modification");
    }
  }
  try {
    params.validate();
  } catch (const resys::InvalidParamsError& e) {
    throw ConfigError(std::string("invalid technology parameters: ") + e.what());
  }
}

ReferenceResult run_reference(const Dataset& data, const resys::TechnologyParams& params,
                              const resys::GridLimit& grid) {
  resys::RepresentativeSet full;
  full.periods.reserve(static_cast<size_t>(data.n_days()));
  for (int d = 0; d < data.n_days(); ++d) full.periods.push_back({data.day(d), 1.0});
  const auto problem = resys::build_design_problem(full, params, grid, false);
  const auto sol = lp::solve(problem.lp);
  if (sol.status != lp::SolveStatus::Optimal) {
    throw InfeasibleError("reference design problem is not solvable at c_lim=" +
                          std::to_string(grid.c_lim));
  }
  ReferenceResult out;
  out.dv = resys::extract_design(problem, sol);
  out.objective = sol.objective;
  out.peak_draw = 0.0;
  for (int d = 0; d < data.n_days(); ++d) {
    for (int t = 0; t < data.hours_per_day(); ++t) {
      out.peak_draw = std::max(
          out.peak_draw, sol.primal[static_cast<size_t>(problem.op_var(d, t, resys::OpVar::EBuy))]);
    }
  }
  return out;
}

RunReport run_aggregated(const Dataset& data, const RunConfig& config) {
  return run_aggregated(data, config, nullptr, nullptr);
}

RunReport run_aggregated(const Dataset& data, const RunConfig& config,
                         const ReferenceResult* unconstrained) {
  return run_aggregated(data, config, unconstrained, nullptr);
}

RunReport run_aggregated(const Dataset& data, const RunConfig& config,
                         const ReferenceResult* unconstrained, const ReferenceResult* matched) {
  config.validate();

  std::optional<ReferenceResult> unc_store;
  if (unconstrained == nullptr && (!config.grid_absolute || config.with_reference)) {
    unc_store = run_reference(data, config.params, {lp::kInfinity});
    unconstrained = &*unc_store;
  }

  RunReport rep;
  rep.method = config.method;
  rep.modification = config.modification;
  rep.k = config.k;
  rep.seed = config.seed;
  rep.grid_fraction = config.grid_fraction;
  rep.grid_absolute = config.grid_absolute;
  rep.reference_peak = unconstrained != nullptr ? unconstrained->peak_draw : kNaN;
  rep.c_lim = config.grid_absolute ? config.grid_fraction
                                   : config.grid_fraction * unconstrained->peak_draw;
  const resys::GridLimit grid{rep.c_lim};

  if (config.with_reference) {
    std::optional<ReferenceResult> matched_store;
    if (matched == nullptr) {
      if (unconstrained != nullptr && rep.c_lim >= unconstrained->peak_draw - 1e-12) {
        matched = unconstrained;  // the cap is slack at the unconstrained optimum
      } else {
        matched_store = run_reference(data, config.params, grid);
        matched = &*matched_store;
      }
    }
    rep.has_reference = true;
    rep.dv_ref = matched->dv;
    rep.f_ref = matched->objective;
  }

  // Extreme-day selection.
  const KMeansConfig kc = kmeans_config(config);
  extremes::SelectionLimits limits;
  limits.max_extremes = config.max_extremes;
  limits.slack_tol = config.slack_tol;
  switch (config.method) {
    case Method::None:
      rep.converged = true;
      break;
    case Method::Simple:
      rep.extreme_days = extremes::select_simple(data);
      rep.converged = true;
      break;
    case Method::Feasibility: {
      auto res = extremes::iterate_feasibility(data, kc, config.params, grid,
                                               config.modification, limits);
      rep.extreme_days = std::move(res.extreme_days);
      rep.iterations = std::move(res.iterations);
      rep.converged = res.converged;
      break;
    }
    case Method::Slack: {
      auto res =
          extremes::iterate_slack(data, kc, config.params, grid, config.modification, limits);
      rep.extreme_days = std::move(res.extreme_days);
      rep.iterations = std::move(res.iterations);
      rep.converged = res.converged;
      break;
    }
  }
  if (config.virtual_days) {
    rep.extreme_days.push_back({extremes::kVirtualDay, extremes::ExtremeSource::Virtual, 0});
  }
  rep.n_extremes = static_cast<int>(rep.extreme_days.size());

  // Aggregated design problem on the selected representation.
  resys::RepresentativeSet repr;
  if (config.virtual_days) {
    repr = extremes::modify_feasibility_steps(
        cluster_full(data, kc), data, std::vector<Period>{extremes::make_virtual_day(data)});
  } else if (config.modification == extremes::ModificationMode::FeasibilitySteps) {
    repr = extremes::modify_feasibility_steps(cluster_full(data, kc), data, rep.extreme_days);
  } else {
    repr = extremes::modify_append(data, kc, rep.extreme_days);
  }
  const auto o_init = resys::build_design_problem(repr, config.params, grid, false);
  const auto init_sol = lp::solve(o_init.lp);
  if (init_sol.status != lp::SolveStatus::Optimal) {
    rep.design_feasible = false;
    if (config.method == Method::None || config.method == Method::Simple) rep.converged = false;
    return rep;
  }
  rep.design_feasible = true;
  rep.dv_repr = resys::extract_design(o_init, init_sol);
  rep.f_clustered = init_sol.objective;
  try {
    const auto shares = resys::cost_breakdown(o_init, init_sol);
    rep.capex_share = shares.capex_share;
    rep.opex_share = shares.opex_share;
  } catch (const resys::ZeroTotalCost&) {
    // A free optimum has no meaningful split; leave the shares unset.
  }

  // Full-series evaluation with the fixed design.
  const auto ev = evaluate_full_series(rep.dv_repr, data, config.params, grid);
  rep.feasible_full_year = ev.feasible;
  rep.max_heat_slack = ev.max_heat_slack;
  rep.max_el_slack = ev.max_el_slack;
  if (ev.feasible) {
    rep.f_operations = annualized_capex(rep.dv_repr, config.params) + ev.opex;
    if (rep.has_reference && rep.f_operations > 0.0) {
      rep.accuracy = rep.f_ref / rep.f_operations;
    }
  }
  if (rep.has_reference) {
    rep.deviation_pct.p_hp = deviation_pct_of(rep.dv_repr.p_hp, rep.dv_ref.p_hp);
    rep.deviation_pct.p_eh = deviation_pct_of(rep.dv_repr.p_eh, rep.dv_ref.p_eh);
    rep.deviation_pct.p_pv = deviation_pct_of(rep.dv_repr.p_pv, rep.dv_ref.p_pv);
    rep.deviation_pct.p_bat = deviation_pct_of(rep.dv_repr.p_bat, rep.dv_ref.p_bat);
    rep.deviation_pct.e_bat = deviation_pct_of(rep.dv_repr.e_bat, rep.dv_ref.e_bat);
  }
  return rep;
}

SweepResult sweep_grid_limits(const Dataset& data, const RunConfig& base,
                              const std::vector<double>& fractions) {
  base.validate();
  if (fractions.empty()) throw ConfigError("fractions list must not be empty");
  for (double f : fractions) {
    if (!(f >= 0.0)) throw ConfigError("grid fractions must be >= 0");
  }
  const ReferenceResult unc = run_reference(data, base.params, {lp::kInfinity});
  SweepResult out;
  out.reference_peak = unc.peak_draw;
  out.f_ref_unconstrained = unc.objective;
  out.dv_ref_unconstrained = unc.dv;
  out.points.reserve(fractions.size());
  for (double f : fractions) {
    RunConfig cfg = base;
    cfg.grid_fraction = f;
    cfg.grid_absolute = false;
    out.points.push_back({f, run_aggregated(data, cfg, &unc, nullptr)});
  }
  return out;
}

ClusterCountReport compare_cluster_counts(const Dataset& data, const RunConfig& base,
                                          const std::vector<int>& ks) {
  base.validate();
  if (ks.empty()) throw ConfigError("cluster count list must not be empty");
  for (int k : ks) {
    if (k < 1 || k > data.n_days()) {
      throw ConfigError("cluster count " + std::to_string(k) + " outside [1, n_days]");
    }
  }
  if (base.method == Method::None && !base.virtual_days) {
    throw ConfigError("cluster-count comparison needs an extreme-day method to compare against");
  }

  const ReferenceResult unc = run_reference(data, base.params, {lp::kInfinity});
  const double c_lim =
      base.grid_absolute ? base.grid_fraction : base.grid_fraction * unc.peak_draw;
  ReferenceResult matched = unc;
  if (c_lim < unc.peak_draw - 1e-12) {
    matched = run_reference(data, base.params, {c_lim});
  }

  ClusterCountReport out;
  out.c_lim = c_lim;
  out.reference_peak = unc.peak_draw;
  out.f_ref = matched.objective;
  out.dv_ref = matched.dv;
  out.entries.reserve(ks.size());
  for (int k : ks) {
    ClusterCountEntry entry;
    entry.k = k;
    RunConfig none = base;
    none.k = k;
    none.method = Method::None;
    none.virtual_days = false;
    none.with_reference = true;
    entry.without_extremes = run_aggregated(data, none, &unc, &matched);
    RunConfig with = base;
    with.k = k;
    with.with_reference = true;
    entry.with_extremes = run_aggregated(data, with, &unc, &matched);
    out.entries.push_back(std::move(entry));
  }
  return out;
}

}  // namespace repday::pipeline
