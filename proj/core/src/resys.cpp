#include "repday/resys.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace repday::resys {

namespace {

std::string tag(const char* prefix, int j, int t) {
  return std::string(prefix) + "_j" + std::to_string(j) + "_t" + std::to_string(t);
}

// Periods entering a model must be in original units; z-scores here would
// silently produce a meaningless system.
void check_original_units(const Period& p, int expected_hours) {
  if (p.n_hours() != expected_hours) {
    throw DatasetError("period has " + std::to_string(p.n_hours()) + " hours, expected " +
                       std::to_string(expected_hours));
  }
  for (const char* name : {attr::el_demand, attr::heat_demand}) {
    for (double v : p.row(name)) {
      if (!(v >= -1e-9)) throw DatasetError(std::string(name) + " negative: not original units?");
    }
  }
  for (double v : p.row(attr::solar_cf)) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw DatasetError("solar_cf outside [0,1]: not original units?");
    }
  }
  p.row(attr::t_ambient);
  p.row(attr::el_price);
}

struct BuildInputs {
  const std::vector<WeightedPeriod>& periods;
  const TechnologyParams& params;
  const GridLimit& grid;
  bool slack = false;
  bool design = false;
  const DesignVariables* dv = nullptr;  // fixed sizing when !design
};

ResysProblem build_problem(const BuildInputs& in) {
  in.params.validate();
  in.grid.validate();
  if (in.periods.empty()) throw EmptyRepresentativeSet("no periods given");
  const int hours = in.periods.front().period.n_hours();
  double weight_sum = 0.0;
  for (const WeightedPeriod& wp : in.periods) {
    if (!(wp.weight >= 0.0)) throw InvalidParamsError("period weight must be >= 0");
    weight_sum += wp.weight;
    check_original_units(wp.period, hours);
  }
  if (in.design && weight_sum <= 0.0) {
    throw EmptyRepresentativeSet("every period has weight zero");
  }
  if (!in.design) {
    const DesignVariables& d = *in.dv;
    for (double v : {d.p_hp, d.p_eh, d.p_pv, d.p_bat, d.e_bat}) {
      if (!(v >= 0.0)) throw InvalidParamsError("design variables must be >= 0");
    }
  }

  ResysProblem pr;
  pr.is_design = in.design;
  pr.slack = in.slack;
  pr.n_periods = static_cast<int>(in.periods.size());
  pr.hours_per_day = hours;

  const TechnologyParams& tp = in.params;
  const double annuity = tp.apvf();
  if (in.design) {
    pr.lp.add_variable("p_hp", 0.0, lp::kInfinity, annuity * tp.capex_hp);
    pr.lp.add_variable("p_eh", 0.0, lp::kInfinity, annuity * tp.capex_eh);
    pr.lp.add_variable("p_pv", 0.0, lp::kInfinity, annuity * tp.capex_pv);
    pr.lp.add_variable("p_bat", 0.0, lp::kInfinity, annuity * tp.capex_bat_power);
    pr.lp.add_variable("e_bat", 0.0, lp::kInfinity, annuity * tp.capex_bat_energy);
  }

  for (int j = 0; j < pr.n_periods; ++j) {
    const WeightedPeriod& wp = in.periods[static_cast<size_t>(j)];
    const Period& day = wp.period;
    const double w = wp.weight;
    pr.weights.push_back(w);
    pr.day_indices.push_back(day.day_index);

    const std::vector<double>& el = day.row(attr::el_demand);
    const std::vector<double>& heat = day.row(attr::heat_demand);
    const std::vector<double>& cf = day.row(attr::solar_cf);
    const std::vector<double>& price = day.row(attr::el_price);
    const std::vector<double> cop = cop_profile(day.row(attr::t_ambient), tp);

    // Operating variables for every hour of the period, then the rows. The
    // battery rows reference hour t+1, so variables come first.
    for (int t = 0; t < hours; ++t) {
      pr.lp.add_variable(tag("e_buy", j, t), 0.0, in.grid.c_lim,
                         w * price[static_cast<size_t>(t)]);
      pr.lp.add_variable(tag("pv_gen", j, t), 0.0,
                         in.design ? lp::kInfinity : in.dv->p_pv * cf[static_cast<size_t>(t)]);
      pr.lp.add_variable(tag("e_in", j, t), 0.0, in.design ? lp::kInfinity : in.dv->p_bat);
      pr.lp.add_variable(tag("e_out", j, t), 0.0, in.design ? lp::kInfinity : in.dv->p_bat);
      pr.lp.add_variable(tag("stor_lev", j, t), 0.0, in.design ? lp::kInfinity : in.dv->e_bat);
      pr.lp.add_variable(tag("e_eh_el", j, t), 0.0,
                         in.design ? lp::kInfinity : in.dv->p_eh / tp.eta_eh);
      pr.lp.add_variable(tag("e_hp_el", j, t), 0.0,
                         in.design ? lp::kInfinity : in.dv->p_hp / cop[static_cast<size_t>(t)]);
      if (in.slack) {
        pr.lp.add_variable(tag("e_slack_el", j, t), 0.0, lp::kInfinity, w * tp.c_slack);
        pr.lp.add_variable(tag("q_slack_heat", j, t), 0.0, lp::kInfinity, w * tp.c_slack);
      }
    }

    for (int t = 0; t < hours; ++t) {
      const size_t ut = static_cast<size_t>(t);
      const int e_buy = pr.op_var(j, t, OpVar::EBuy);
      const int pv_gen = pr.op_var(j, t, OpVar::PvGen);
      const int e_in = pr.op_var(j, t, OpVar::EIn);
      const int e_out = pr.op_var(j, t, OpVar::EOut);
      const int stor = pr.op_var(j, t, OpVar::StorLev);
      const int stor_next = pr.op_var(j, (t + 1) % hours, OpVar::StorLev);
      const int e_eh = pr.op_var(j, t, OpVar::EEhEl);
      const int e_hp = pr.op_var(j, t, OpVar::EHpEl);

      std::vector<std::pair<int, double>> el_terms = {
          {e_buy, 1.0}, {pv_gen, 1.0}, {e_out, 1.0}, {e_in, -1.0}, {e_eh, -1.0}, {e_hp, -1.0}};
      if (in.slack) el_terms.emplace_back(pr.op_var(j, t, OpVar::ESlackEl), 1.0);
      pr.lp.add_constraint(tag("el", j, t), std::move(el_terms), lp::Sense::Equal, el[ut]);

      std::vector<std::pair<int, double>> heat_terms = {{e_hp, cop[ut]}, {e_eh, tp.eta_eh}};
      if (in.slack) heat_terms.emplace_back(pr.op_var(j, t, OpVar::QSlackHeat), 1.0);
      pr.lp.add_constraint(tag("heat", j, t), std::move(heat_terms), lp::Sense::GreaterEqual,
                           heat[ut]);

      pr.lp.add_constraint(
          tag("bat", j, t),
          {{stor_next, 1.0}, {stor, -1.0}, {e_in, -tp.eta_ch}, {e_out, 1.0 / tp.eta_dis}},
          lp::Sense::Equal, 0.0);

      if (in.design) {
        std::vector<std::pair<int, double>> pv_terms = {{pv_gen, 1.0}};
        if (cf[ut] > 0.0) {
          pv_terms.emplace_back(static_cast<int>(DesignVar::PPv), -cf[ut]);
        }
        pr.lp.add_constraint(tag("pvcap", j, t), std::move(pv_terms), lp::Sense::LessEqual, 0.0);
        pr.lp.add_constraint(tag("hpcap", j, t),
                             {{e_hp, cop[ut]}, {static_cast<int>(DesignVar::PHp), -1.0}},
                             lp::Sense::LessEqual, 0.0);
        pr.lp.add_constraint(tag("ehcap", j, t),
                             {{e_eh, tp.eta_eh}, {static_cast<int>(DesignVar::PEh), -1.0}},
                             lp::Sense::LessEqual, 0.0);
        pr.lp.add_constraint(tag("storcap", j, t),
                             {{stor, 1.0}, {static_cast<int>(DesignVar::EBat), -1.0}},
                             lp::Sense::LessEqual, 0.0);
        pr.lp.add_constraint(tag("incap", j, t),
                             {{e_in, 1.0}, {static_cast<int>(DesignVar::PBat), -1.0}},
                             lp::Sense::LessEqual, 0.0);
        pr.lp.add_constraint(tag("outcap", j, t),
                             {{e_out, 1.0}, {static_cast<int>(DesignVar::PBat), -1.0}},
                             lp::Sense::LessEqual, 0.0);
      }
    }
  }
  return pr;
}

}  // namespace

double TechnologyParams::apvf() const {
  if (interest_rate == 0.0) return 1.0 / static_cast<double>(amortization_years);
  const double r = interest_rate;
  return r / (1.0 - std::pow(1.0 + r, -static_cast<double>(amortization_years)));
}

void TechnologyParams::validate() const {
  for (double c : {capex_pv, capex_hp, capex_eh, capex_bat_power, capex_bat_energy, c_slack}) {
    if (!(c >= 0.0)) throw InvalidParamsError("cost parameters must be >= 0");
  }
  if (amortization_years < 1) throw InvalidParamsError("amortization_years must be >= 1");
  if (!(interest_rate >= 0.0)) throw InvalidParamsError("interest_rate must be >= 0");
  for (double eta : {eta_eh, eta_ch, eta_dis}) {
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParamsError("efficiencies must be in (0, 1]");
  }
  if (!(cop_quality > 0.0)) throw InvalidParamsError("cop_quality must be > 0");
  if (!(cop_max >= 1.0)) throw InvalidParamsError("cop_max must be >= 1");
  if (!std::isfinite(cop_supply_temp)) throw InvalidParamsError("cop_supply_temp must be finite");
}

void GridLimit::validate() const {
  if (!(c_lim >= 0.0)) throw InvalidParamsError("grid limit must be >= 0");
}

double RepresentativeSet::total_weight() const {
  double sum = 0.0;
  for (const WeightedPeriod& wp : periods) sum += wp.weight;
  return sum;
}

int ResysProblem::design_var(DesignVar v) const {
  if (!is_design) throw NotADesignProblem("operations problems carry no design variables");
  return static_cast<int>(v);
}

int ResysProblem::op_var(int period, int hour, OpVar v) const {
  if (period < 0 || period >= n_periods || hour < 0 || hour >= hours_per_day) {
    throw std::out_of_range("op_var: period/hour out of range");
  }
  const int kind = static_cast<int>(v);
  if (kind >= vars_per_hour()) {
    throw std::out_of_range("op_var: slack variable requested from a slack-free problem");
  }
  const int base = is_design ? 5 : 0;
  return base + (period * hours_per_day + hour) * vars_per_hour() + kind;
}

std::vector<double> cop_profile(const std::vector<double>& t_ambient,
                                const TechnologyParams& params) {
  params.validate();
  const double kelvin = params.cop_supply_temp + 273.15;
  std::vector<double> cop;
  cop.reserve(t_ambient.size());
  for (const double t : t_ambient) {
    if (!(t < params.cop_supply_temp)) {
      throw SupplyTempExceeded("ambient temperature " + std::to_string(t) +
                               " degC reaches the supply temperature");
    }
    const double value = std::min(params.cop_max,
                                  params.cop_quality * kelvin / (params.cop_supply_temp - t));
    if (value < 1.0) {
      throw InvalidParamsError("COP below 1 at ambient " + std::to_string(t) + " degC");
    }
    cop.push_back(value);
  }
  return cop;
}

ResysProblem build_design_problem(const RepresentativeSet& repr, const TechnologyParams& params,
                                  const GridLimit& grid, bool slack) {
  BuildInputs in{repr.periods, params, grid, slack, /*design=*/true, nullptr};
  return build_problem(in);
}

ResysProblem build_operations_problem(const DesignVariables& dv,
                                      const std::vector<Period>& periods,
                                      const TechnologyParams& params, const GridLimit& grid,
                                      bool slack) {
  std::vector<WeightedPeriod> weighted;
  weighted.reserve(periods.size());
  for (const Period& p : periods) weighted.push_back({p, 1.0});
  BuildInputs in{weighted, params, grid, slack, /*design=*/false, &dv};
  return build_problem(in);
}

ResysProblem build_operations_problem(const DesignVariables& dv, const Dataset& data,
                                      const TechnologyParams& params, const GridLimit& grid,
                                      bool slack) {
  std::vector<Period> periods;
  periods.reserve(static_cast<size_t>(data.n_days()));
  for (int d = 0; d < data.n_days(); ++d) periods.push_back(data.day(d));
  return build_operations_problem(dv, periods, params, grid, slack);
}

ResysProblem build_operations_problem(const DesignVariables& dv, const Period& period,
                                      const TechnologyParams& params, const GridLimit& grid,
                                      bool slack) {
  return build_operations_problem(dv, std::vector<Period>{period}, params, grid, slack);
}

DesignVariables extract_design(const ResysProblem& problem, const lp::LpSolution& solution) {
  if (!problem.is_design) throw NotADesignProblem("solution comes from an operations problem");
  if (solution.status != lp::SolveStatus::Optimal ||
      static_cast<int>(solution.primal.size()) != problem.lp.n_variables()) {
    throw std::invalid_argument("extract_design requires an Optimal solution of this problem");
  }
  // Values within solver feasibility tolerance below the lower bound of zero
  // are the bound; snapping keeps the result valid as a fixed design.
  const auto snap = [](double v) { return (v <= 0.0 && v >= -1e-7) ? 0.0 : v; };
  DesignVariables dv;
  dv.p_hp = snap(solution.primal[static_cast<size_t>(problem.design_var(DesignVar::PHp))]);
  dv.p_eh = snap(solution.primal[static_cast<size_t>(problem.design_var(DesignVar::PEh))]);
  dv.p_pv = snap(solution.primal[static_cast<size_t>(problem.design_var(DesignVar::PPv))]);
  dv.p_bat = snap(solution.primal[static_cast<size_t>(problem.design_var(DesignVar::PBat))]);
  dv.e_bat = snap(solution.primal[static_cast<size_t>(problem.design_var(DesignVar::EBat))]);
  return dv;
}

OperationProfile operation_profile(const ResysProblem& problem, const lp::LpSolution& solution) {
  if (solution.status != lp::SolveStatus::Optimal ||
      static_cast<int>(solution.primal.size()) != problem.lp.n_variables()) {
    throw std::invalid_argument("operation_profile requires an Optimal solution of this problem");
  }
  OperationProfile profile;
  for (int j = 0; j < problem.n_periods; ++j) {
    PeriodOperation op;
    op.day_index = problem.day_indices[static_cast<size_t>(j)];
    op.weight = problem.weights[static_cast<size_t>(j)];
    const auto value = [&](int t, OpVar v) {
      return solution.primal[static_cast<size_t>(problem.op_var(j, t, v))];
    };
    for (int t = 0; t < problem.hours_per_day; ++t) {
      op.e_buy.push_back(value(t, OpVar::EBuy));
      op.pv_gen.push_back(value(t, OpVar::PvGen));
      op.e_in.push_back(value(t, OpVar::EIn));
      op.e_out.push_back(value(t, OpVar::EOut));
      op.stor_lev.push_back(value(t, OpVar::StorLev));
      op.e_eh_el.push_back(value(t, OpVar::EEhEl));
      op.e_hp_el.push_back(value(t, OpVar::EHpEl));
      if (problem.slack) {
        op.e_slack_el.push_back(value(t, OpVar::ESlackEl));
        op.q_slack_heat.push_back(value(t, OpVar::QSlackHeat));
      }
    }
    profile.periods.push_back(std::move(op));
  }
  return profile;
}

CostBreakdown cost_breakdown(const ResysProblem& problem, const lp::LpSolution& solution) {
  if (!problem.is_design) throw NotADesignProblem("cost breakdown needs a design problem");
  if (solution.status != lp::SolveStatus::Optimal ||
      static_cast<int>(solution.primal.size()) != problem.lp.n_variables()) {
    throw std::invalid_argument("cost_breakdown requires an Optimal solution of this problem");
  }
  double capex = 0.0;
  for (int v = 0; v < 5; ++v) {
    capex += problem.lp.variable(v).cost * solution.primal[static_cast<size_t>(v)];
  }
  CostBreakdown out;
  out.total = solution.objective;
  if (std::abs(out.total) < 1e-9) throw ZeroTotalCost("total system cost is zero");
  out.capex_share = capex / out.total;
  out.opex_share = 1.0 - out.capex_share;
  return out;
}

}  // namespace repday::resys
