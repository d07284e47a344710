#ifndef REPDAY_RESYS_HPP
#define REPDAY_RESYS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "repday/lp.hpp"
#include "repday/timeseries.hpp"

namespace repday::resys {

class InvalidParamsError : public std::runtime_error {
 public:
  explicit InvalidParamsError(const std::string& what) : std::runtime_error(what) {}
};

/// Ambient temperature at or above the heat-pump supply temperature makes the
/// COP model meaningless.
class SupplyTempExceeded : public std::runtime_error {
 public:
  explicit SupplyTempExceeded(const std::string& what) : std::runtime_error(what) {}
};

class EmptyRepresentativeSet : public std::runtime_error {
 public:
  explicit EmptyRepresentativeSet(const std::string& what) : std::runtime_error(what) {}
};

class NotADesignProblem : public std::runtime_error {
 public:
  explicit NotADesignProblem(const std::string& what) : std::runtime_error(what) {}
};

/// Cost shares are undefined when the optimal total cost is zero.
class ZeroTotalCost : public std::runtime_error {
 public:
  explicit ZeroTotalCost(const std::string& what) : std::runtime_error(what) {}
};

/// Technology and economic parameters of the residential supply system.
/// Capex prices are EUR/kW except battery capacity (EUR/kWh).
struct TechnologyParams {
  double capex_pv = 900.0;
  double capex_hp = 900.0;
  double capex_eh = 50.0;
  double capex_bat_power = 150.0;
  double capex_bat_energy = 100.0;

  int amortization_years = 5;
  double interest_rate = 0.0;  // fraction per year

  double eta_eh = 1.0;   // electric-heater efficiency (thermal per electric)
  double eta_ch = 0.95;  // battery charge efficiency
  double eta_dis = 0.95; // battery discharge efficiency

  double cop_supply_temp = 45.0;  // degC
  double cop_quality = 0.4;       // Carnot quality factor
  double cop_max = 6.0;

  double c_slack = 10.0;  // EUR/kWh value of lost load

  /// Annuity present value factor: interest 0 gives 1/years, otherwise the
  /// standard annuity r / (1 - (1+r)^-n).
  double apvf() const;

  void validate() const;  // throws InvalidParamsError
};

struct GridLimit {
  double c_lim = 0.0;  // kW, maximum hourly grid purchase

  void validate() const;  // throws InvalidParamsError
};

/// One representative period and the number of source days it stands for.
/// Weight 0 marks a feasibility-step extreme: it contributes constraint rows
/// but nothing to the objective.
struct WeightedPeriod {
  Period period;
  double weight = 1.0;
};

struct RepresentativeSet {
  std::vector<WeightedPeriod> periods;

  double total_weight() const;
};

/// The five sizing decisions, in the fixed order used by the LP layout.
struct DesignVariables {
  double p_hp = 0.0;   // kW thermal
  double p_eh = 0.0;   // kW thermal
  double p_pv = 0.0;   // kW electric
  double p_bat = 0.0;  // kW
  double e_bat = 0.0;  // kWh
};

/// Hourly operating decisions of one period at an optimum.
struct PeriodOperation {
  int day_index = 0;
  double weight = 1.0;
  std::vector<double> e_buy, pv_gen, e_in, e_out, stor_lev, e_eh_el, e_hp_el;
  std::vector<double> e_slack_el, q_slack_heat;  // empty when slack is off
};

struct OperationProfile {
  std::vector<PeriodOperation> periods;
};

struct CostBreakdown {
  double total = 0.0;
  double capex_share = 0.0;
  double opex_share = 0.0;  // weighted purchases plus any slack penalty
};

enum class DesignVar : int { PHp = 0, PEh = 1, PPv = 2, PBat = 3, EBat = 4 };

enum class OpVar : int {
  EBuy = 0,
  PvGen = 1,
  EIn = 2,
  EOut = 3,
  StorLev = 4,
  EEhEl = 5,
  EHpEl = 6,
  ESlackEl = 7,
  QSlackHeat = 8,
};

/// A built LP together with the index maps needed to read solutions back.
/// Design problems put the five design variables first; every period then
/// contributes one block of operating variables per hour.
struct ResysProblem {
  lp::LinearProgram lp;
  bool is_design = false;
  bool slack = false;
  int n_periods = 0;
  int hours_per_day = 0;
  std::vector<double> weights;
  std::vector<int> day_indices;

  int vars_per_hour() const { return slack ? 9 : 7; }
  int design_var(DesignVar v) const;             // throws NotADesignProblem
  int op_var(int period, int hour, OpVar v) const;
};

/// cop(t) = min(cop_max, cop_quality * (T_sup + 273.15) / (T_sup - T_amb)).
/// Throws SupplyTempExceeded when any ambient value reaches the supply
/// temperature and InvalidParamsError if the formula dips below 1.
std::vector<double> cop_profile(const std::vector<double>& t_ambient,
                                const TechnologyParams& params);

/// Design problem: sizing plus operation of every representative period,
/// weighted by represented days. With slack on, unmet electricity and heat
/// are priced at c_slack inside the weighted operating cost.
ResysProblem build_design_problem(const RepresentativeSet& repr, const TechnologyParams& params,
                                  const GridLimit& grid, bool slack);

/// Operations problem: the same constraint structure with the design fixed,
/// every period at weight 1. Capacity rows collapse into variable bounds.
ResysProblem build_operations_problem(const DesignVariables& dv,
                                      const std::vector<Period>& periods,
                                      const TechnologyParams& params, const GridLimit& grid,
                                      bool slack);
ResysProblem build_operations_problem(const DesignVariables& dv, const Dataset& data,
                                      const TechnologyParams& params, const GridLimit& grid,
                                      bool slack);
ResysProblem build_operations_problem(const DesignVariables& dv, const Period& period,
                                      const TechnologyParams& params, const GridLimit& grid,
                                      bool slack);

DesignVariables extract_design(const ResysProblem& problem, const lp::LpSolution& solution);

OperationProfile operation_profile(const ResysProblem& problem, const lp::LpSolution& solution);

/// Shares of annualized investment vs. operating cost in the optimal total.
/// Throws ZeroTotalCost when the optimum is (numerically) free.
CostBreakdown cost_breakdown(const ResysProblem& problem, const lp::LpSolution& solution);

}  // namespace repday::resys

#endif  // REPDAY_RESYS_HPP
