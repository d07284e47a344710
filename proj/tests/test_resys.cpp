#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "repday/lp.hpp"
#include "repday/resys.hpp"
#include "repday/timeseries.hpp"

using namespace repday;
using resys::DesignVariables;
using resys::GridLimit;
using resys::RepresentativeSet;
using resys::TechnologyParams;

namespace {

Period make_period(int day, std::vector<double> el, std::vector<double> heat,
                   std::vector<double> temp, std::vector<double> solar,
                   std::vector<double> price) {
  Period p;
  p.day_index = day;
  p.attribute_names = {attr::el_demand, attr::heat_demand, attr::t_ambient, attr::solar_cf,
                       attr::el_price};
  p.matrix = {std::move(el), std::move(heat), std::move(temp), std::move(solar),
              std::move(price)};
  return p;
}

Period constant_period(int day, int hours, double el, double heat, double temp, double solar,
                       double price) {
  return make_period(day, std::vector<double>(hours, el), std::vector<double>(hours, heat),
                     std::vector<double>(hours, temp), std::vector<double>(hours, solar),
                     std::vector<double>(hours, price));
}

// Two mild six-hour days used by the round-trip tests.
std::vector<Period> sample_days() {
  Period d0 = make_period(0, {0.4, 0.5, 0.6, 0.8, 1.0, 0.7}, {1.0, 0.8, 0.6, 0.9, 1.2, 1.1},
                          {2, 1, 0, 1, 3, 2}, {0.0, 0.2, 0.6, 0.7, 0.3, 0.0},
                          {0.30, 0.25, 0.20, 0.22, 0.35, 0.40});
  Period d1 = make_period(1, {0.52, 0.65, 0.78, 1.04, 1.3, 0.91},
                          {0.7, 0.56, 0.42, 0.63, 0.84, 0.77}, {10, 9, 8, 9, 11, 10},
                          {0.0, 0.16, 0.48, 0.56, 0.24, 0.0}, {0.30, 0.25, 0.20, 0.22, 0.35, 0.40});
  return {d0, d1};
}

}  // namespace

TEST_CASE("technology parameters") {
  SUBCASE("apvf") {
    TechnologyParams p;
    CHECK(p.apvf() == 0.2);  // interest 0: 1 / 5 years
    p.interest_rate = 0.05;
    // Standard 5%/5yr annuity factor.
    CHECK(p.apvf() == doctest::Approx(0.230974798).epsilon(1e-9));
  }
  SUBCASE("validation") {
    TechnologyParams p;
    p.capex_pv = -1.0;
    CHECK_THROWS_AS(p.validate(), resys::InvalidParamsError);
    p = {};
    p.eta_ch = 0.0;
    CHECK_THROWS_AS(p.validate(), resys::InvalidParamsError);
    p = {};
    p.eta_dis = 1.2;
    CHECK_THROWS_AS(p.validate(), resys::InvalidParamsError);
    p = {};
    p.amortization_years = 0;
    CHECK_THROWS_AS(p.validate(), resys::InvalidParamsError);
    p = {};
    p.interest_rate = -0.1;
    CHECK_THROWS_AS(p.validate(), resys::InvalidParamsError);
    CHECK_THROWS_AS(GridLimit{-1.0}.validate(), resys::InvalidParamsError);
    CHECK_NOTHROW(GridLimit{0.0}.validate());
  }
}

TEST_CASE("cop_profile") {
  const TechnologyParams p;
  SUBCASE("hand values") {
    // 0.4 * (45 + 273.15) / (45 - (-5)) = 127.26 / 50
    const std::vector<double> cop = resys::cop_profile({-5.0}, p);
    CHECK(cop[0] == doctest::Approx(2.5452).epsilon(1e-12));
    // Formula value 25.452 clips at cop_max.
    CHECK(resys::cop_profile({40.0}, p)[0] == 6.0);
  }
  SUBCASE("monotone non-decreasing in ambient temperature") {
    std::vector<double> grid;
    for (double t = -20.0; t <= 40.0; t += 1.0) grid.push_back(t);
    const std::vector<double> cop = resys::cop_profile(grid, p);
    for (size_t i = 1; i < cop.size(); ++i) CHECK(cop[i] >= cop[i - 1]);
    for (double c : cop) CHECK(c >= 1.0);
  }
  SUBCASE("ambient at or above supply temperature") {
    CHECK_THROWS_AS(resys::cop_profile({45.0}, p), resys::SupplyTempExceeded);
    CHECK_THROWS_AS(resys::cop_profile({10.0, 50.0}, p), resys::SupplyTempExceeded);
  }
  SUBCASE("COP below 1 rejected") {
    CHECK_THROWS_AS(resys::cop_profile({-100.0}, p), resys::InvalidParamsError);
  }
}

TEST_CASE("design problem: hand-solved heating instance") {
  // One representative day standing for 365 days: constant 2 kW heat, no
  // electricity demand, no sun, flat price 0.3. Ambient is chosen so the COP
  // is exactly 0.4*318.15/50.904 = 2.5. Serving heat by heat pump costs
  // 0.2*900 = 180 EUR/yr/kW capex plus 0.3/2.5 = 0.12 EUR/kWh electricity;
  // the electric heater (10 EUR/yr/kW + 0.3 EUR/kWh) loses at this
  // utilization, and PV/battery buy nothing under a flat price with no sun.
  // Optimum: p_hp = 2, e_hp_el = 0.8 kWh/h, objective
  // 2*180 + 0.8*24*365*0.3 = 2462.4 EUR/yr.
  const double t_amb = 45.0 - 127.26 / 2.5;
  RepresentativeSet repr;
  repr.periods.push_back({constant_period(0, 24, 0.0, 2.0, t_amb, 0.0, 0.3), 365.0});
  const TechnologyParams params;
  const resys::ResysProblem prob =
      resys::build_design_problem(repr, params, GridLimit{5.0}, /*slack=*/false);
  const lp::LpSolution sol = lp::solve(prob.lp);
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2462.4).epsilon(1e-9));
  CHECK(lp::verify_optimality(prob.lp, sol).ok(1e-6));

  const DesignVariables dv = resys::extract_design(prob, sol);
  CHECK(dv.p_hp == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(dv.p_eh) <= 1e-9);
  CHECK(std::abs(dv.p_pv) <= 1e-9);
  CHECK(std::abs(dv.p_bat) <= 1e-9);
  CHECK(std::abs(dv.e_bat) <= 1e-9);

  const resys::OperationProfile profile = resys::operation_profile(prob, sol);
  REQUIRE(profile.periods.size() == 1);
  for (double v : profile.periods[0].e_hp_el) CHECK(v == doctest::Approx(0.8).epsilon(1e-9));
  for (double v : profile.periods[0].e_buy) CHECK(v == doctest::Approx(0.8).epsilon(1e-9));

  const resys::CostBreakdown cb = resys::cost_breakdown(prob, sol);
  CHECK(cb.total == doctest::Approx(2462.4).epsilon(1e-9));
  CHECK(cb.capex_share == doctest::Approx(360.0 / 2462.4).epsilon(1e-9));
  CHECK(cb.capex_share + cb.opex_share == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("design problem: null system") {
  RepresentativeSet repr;
  repr.periods.push_back({constant_period(0, 4, 0.0, 0.0, 5.0, 0.5, 0.2), 10.0});
  const resys::ResysProblem prob =
      resys::build_design_problem(repr, TechnologyParams{}, GridLimit{5.0}, false);
  const lp::LpSolution sol = lp::solve(prob.lp);
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  CHECK(sol.objective == 0.0);
  const DesignVariables dv = resys::extract_design(prob, sol);
  CHECK(std::abs(dv.p_hp) <= 1e-12);
  CHECK(std::abs(dv.e_bat) <= 1e-12);
  CHECK_THROWS_AS(resys::cost_breakdown(prob, sol), resys::ZeroTotalCost);
}

TEST_CASE("grid limit zero") {
  const Period day = constant_period(0, 3, 0.5, 1.0, 5.0, 0.0, 0.3);
  const TechnologyParams params;
  SUBCASE("operations, zero design, slack on: slack carries all demand") {
    const resys::ResysProblem prob =
        resys::build_operations_problem(DesignVariables{}, day, params, GridLimit{0.0}, true);
    const lp::LpSolution sol = lp::solve(prob.lp);
    REQUIRE(sol.status == lp::SolveStatus::Optimal);
    // c_slack * (3*0.5 + 3*1.0) = 10 * 4.5
    CHECK(sol.objective == doctest::Approx(45.0).epsilon(1e-9));
    const resys::OperationProfile profile = resys::operation_profile(prob, sol);
    for (double v : profile.periods[0].e_slack_el) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
    for (double v : profile.periods[0].q_slack_heat) {
      CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("operations, zero design, slack off: infeasible") {
    const resys::ResysProblem prob =
        resys::build_operations_problem(DesignVariables{}, day, params, GridLimit{0.0}, false);
    CHECK(lp::solve(prob.lp).status == lp::SolveStatus::Infeasible);
  }
  SUBCASE("design, slack off, no sun: infeasible") {
    RepresentativeSet repr;
    repr.periods.push_back({day, 5.0});
    const resys::ResysProblem prob =
        resys::build_design_problem(repr, params, GridLimit{0.0}, false);
    CHECK(lp::solve(prob.lp).status == lp::SolveStatus::Infeasible);
  }
  SUBCASE("design, slack on: always feasible") {
    RepresentativeSet repr;
    repr.periods.push_back({constant_period(0, 3, 50.0, 80.0, 5.0, 0.0, 0.3), 5.0});
    const resys::ResysProblem prob = resys::build_design_problem(repr, params, GridLimit{0.0}, true);
    CHECK(lp::solve(prob.lp).status == lp::SolveStatus::Optimal);
  }
}

TEST_CASE("design/operations round trip on two days") {
  const std::vector<Period> days = sample_days();
  RepresentativeSet repr;
  for (const Period& p : days) repr.periods.push_back({p, 1.0});
  const TechnologyParams params;
  const GridLimit grid{5.0};

  const resys::ResysProblem design = resys::build_design_problem(repr, params, grid, false);
  const lp::LpSolution dsol = lp::solve(design.lp);
  REQUIRE(dsol.status == lp::SolveStatus::Optimal);
  CHECK(lp::verify_optimality(design.lp, dsol).ok(1e-6));
  const DesignVariables dv = resys::extract_design(design, dsol);
  const resys::CostBreakdown cb = resys::cost_breakdown(design, dsol);

  SUBCASE("operations under the optimal design reproduce the operating cost") {
    const resys::ResysProblem ops = resys::build_operations_problem(dv, days, params, grid, false);
    const lp::LpSolution osol = lp::solve(ops.lp);
    REQUIRE(osol.status == lp::SolveStatus::Optimal);
    const double design_opex = cb.total * cb.opex_share;
    CHECK(osol.objective == doctest::Approx(design_opex).epsilon(1e-6));
  }
  SUBCASE("slack stays at zero under a feasible design") {
    const resys::ResysProblem ops = resys::build_operations_problem(dv, days, params, grid, true);
    const lp::LpSolution osol = lp::solve(ops.lp);
    REQUIRE(osol.status == lp::SolveStatus::Optimal);
    const resys::OperationProfile profile = resys::operation_profile(ops, osol);
    for (const resys::PeriodOperation& op : profile.periods) {
      for (double v : op.e_slack_el) CHECK(std::abs(v) <= 1e-7);
      for (double v : op.q_slack_heat) CHECK(std::abs(v) <= 1e-7);
    }
  }
  SUBCASE("dataset overload matches the period-list overload") {
    std::vector<AttributeProfile> attrs;
    const std::vector<std::string> names = {attr::el_demand, attr::heat_demand, attr::t_ambient,
                                            attr::solar_cf, attr::el_price};
    for (size_t a = 0; a < names.size(); ++a) {
      AttributeProfile ap;
      ap.name = names[a];
      ap.unit = "-";
      for (const Period& p : days) {
        const std::vector<double>& row = p.row(names[a]);
        ap.values.insert(ap.values.end(), row.begin(), row.end());
      }
      attrs.push_back(std::move(ap));
    }
    const Dataset data(std::move(attrs), 6);
    const resys::ResysProblem ops_ds = resys::build_operations_problem(dv, data, params, grid, false);
    const resys::ResysProblem ops_pl = resys::build_operations_problem(dv, days, params, grid, false);
    CHECK(ops_ds.n_periods == 2);
    CHECK(lp::solve(ops_ds.lp).objective ==
          doctest::Approx(lp::solve(ops_pl.lp).objective).epsilon(1e-12));
  }
  SUBCASE("energy balances hold at the optimum") {
    const resys::OperationProfile profile = resys::operation_profile(design, dsol);
    const DesignVariables d = dv;
    for (size_t j = 0; j < profile.periods.size(); ++j) {
      const resys::PeriodOperation& op = profile.periods[j];
      const std::vector<double>& el = days[j].row(attr::el_demand);
      for (size_t t = 0; t < op.e_buy.size(); ++t) {
        const double residual = op.e_buy[t] + op.pv_gen[t] + op.e_out[t] - op.e_in[t] -
                                op.e_eh_el[t] - op.e_hp_el[t] - el[t];
        CHECK(std::abs(residual) <= 1e-6);
        const size_t next = (t + 1) % op.stor_lev.size();
        const double bat = op.stor_lev[next] - op.stor_lev[t] - params.eta_ch * op.e_in[t] +
                           op.e_out[t] / params.eta_dis;
        CHECK(std::abs(bat) <= 1e-7);
        CHECK(op.stor_lev[t] <= d.e_bat + 1e-7);
      }
    }
  }
}

TEST_CASE("design objective is non-increasing in the grid limit") {
  const std::vector<Period> days = sample_days();
  RepresentativeSet repr;
  for (const Period& p : days) repr.periods.push_back({p, 1.0});
  const TechnologyParams params;
  double previous = lp::kInfinity;
  for (double lim : {1.0, 2.0, 5.84}) {
    const resys::ResysProblem prob =
        resys::build_design_problem(repr, params, GridLimit{lim}, false);
    const lp::LpSolution sol = lp::solve(prob.lp);
    REQUIRE(sol.status == lp::SolveStatus::Optimal);
    CHECK(sol.objective <= previous + 1e-9);
    previous = sol.objective;
  }
}

TEST_CASE("zero-weight periods") {
  const std::vector<Period> days = sample_days();
  Period hard = days[0];
  for (double& v : hard.matrix[1]) v *= 3.0;  // triple the heat demand
  hard.day_index = 7;

  RepresentativeSet base;
  base.periods.push_back({days[0], 2.0});
  base.periods.push_back({days[1], 3.0});
  RepresentativeSet extended = base;
  extended.periods.push_back({hard, 0.0});

  const TechnologyParams params;
  const GridLimit grid{5.0};
  const resys::ResysProblem pa = resys::build_design_problem(base, params, grid, false);
  const resys::ResysProblem pb = resys::build_design_problem(extended, params, grid, false);
  const lp::LpSolution sa = lp::solve(pa.lp);
  const lp::LpSolution sb = lp::solve(pb.lp);
  REQUIRE(sa.status == lp::SolveStatus::Optimal);
  REQUIRE(sb.status == lp::SolveStatus::Optimal);

  SUBCASE("extra constraints never decrease the objective") {
    CHECK(sb.objective >= sa.objective - 1e-9);
  }
  SUBCASE("zero-weight rows do not touch existing objective coefficients") {
    for (int j = 0; j < 2; ++j) {
      for (int t = 0; t < 6; ++t) {
        const int va = pa.op_var(j, t, resys::OpVar::EBuy);
        const int vb = pb.op_var(j, t, resys::OpVar::EBuy);
        CHECK(pa.lp.variable(va).cost == pb.lp.variable(vb).cost);
      }
    }
    // The zero-weight period's purchases carry no cost at all.
    for (int t = 0; t < 6; ++t) {
      CHECK(pb.lp.variable(pb.op_var(2, t, resys::OpVar::EBuy)).cost == 0.0);
    }
  }
}

TEST_CASE("battery pays off under a strong price spread") {
  // Cheap night, dear day, all demand in the dear hours, no sun or heat: the
  // only way to cut cost is to shift purchases through the battery.
  RepresentativeSet repr;
  repr.periods.push_back({make_period(0, {0.0, 0.0, 1.0, 1.0}, {0, 0, 0, 0}, {10, 10, 10, 10},
                                      {0, 0, 0, 0}, {0.05, 0.05, 1.0, 1.0}),
                          365.0});
  const resys::ResysProblem prob =
      resys::build_design_problem(repr, TechnologyParams{}, GridLimit{10.0}, false);
  const lp::LpSolution sol = lp::solve(prob.lp);
  REQUIRE(sol.status == lp::SolveStatus::Optimal);
  const DesignVariables dv = resys::extract_design(prob, sol);
  CHECK(dv.p_bat > 0.5);
  CHECK(dv.e_bat > 1.0);
  CHECK(sol.objective < 300.0);  // direct purchase would cost 2*1.0*365 = 730
  const resys::OperationProfile profile = resys::operation_profile(prob, sol);
  for (double lev : profile.periods[0].stor_lev) CHECK(lev <= dv.e_bat + 1e-7);
}

TEST_CASE("model validation errors") {
  const Period day = constant_period(0, 3, 0.5, 1.0, 5.0, 0.0, 0.3);
  const TechnologyParams params;
  SUBCASE("empty and zero-weight sets") {
    CHECK_THROWS_AS(resys::build_design_problem(RepresentativeSet{}, params, GridLimit{1.0}, false),
                    resys::EmptyRepresentativeSet);
    RepresentativeSet zero;
    zero.periods.push_back({day, 0.0});
    CHECK_THROWS_AS(resys::build_design_problem(zero, params, GridLimit{1.0}, false),
                    resys::EmptyRepresentativeSet);
  }
  SUBCASE("negative weight") {
    RepresentativeSet bad;
    bad.periods.push_back({day, -1.0});
    CHECK_THROWS_AS(resys::build_design_problem(bad, params, GridLimit{1.0}, false),
                    resys::InvalidParamsError);
  }
  SUBCASE("negative design variable") {
    DesignVariables dv;
    dv.p_hp = -0.5;
    CHECK_THROWS_AS(resys::build_operations_problem(dv, day, params, GridLimit{1.0}, false),
                    resys::InvalidParamsError);
  }
  SUBCASE("z-scored period rejected") {
    Period z = day;
    z.matrix[0][1] = -1.2;  // negative demand
    RepresentativeSet repr;
    repr.periods.push_back({z, 1.0});
    CHECK_THROWS_AS(resys::build_design_problem(repr, params, GridLimit{1.0}, false), DatasetError);
  }
  SUBCASE("missing attribute") {
    Period broken = day;
    broken.attribute_names.pop_back();
    broken.matrix.pop_back();
    RepresentativeSet repr;
    repr.periods.push_back({broken, 1.0});
    CHECK_THROWS_AS(resys::build_design_problem(repr, params, GridLimit{1.0}, false),
                    UnknownAttributeError);
  }
  SUBCASE("mixed hour counts") {
    RepresentativeSet repr;
    repr.periods.push_back({day, 1.0});
    repr.periods.push_back({constant_period(1, 4, 0.5, 1.0, 5.0, 0.0, 0.3), 1.0});
    CHECK_THROWS_AS(resys::build_design_problem(repr, params, GridLimit{1.0}, false), DatasetError);
  }
  SUBCASE("index-map guard rails") {
    RepresentativeSet repr;
    repr.periods.push_back({day, 1.0});
    const resys::ResysProblem design = resys::build_design_problem(repr, params, GridLimit{1.0}, false);
    CHECK_THROWS_AS(design.op_var(0, 0, resys::OpVar::ESlackEl), std::out_of_range);
    CHECK_THROWS_AS(design.op_var(1, 0, resys::OpVar::EBuy), std::out_of_range);
    const resys::ResysProblem ops =
        resys::build_operations_problem(DesignVariables{}, day, params, GridLimit{1.0}, true);
    CHECK_THROWS_AS(ops.design_var(resys::DesignVar::PHp), resys::NotADesignProblem);
    const lp::LpSolution osol = lp::solve(ops.lp);
    REQUIRE(osol.status == lp::SolveStatus::Optimal);
    CHECK_THROWS_AS(resys::extract_design(ops, osol), resys::NotADesignProblem);
    CHECK_THROWS_AS(resys::cost_breakdown(ops, osol), resys::NotADesignProblem);
  }
}
