#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "repday/extremes.hpp"
#include "repday/synthgen.hpp"

using namespace repday;
using extremes::ExtremeDay;
using extremes::ExtremeSource;
using extremes::ModificationMode;

namespace {

Dataset desk_data() { return generate(desk_killer_config()); }

KMeansConfig small_kmeans(int k = 5) {
  KMeansConfig kc;
  kc.k = k;
  kc.n_init = 30;
  kc.seed = 1;
  return kc;
}

ClusterResult cluster_of(const Dataset& data, const KMeansConfig& kc) {
  auto [z, stats] = z_normalize(data);
  (void)stats;
  std::vector<Period> zp;
  for (int d = 0; d < z.n_days(); ++d) zp.push_back(z.day(d));
  return kmeans_multistart(zp, kc);
}

/// Independent re-derivation of the statistical extremes by raw scanning.
int scan_abs_max(const Dataset& data, const char* name) {
  const int a = data.attribute_index(name);
  REQUIRE(a >= 0);
  int best_day = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int d = 0; d < data.n_days(); ++d) {
    for (int h = 0; h < data.hours_per_day(); ++h) {
      if (data.value(a, d, h) > best) {
        best = data.value(a, d, h);
        best_day = d;
      }
    }
  }
  return best_day;
}

int scan_integral(const Dataset& data, const char* name, bool want_min) {
  const int a = data.attribute_index(name);
  REQUIRE(a >= 0);
  int best_day = 0;
  double best = want_min ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  for (int d = 0; d < data.n_days(); ++d) {
    double sum = 0.0;
    for (int h = 0; h < data.hours_per_day(); ++h) sum += data.value(a, d, h);
    if (want_min ? sum < best : sum > best) {
      best = sum;
      best_day = d;
    }
  }
  return best_day;
}

std::vector<int> day_list(const std::vector<ExtremeDay>& days) {
  std::vector<int> out;
  for (const auto& e : days) out.push_back(e.day_index);
  return out;
}

bool close_rel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * (1.0 + std::abs(want));
}

/// Pointwise weighted mean of the representative set against the full data.
void check_mean_preserved(const resys::RepresentativeSet& repr, const Dataset& data) {
  const int T = data.hours_per_day();
  const double n = static_cast<double>(data.n_days());
  for (int a = 0; a < data.n_attributes(); ++a) {
    const std::string name = data.attribute_names()[static_cast<size_t>(a)];
    for (int h = 0; h < T; ++h) {
      double want = 0.0;
      for (int d = 0; d < data.n_days(); ++d) want += data.value(a, d, h);
      want /= n;
      double got = 0.0;
      for (const auto& wp : repr.periods) {
        got += wp.weight * wp.period.row(name)[static_cast<size_t>(h)];
      }
      got /= n;
      CHECK(close_rel(got, want, 1e-9));
    }
  }
}

Dataset five_attr_dataset(const std::vector<std::vector<double>>& rows, int hours) {
  const char* names[] = {attr::el_demand, attr::heat_demand, attr::t_ambient, attr::solar_cf,
                         attr::el_price};
  std::vector<AttributeProfile> attrs;
  for (size_t a = 0; a < 5; ++a) attrs.push_back({names[a], "", rows[a]});
  return Dataset(std::move(attrs), hours);
}

/// Constant-profile dataset with no solar at all; at zero grid limit the
/// design problem without slack is infeasible.
Dataset no_sun_dataset(int n_days, int hours) {
  const size_t n = static_cast<size_t>(n_days) * static_cast<size_t>(hours);
  std::vector<std::vector<double>> rows(5);
  for (size_t i = 0; i < n; ++i) {
    const double wiggle = 0.01 * static_cast<double>(i % 7);
    rows[0].push_back(1.0 + wiggle);   // el
    rows[1].push_back(1.5 + wiggle);   // heat
    rows[2].push_back(5.0 - wiggle);   // t_ambient
    rows[3].push_back(0.0);            // solar
    rows[4].push_back(0.30);           // price
  }
  return five_attr_dataset(rows, hours);
}

bool day_feasible(const resys::DesignVariables& dv, const Dataset& data, int day,
                  const resys::TechnologyParams& tp, const resys::GridLimit& grid) {
  auto pr = resys::build_operations_problem(dv, data.day(day), tp, grid, false);
  return lp::solve(pr.lp).status == lp::SolveStatus::Optimal;
}

// Half the unconstrained reference peak draw of the desk dataset; tight
// enough to need storage but keeps every problem feasible with seeds.
constexpr double kDeskHalfGrid = 5.7176;

}  // namespace

TEST_CASE("simple extreme selection finds the planted days") {
  const auto data = desk_data();
  const int el_day = scan_abs_max(data, attr::el_demand);
  const int heat_day = scan_abs_max(data, attr::heat_demand);
  const int solar_day = scan_integral(data, attr::solar_cf, /*want_min=*/true);
  CHECK(el_day == 40);    // planted electricity peak
  CHECK(heat_day == 11);  // planted heat peak
  CHECK(solar_day == 11); // same day: darkest and coldest

  const auto days = extremes::select_simple(data);
  std::vector<int> expect;
  for (int d : {el_day, heat_day, solar_day}) {
    if (std::find(expect.begin(), expect.end(), d) == expect.end()) expect.push_back(d);
  }
  CHECK(day_list(days) == expect);
  CHECK(days.size() == 2);  // heat and solar extremes coincide on this data
  for (const auto& e : days) {
    CHECK(e.source == ExtremeSource::Statistical);
    CHECK(e.iteration == 0);
  }
}

TEST_CASE("simple selection deduplicates keeping first occurrence") {
  // Day 0 carries both demand peaks; day 1 is the darkest.
  const Dataset data = five_attr_dataset(
      {
          {5.0, 1.0, 1.0, /* day 1 */ 2.0, 1.0, 1.0},
          {7.0, 0.5, 0.5, /* day 1 */ 1.0, 1.0, 1.0},
          {3.0, 3.0, 3.0, /* day 1 */ 4.0, 4.0, 4.0},
          {0.5, 0.5, 0.5, /* day 1 */ 0.1, 0.1, 0.1},
          {0.3, 0.3, 0.3, /* day 1 */ 0.2, 0.2, 0.2},
      },
      3);
  const auto days = extremes::select_simple(data);
  CHECK(day_list(days) == std::vector<int>{0, 1});
}

TEST_CASE("simple selection requires the demand and solar attributes") {
  std::vector<AttributeProfile> attrs = {{attr::el_demand, "", {1.0, 2.0}},
                                         {attr::solar_cf, "", {0.1, 0.2}}};
  const Dataset data(std::move(attrs), 2);
  CHECK_THROWS_AS(extremes::select_simple(data), extremes::MissingAttribute);
}

TEST_CASE("virtual day splices per-attribute worst profiles") {
  const auto data = generate(dominance_config());
  const int heat_day = scan_abs_max(data, attr::heat_demand);
  const int el_day = scan_abs_max(data, attr::el_demand);
  const int solar_day = scan_integral(data, attr::solar_cf, true);
  const int price_day = scan_integral(data, attr::el_price, false);
  CHECK(heat_day == 10);
  CHECK(el_day == 40);
  CHECK(solar_day == 10);

  const Period v = extremes::make_virtual_day(data);
  CHECK(v.day_index == extremes::kVirtualDay);
  CHECK(v.attribute_names == data.attribute_names());
  CHECK(v.row(attr::el_demand) == data.day(el_day).row(attr::el_demand));
  CHECK(v.row(attr::heat_demand) == data.day(heat_day).row(attr::heat_demand));
  CHECK(v.row(attr::solar_cf) == data.day(solar_day).row(attr::solar_cf));
  CHECK(v.row(attr::el_price) == data.day(price_day).row(attr::el_price));
  // Temperature follows the heat peak day to stay physically consistent.
  CHECK(v.row(attr::t_ambient) == data.day(heat_day).row(attr::t_ambient));

  SUBCASE("dominates every real day pointwise in its attribute") {
    const int el = data.attribute_index(attr::el_demand);
    const int heat = data.attribute_index(attr::heat_demand);
    const int sol = data.attribute_index(attr::solar_cf);
    for (int d = 0; d < data.n_days(); ++d) {
      for (int h = 0; h < data.hours_per_day(); ++h) {
        const size_t hh = static_cast<size_t>(h);
        CHECK(v.row(attr::el_demand)[hh] >= data.value(el, d, h) - 1e-12);
        CHECK(v.row(attr::heat_demand)[hh] >= data.value(heat, d, h) - 1e-12);
        CHECK(v.row(attr::solar_cf)[hh] <= data.value(sol, d, h) + 1e-12);
      }
    }
  }
}

TEST_CASE("virtual day honours explicit specs and validates them") {
  const auto data = desk_data();

  SUBCASE("explicit spec overrides the default direction") {
    const int sunny = scan_integral(data, attr::solar_cf, false);
    const Period v = extremes::make_virtual_day(
        data, {{attr::solar_cf, ExtremumStatistic::Integral, ExtremumDirection::Max}});
    CHECK(v.row(attr::solar_cf) == data.day(sunny).row(attr::solar_cf));
    // Other attributes keep their defaults.
    CHECK(v.row(attr::heat_demand) == data.day(11).row(attr::heat_demand));
  }
  SUBCASE("duplicate attribute specs are rejected") {
    CHECK_THROWS_AS(
        extremes::make_virtual_day(
            data, {{attr::solar_cf, ExtremumStatistic::Integral, ExtremumDirection::Max},
                   {attr::solar_cf, ExtremumStatistic::Absolute, ExtremumDirection::Min}}),
        extremes::DuplicateAttributeSpec);
  }
  SUBCASE("specs must name existing attributes") {
    CHECK_THROWS_AS(extremes::make_virtual_day(
                        data, {{"wind_cf", ExtremumStatistic::Absolute, ExtremumDirection::Max}}),
                    extremes::MissingAttribute);
  }
  SUBCASE("attributes without a default rule need a spec") {
    std::vector<AttributeProfile> attrs;
    for (const auto& ap : data.attributes()) attrs.push_back(ap);
    AttributeProfile extra = attrs.front();
    extra.name = "wind_cf";
    attrs.push_back(extra);
    const Dataset with_extra(std::move(attrs), data.hours_per_day());
    CHECK_THROWS_AS(extremes::make_virtual_day(with_extra), std::invalid_argument);
    const Period v = extremes::make_virtual_day(
        with_extra, {{"wind_cf", ExtremumStatistic::Absolute, ExtremumDirection::Max}});
    CHECK(v.n_attributes() == 6);
  }
  SUBCASE("identical days collapse to that day's profile") {
    const Dataset dup = duplicated_day_dataset(1, 4);
    const Period v = extremes::make_virtual_day(dup);
    CHECK(v.matrix == dup.day(0).matrix);
  }
}

TEST_CASE("zero-weight representation keeps cluster weights and extreme days") {
  const auto data = desk_data();
  const auto kc = small_kmeans();
  const auto cl = cluster_of(data, kc);
  const std::vector<ExtremeDay> X = {{40, ExtremeSource::Statistical, 0},
                                     {11, ExtremeSource::Statistical, 0}};
  const auto repr = extremes::modify_feasibility_steps(cl, data, X);

  REQUIRE(repr.periods.size() == 7);
  double cluster_weight = 0.0;
  for (int j = 0; j < 5; ++j) {
    CHECK(repr.periods[static_cast<size_t>(j)].weight ==
          static_cast<double>(cl.counts[static_cast<size_t>(j)]));
    cluster_weight += repr.periods[static_cast<size_t>(j)].weight;
  }
  CHECK(cluster_weight == 90.0);
  CHECK(repr.total_weight() == 90.0);
  CHECK(repr.periods[5].weight == 0.0);
  CHECK(repr.periods[6].weight == 0.0);
  CHECK(repr.periods[5].period.matrix == data.day(40).matrix);
  CHECK(repr.periods[6].period.matrix == data.day(11).matrix);

  SUBCASE("weighted mean matches the full data") { check_mean_preserved(repr, data); }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(
        extremes::modify_feasibility_steps(
            cl, data, std::vector<ExtremeDay>{{extremes::kVirtualDay, ExtremeSource::Virtual, 0}}),
        std::invalid_argument);
    CHECK_THROWS_AS(extremes::modify_feasibility_steps(
                        cl, data, std::vector<ExtremeDay>{{999, ExtremeSource::Statistical, 0}}),
                    std::out_of_range);
    ClusterResult broken = cl;
    broken.counts[0] += 1;
    CHECK_THROWS_AS(extremes::modify_feasibility_steps(broken, data, X), std::invalid_argument);
    CHECK_THROWS_AS(
        extremes::modify_feasibility_steps(ClusterResult{}, data, X), std::invalid_argument);
  }
}

TEST_CASE("append representation re-clusters the remainder") {
  const auto data = desk_data();
  const auto kc = small_kmeans();
  const std::vector<ExtremeDay> X = {{11, ExtremeSource::Statistical, 0},
                                     {40, ExtremeSource::Statistical, 0}};
  const auto repr = extremes::modify_append(data, kc, X);

  REQUIRE(repr.periods.size() == 7);
  double cluster_weight = 0.0;
  for (int j = 0; j < 5; ++j) cluster_weight += repr.periods[static_cast<size_t>(j)].weight;
  CHECK(cluster_weight == 88.0);
  CHECK(repr.periods[5].weight == 1.0);
  CHECK(repr.periods[6].weight == 1.0);
  CHECK(repr.periods[5].period.matrix == data.day(11).matrix);
  CHECK(repr.periods[6].period.matrix == data.day(40).matrix);
  CHECK(repr.total_weight() == 90.0);

  SUBCASE("weighted mean matches the full data") { check_mean_preserved(repr, data); }

  SUBCASE("too many extreme days") {
    const Dataset tiny = no_sun_dataset(8, 6);
    KMeansConfig kc2 = small_kmeans(4);
    kc2.n_init = 4;
    std::vector<ExtremeDay> big;
    for (int d = 0; d < 4; ++d) big.push_back({d, ExtremeSource::Statistical, 0});
    CHECK_THROWS_AS(extremes::modify_append(tiny, kc2, big), extremes::TooManyExtremes);
    big.pop_back();
    CHECK(extremes::modify_append(tiny, kc2, big).periods.size() == 7);
  }
}

TEST_CASE("zero-weight days constrain the design without biasing cost") {
  const auto data = desk_data();
  const auto kc = small_kmeans();
  const auto cl = cluster_of(data, kc);
  const resys::TechnologyParams tp;
  const resys::GridLimit grid{kDeskHalfGrid};

  const std::vector<ExtremeDay> xa = {{40, ExtremeSource::Statistical, 0},
                                      {11, ExtremeSource::Statistical, 0}};
  const std::vector<ExtremeDay> xb = {{11, ExtremeSource::Statistical, 0},
                                      {40, ExtremeSource::Statistical, 0}};
  auto solve_with = [&](const std::vector<ExtremeDay>& x) {
    const auto repr = extremes::modify_feasibility_steps(cl, data, x);
    const auto pr = resys::build_design_problem(repr, tp, grid, false);
    const auto sol = lp::solve(pr.lp);
    REQUIRE(sol.status == lp::SolveStatus::Optimal);
    return std::make_pair(sol.objective, resys::extract_design(pr, sol));
  };
  const auto [obj_a, dv_a] = solve_with(xa);
  const auto [obj_b, dv_b] = solve_with(xb);
  // Order of the zero-weight rows cannot matter.
  CHECK(close_rel(obj_b, obj_a, 1e-9));

  // Added constraints can only raise the optimum.
  const auto [obj_none, dv_none] = solve_with({});
  CHECK(obj_a >= obj_none - 1e-9 * (1.0 + std::abs(obj_none)));

  // Every selected day is operable under the constrained design, including
  // one added on top of the seeds.
  const std::vector<ExtremeDay> xc = {{40, ExtremeSource::Statistical, 0},
                                      {11, ExtremeSource::Statistical, 0},
                                      {63, ExtremeSource::Feasibility, 1}};
  const auto [obj_c, dv_c] = solve_with(xc);
  for (int d : {40, 11, 63}) CHECK(day_feasible(dv_c, data, d, tp, grid));
  for (int d : {40, 11}) CHECK(day_feasible(dv_a, data, d, tp, grid));
}

TEST_CASE("feasibility iteration converges on the killer dataset") {
  const auto data = desk_data();
  const auto kc = small_kmeans();
  const resys::TechnologyParams tp;
  const resys::GridLimit grid{kDeskHalfGrid};

  // The clustering-only design undersizes heat capacity: the worst planted
  // day is not operable, which is exactly what the iteration must repair.
  {
    const auto cl = cluster_of(data, kc);
    const auto repr = extremes::modify_feasibility_steps(cl, data, std::vector<Period>{});
    const auto pr = resys::build_design_problem(repr, tp, grid, false);
    const auto sol = lp::solve(pr.lp);
    REQUIRE(sol.status == lp::SolveStatus::Optimal);
    const auto dv = resys::extract_design(pr, sol);
    CHECK_FALSE(day_feasible(dv, data, 11, tp, grid));
  }

  const auto res = extremes::iterate_feasibility(data, kc, tp, grid,
                                                 ModificationMode::FeasibilitySteps, {});
  CHECK(res.converged);
  CHECK(day_list(res.extreme_days) == std::vector<int>{40, 11});
  REQUIRE(!res.iterations.empty());
  const auto& last = res.iterations.back();
  CHECK(last.o_op_status == lp::SolveStatus::Optimal);
  CHECK(last.added_day == -1);
  CHECK(last.n_extremes == 2);
  CHECK(res.final_objective == last.o_init_objective);
  CHECK(res.final_design.p_hp > 0.0);
  for (int d = 0; d < data.n_days(); ++d) CHECK(day_feasible(res.final_design, data, d, tp, grid));

  SUBCASE("deterministic across runs") {
    const auto again = extremes::iterate_feasibility(data, kc, tp, grid,
                                                     ModificationMode::FeasibilitySteps, {});
    CHECK(day_list(again.extreme_days) == day_list(res.extreme_days));
    CHECK(again.final_objective == res.final_objective);
    CHECK(again.iterations.size() == res.iterations.size());
  }

  SUBCASE("append mode agrees closely") {
    const auto app =
        extremes::iterate_feasibility(data, kc, tp, grid, ModificationMode::Append, {});
    CHECK(app.converged);
    CHECK(day_list(app.extreme_days) == day_list(res.extreme_days));
    CHECK(close_rel(app.final_objective, res.final_objective, 1e-2));
    for (int d = 0; d < data.n_days(); ++d) {
      CHECK(day_feasible(app.final_design, data, d, tp, grid));
    }
  }
}

TEST_CASE("slack iteration locates under-served days") {
  const auto data = desk_data();
  const auto kc = small_kmeans();
  const resys::TechnologyParams tp;
  const resys::GridLimit grid{kDeskHalfGrid};

  const auto res =
      extremes::iterate_slack(data, kc, tp, grid, ModificationMode::FeasibilitySteps, {});
  CHECK(res.converged);
  REQUIRE(!res.extreme_days.empty());
  // The heat-starved planted day must be discovered first, by heat slack.
  CHECK(res.extreme_days.front().day_index == 11);
  CHECK(res.extreme_days.front().source == ExtremeSource::SlackHeat);
  CHECK(res.extreme_days.front().iteration == 1);

  REQUIRE(res.iterations.size() >= 2);
  CHECK(res.iterations.front().max_heat_slack > 1e-6);
  CHECK(res.iterations.front().added_day == 11);
  CHECK(res.iterations.back().max_heat_slack <= 1e-6);
  CHECK(res.iterations.back().max_el_slack <= 1e-6);
  CHECK(res.iterations.back().added_day == -1);

  // Log bookkeeping: every non-final iteration's added day appears as the
  // extreme recorded for that iteration.
  for (size_t i = 0; i + 1 < res.iterations.size(); ++i) {
    const auto& log = res.iterations[i];
    CHECK(log.iteration == static_cast<int>(i) + 1);
    bool found = false;
    for (const auto& e : res.extreme_days) {
      if (e.iteration == log.iteration && e.day_index == log.added_day) found = true;
    }
    CHECK(found);
  }

  for (int d = 0; d < data.n_days(); ++d) CHECK(day_feasible(res.final_design, data, d, tp, grid));

  SUBCASE("agrees with the feasibility method on the objective") {
    const auto fs = extremes::iterate_feasibility(data, kc, tp, grid,
                                                  ModificationMode::FeasibilitySteps, {});
    CHECK(close_rel(res.final_objective, fs.final_objective, 1e-6));
  }

  SUBCASE("optional statistical seeding") {
    extremes::SelectionLimits lim;
    lim.seed_simple = true;
    const auto seeded =
        extremes::iterate_slack(data, kc, tp, grid, ModificationMode::FeasibilitySteps, lim);
    CHECK(seeded.converged);
    REQUIRE(seeded.extreme_days.size() >= 2);
    CHECK(seeded.extreme_days[0].day_index == 40);
    CHECK(seeded.extreme_days[1].day_index == 11);
    CHECK(seeded.extreme_days[0].source == ExtremeSource::Statistical);
    CHECK(close_rel(seeded.final_objective, res.final_objective, 1e-6));
  }
}

TEST_CASE("iteration limits and bail-outs") {
  const auto data = desk_data();
  const auto kc = small_kmeans();
  const resys::TechnologyParams tp;
  const resys::GridLimit grid{kDeskHalfGrid};

  SUBCASE("seeds alone can exceed the cap") {
    extremes::SelectionLimits lim;
    lim.max_extremes = 1;
    CHECK_THROWS_AS(extremes::iterate_feasibility(data, kc, tp, grid,
                                                  ModificationMode::FeasibilitySteps, lim),
                    extremes::MaxExtremesExceeded);
    lim.seed_simple = true;
    CHECK_THROWS_AS(
        extremes::iterate_slack(data, kc, tp, grid, ModificationMode::FeasibilitySteps, lim),
        extremes::MaxExtremesExceeded);
  }

  SUBCASE("the slack loop stops instead of exceeding the cap") {
    extremes::SelectionLimits lim;
    lim.max_extremes = 0;
    CHECK_THROWS_AS(
        extremes::iterate_slack(data, kc, tp, grid, ModificationMode::FeasibilitySteps, lim),
        extremes::MaxExtremesExceeded);
  }

  SUBCASE("invalid limits") {
    extremes::SelectionLimits lim;
    lim.max_extremes = -1;
    CHECK_THROWS_AS(extremes::iterate_feasibility(data, kc, tp, grid,
                                                  ModificationMode::FeasibilitySteps, lim),
                    std::invalid_argument);
    lim.max_extremes = 30;
    lim.slack_tol = -1.0;
    CHECK_THROWS_AS(
        extremes::iterate_slack(data, kc, tp, grid, ModificationMode::FeasibilitySteps, lim),
        std::invalid_argument);
  }

  SUBCASE("an infeasible design stage ends the loop gracefully") {
    const Dataset dark = no_sun_dataset(8, 6);
    KMeansConfig kc2 = small_kmeans(2);
    kc2.n_init = 4;
    const resys::GridLimit off{0.0};
    const auto res =
        extremes::iterate_slack(dark, kc2, tp, off, ModificationMode::FeasibilitySteps, {});
    CHECK_FALSE(res.converged);
    REQUIRE(res.iterations.size() == 1);
    CHECK(std::isinf(res.iterations.front().o_init_objective));
    CHECK(std::isnan(res.final_objective));
  }
}
