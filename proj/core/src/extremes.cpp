#include "repday/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace repday::extremes {

namespace {

int require_attribute(const Dataset& data, const std::string& name) {
  const int idx = data.attribute_index(name);
  if (idx < 0) throw MissingAttribute("dataset has no attribute '" + name + "'");
  return idx;
}

bool contains_day(const std::vector<ExtremeDay>& days, int day_index) {
  for (const auto& d : days) {
    if (d.day_index == day_index) return true;
  }
  return false;
}

/// Deduplicated real day indices in first-seen order. Virtual entries are
/// rejected: they have no source day in the data.
std::vector<int> real_day_indices(const std::vector<ExtremeDay>& days, int n_days) {
  std::vector<int> out;
  out.reserve(days.size());
  for (const auto& d : days) {
    if (d.day_index == kVirtualDay) {
      throw std::invalid_argument(
          "virtual days have no source day; pass their Period explicitly");
    }
    if (d.day_index < 0 || d.day_index >= n_days) {
      throw std::out_of_range("extreme day index " + std::to_string(d.day_index) +
                              " outside dataset of " + std::to_string(n_days) + " days");
    }
    if (std::find(out.begin(), out.end(), d.day_index) == out.end()) {
      out.push_back(d.day_index);
    }
  }
  return out;
}

std::vector<Period> normalized_periods(const Dataset& z) {
  std::vector<Period> periods;
  periods.reserve(static_cast<size_t>(z.n_days()));
  for (int d = 0; d < z.n_days(); ++d) periods.push_back(z.day(d));
  return periods;
}

ClusterResult cluster_full(const Dataset& data,
                                       const KMeansConfig& config) {
  auto [z, stats] = z_normalize(data);
  (void)stats;
  return kmeans_multistart(normalized_periods(z), config);
}

void check_limits(const SelectionLimits& limits) {
  if (limits.max_extremes < 0) throw std::invalid_argument("max_extremes must be >= 0");
  if (!(limits.slack_tol >= 0.0)) throw std::invalid_argument("slack_tol must be >= 0");
}

}  // namespace

std::vector<ExtremeDay> select_simple(const Dataset& data) {
  require_attribute(data, attr::el_demand);
  require_attribute(data, attr::heat_demand);
  require_attribute(data, attr::solar_cf);
  const int d_el = attribute_extremum(data, attr::el_demand, ExtremumStatistic::Absolute,
                                      ExtremumDirection::Max);
  const int d_heat = attribute_extremum(data, attr::heat_demand, ExtremumStatistic::Absolute,
                                        ExtremumDirection::Max);
  const int d_solar = attribute_extremum(data, attr::solar_cf, ExtremumStatistic::Integral,
                                         ExtremumDirection::Min);
  std::vector<ExtremeDay> out;
  for (int d : {d_el, d_heat, d_solar}) {
    if (!contains_day(out, d)) out.push_back({d, ExtremeSource::Statistical, 0});
  }
  return out;
}

Period make_virtual_day(const Dataset& data, const std::vector<ExtremeSpec>& specs) {
  if (data.n_attributes() == 0 || data.n_days() == 0) {
    throw MissingAttribute("cannot build a virtual day from an empty dataset");
  }
  const auto names = data.attribute_names();
  const int n_attr = data.n_attributes();
  std::vector<int> source(static_cast<size_t>(n_attr), -1);
  std::vector<char> specified(static_cast<size_t>(n_attr), 0);
  for (const auto& spec : specs) {
    const int idx = require_attribute(data, spec.attribute);
    if (specified[static_cast<size_t>(idx)]) {
      throw DuplicateAttributeSpec("attribute '" + spec.attribute + "' specified twice");
    }
    specified[static_cast<size_t>(idx)] = 1;
    source[static_cast<size_t>(idx)] =
        attribute_extremum(data, spec.attribute, spec.statistic, spec.direction);
  }
  for (int a = 0; a < n_attr; ++a) {
    if (specified[static_cast<size_t>(a)]) continue;
    const std::string& name = names[static_cast<size_t>(a)];
    if (name == attr::el_demand || name == attr::heat_demand) {
      source[static_cast<size_t>(a)] =
          attribute_extremum(data, name, ExtremumStatistic::Absolute, ExtremumDirection::Max);
    } else if (name == attr::solar_cf) {
      source[static_cast<size_t>(a)] =
          attribute_extremum(data, name, ExtremumStatistic::Integral, ExtremumDirection::Min);
    } else if (name == attr::el_price) {
      source[static_cast<size_t>(a)] =
          attribute_extremum(data, name, ExtremumStatistic::Integral, ExtremumDirection::Max);
    } else if (name == attr::t_ambient) {
      // The cold snap that drives peak heat demand; keeps temperature and
      // heat profile physically consistent in the spliced day.
      require_attribute(data, attr::heat_demand);
      source[static_cast<size_t>(a)] = attribute_extremum(
          data, attr::heat_demand, ExtremumStatistic::Absolute, ExtremumDirection::Max);
    } else {
      throw std::invalid_argument("no default extreme rule for attribute '" + name +
                                  "'; provide an ExtremeSpec for it");
    }
  }
  Period out;
  out.day_index = kVirtualDay;
  out.attribute_names = names;
  const int hours = data.hours_per_day();
  out.matrix.assign(static_cast<size_t>(n_attr),
                    std::vector<double>(static_cast<size_t>(hours), 0.0));
  for (int a = 0; a < n_attr; ++a) {
    for (int h = 0; h < hours; ++h) {
      out.matrix[static_cast<size_t>(a)][static_cast<size_t>(h)] =
          data.value(a, source[static_cast<size_t>(a)], h);
    }
  }
  return out;
}

resys::RepresentativeSet modify_feasibility_steps(const ClusterResult& clusters,
                                                  const Dataset& data,
                                                  const std::vector<Period>& extreme_periods) {
  const int k = static_cast<int>(clusters.centroids.size());
  if (k == 0) throw std::invalid_argument("cluster result is empty");
  if (static_cast<int>(clusters.counts.size()) != k) {
    throw std::invalid_argument("cluster result counts/centroids size mismatch");
  }
  const long long total =
      std::accumulate(clusters.counts.begin(), clusters.counts.end(), 0LL);
  if (static_cast<int>(clusters.assignments.size()) != data.n_days() ||
      total != data.n_days()) {
    throw std::invalid_argument("cluster result was not built on this dataset");
  }
  auto [z, stats] = z_normalize(data);
  (void)z;
  const auto names = data.attribute_names();
  resys::RepresentativeSet repr;
  repr.periods.reserve(static_cast<size_t>(k) + extreme_periods.size());
  for (int j = 0; j < k; ++j) {
    Period centroid = period_from_vector(clusters.centroids[static_cast<size_t>(j)], names,
                                         data.hours_per_day(), kVirtualDay);
    repr.periods.push_back({denormalize_period(centroid, stats),
                            static_cast<double>(clusters.counts[static_cast<size_t>(j)])});
  }
  for (const Period& e : extreme_periods) repr.periods.push_back({e, 0.0});
  return repr;
}

resys::RepresentativeSet modify_feasibility_steps(const ClusterResult& clusters,
                                                  const Dataset& data,
                                                  const std::vector<ExtremeDay>& extreme_days) {
  std::vector<Period> periods;
  for (int d : real_day_indices(extreme_days, data.n_days())) periods.push_back(data.day(d));
  return modify_feasibility_steps(clusters, data, periods);
}

resys::RepresentativeSet modify_append(const Dataset& data,
                                       const KMeansConfig& config,
                                       const std::vector<ExtremeDay>& extreme_days) {
  const int n = data.n_days();
  const std::vector<int> removed = real_day_indices(extreme_days, n);
  if (static_cast<int>(removed.size()) >= n - config.k) {
    throw TooManyExtremes("removing " + std::to_string(removed.size()) + " of " +
                          std::to_string(n) + " days leaves too few to cluster with k=" +
                          std::to_string(config.k));
  }
  std::vector<char> is_removed(static_cast<size_t>(n), 0);
  for (int d : removed) is_removed[static_cast<size_t>(d)] = 1;

  const int hours = data.hours_per_day();
  std::vector<AttributeProfile> reduced_attrs;
  reduced_attrs.reserve(static_cast<size_t>(data.n_attributes()));
  for (const AttributeProfile& ap : data.attributes()) {
    AttributeProfile r{ap.name, ap.unit, {}};
    r.values.reserve(static_cast<size_t>(n - static_cast<int>(removed.size())) *
                     static_cast<size_t>(hours));
    for (int d = 0; d < n; ++d) {
      if (is_removed[static_cast<size_t>(d)]) continue;
      const size_t base = static_cast<size_t>(d) * static_cast<size_t>(hours);
      r.values.insert(r.values.end(), ap.values.begin() + static_cast<long>(base),
                      ap.values.begin() + static_cast<long>(base + static_cast<size_t>(hours)));
    }
    reduced_attrs.push_back(std::move(r));
  }
  Dataset reduced(std::move(reduced_attrs), hours);

  auto [z, stats] = z_normalize(reduced);
  const auto clusters = kmeans_multistart(normalized_periods(z), config);
  const auto names = reduced.attribute_names();
  resys::RepresentativeSet repr;
  repr.periods.reserve(clusters.centroids.size() + removed.size());
  for (size_t j = 0; j < clusters.centroids.size(); ++j) {
    Period centroid = period_from_vector(clusters.centroids[j], names, hours, kVirtualDay);
    repr.periods.push_back(
        {denormalize_period(centroid, stats), static_cast<double>(clusters.counts[j])});
  }
  for (int d : removed) repr.periods.push_back({data.day(d), 1.0});
  return repr;
}

namespace {

resys::RepresentativeSet build_representatives(ModificationMode mode,
                                               const ClusterResult& base,
                                               const Dataset& data,
                                               const KMeansConfig& config,
                                               const std::vector<ExtremeDay>& extreme_days) {
  if (mode == ModificationMode::FeasibilitySteps) {
    return modify_feasibility_steps(base, data, extreme_days);
  }
  return modify_append(data, config, extreme_days);
}

}  // namespace

SelectionResult iterate_feasibility(const Dataset& data, const KMeansConfig& config,
                                    const resys::TechnologyParams& params,
                                    const resys::GridLimit& grid, ModificationMode mode,
                                    const SelectionLimits& limits) {
  check_limits(limits);
  SelectionResult res;
  res.extreme_days = select_simple(data);
  if (static_cast<int>(res.extreme_days.size()) > limits.max_extremes) {
    throw MaxExtremesExceeded("the statistical seeds alone exceed max_extremes=" +
                              std::to_string(limits.max_extremes));
  }
  ClusterResult base;
  if (mode == ModificationMode::FeasibilitySteps) base = cluster_full(data, config);

  for (int iter = 1;; ++iter) {
    IterationLog log;
    log.iteration = iter;
    log.n_extremes = static_cast<int>(res.extreme_days.size());
    const auto repr = build_representatives(mode, base, data, config, res.extreme_days);
    const auto o_init = resys::build_design_problem(repr, params, grid, /*slack=*/false);
    const auto init_sol = lp::solve(o_init.lp);
    if (init_sol.status != lp::SolveStatus::Optimal) {
      log.o_init_objective = std::numeric_limits<double>::infinity();
      log.o_op_status = init_sol.status;
      res.iterations.push_back(log);
      res.converged = false;
      return res;
    }
    log.o_init_objective = init_sol.objective;
    const auto dv = resys::extract_design(o_init, init_sol);

    // Periods are independent under the cyclic battery, so fixed-design
    // operations over the full series decompose into one LP per day.
    int add = -1;
    bool any_infeasible = false;
    for (int d = 0; d < data.n_days(); ++d) {
      const auto daily =
          resys::build_operations_problem(dv, data.day(d), params, grid, /*slack=*/false);
      const auto sol = lp::solve(daily.lp);
      if (sol.status != lp::SolveStatus::Optimal) {
        any_infeasible = true;
        if (add < 0 && !contains_day(res.extreme_days, d)) add = d;
      }
    }
    log.o_op_status =
        any_infeasible ? lp::SolveStatus::Infeasible : lp::SolveStatus::Optimal;
    if (!any_infeasible) {
      res.iterations.push_back(log);
      res.converged = true;
      res.final_design = dv;
      res.final_objective = init_sol.objective;
      return res;
    }
    if (add < 0) {
      res.iterations.push_back(log);
      throw NoProgress("every operationally infeasible day is already selected");
    }
    log.added_day = add;
    res.iterations.push_back(log);
    if (static_cast<int>(res.extreme_days.size()) >= limits.max_extremes) {
      throw MaxExtremesExceeded("feasibility loop needs more than max_extremes=" +
                                std::to_string(limits.max_extremes) + " extreme days");
    }
    res.extreme_days.push_back({add, ExtremeSource::Feasibility, iter});
  }
}

SelectionResult iterate_slack(const Dataset& data, const KMeansConfig& config,
                              const resys::TechnologyParams& params,
                              const resys::GridLimit& grid, ModificationMode mode,
                              const SelectionLimits& limits) {
  check_limits(limits);
  SelectionResult res;
  if (limits.seed_simple) {
    res.extreme_days = select_simple(data);
    if (static_cast<int>(res.extreme_days.size()) > limits.max_extremes) {
      throw MaxExtremesExceeded("the statistical seeds alone exceed max_extremes=" +
                                std::to_string(limits.max_extremes));
    }
  } else {
    require_attribute(data, attr::el_demand);
    require_attribute(data, attr::heat_demand);
  }
  ClusterResult base;
  if (mode == ModificationMode::FeasibilitySteps) base = cluster_full(data, config);

  const int n = data.n_days();
  for (int iter = 1;; ++iter) {
    IterationLog log;
    log.iteration = iter;
    log.n_extremes = static_cast<int>(res.extreme_days.size());
    const auto repr = build_representatives(mode, base, data, config, res.extreme_days);
    const auto o_init = resys::build_design_problem(repr, params, grid, /*slack=*/false);
    const auto init_sol = lp::solve(o_init.lp);
    if (init_sol.status != lp::SolveStatus::Optimal) {
      log.o_init_objective = std::numeric_limits<double>::infinity();
      log.o_op_status = init_sol.status;
      res.iterations.push_back(log);
      res.converged = false;
      return res;
    }
    log.o_init_objective = init_sol.objective;
    const auto dv = resys::extract_design(o_init, init_sol);

    std::vector<double> heat_by_day(static_cast<size_t>(n), 0.0);
    std::vector<double> el_by_day(static_cast<size_t>(n), 0.0);
    for (int d = 0; d < n; ++d) {
      const auto daily =
          resys::build_operations_problem(dv, data.day(d), params, grid, /*slack=*/true);
      const auto sol = lp::solve(daily.lp);
      if (sol.status != lp::SolveStatus::Optimal) {
        throw lp::NumericalBreakdown("slack-relaxed day " + std::to_string(d) +
                                     " did not solve to optimality");
      }
      double heat_max = 0.0;
      double el_max = 0.0;
      for (int t = 0; t < data.hours_per_day(); ++t) {
        heat_max = std::max(
            heat_max,
            sol.primal[static_cast<size_t>(daily.op_var(0, t, resys::OpVar::QSlackHeat))]);
        el_max = std::max(
            el_max,
            sol.primal[static_cast<size_t>(daily.op_var(0, t, resys::OpVar::ESlackEl))]);
      }
      heat_by_day[static_cast<size_t>(d)] = heat_max;
      el_by_day[static_cast<size_t>(d)] = el_max;
    }
    const double max_heat = *std::max_element(heat_by_day.begin(), heat_by_day.end());
    const double max_el = *std::max_element(el_by_day.begin(), el_by_day.end());
    log.max_heat_slack = max_heat;
    log.max_el_slack = max_el;
    log.o_op_status = lp::SolveStatus::Optimal;

    if (max_heat <= limits.slack_tol && max_el <= limits.slack_tol) {
      res.iterations.push_back(log);
      res.converged = true;
      res.final_design = dv;
      res.final_objective = init_sol.objective;
      return res;
    }
    // Heat shortfalls first: unmet heat means the design simply lacks
    // capacity, while electricity slack can also reflect the grid limit.
    const bool use_heat = max_heat > limits.slack_tol;
    const auto& by_day = use_heat ? heat_by_day : el_by_day;
    int add = -1;
    double best = limits.slack_tol;
    for (int d = 0; d < n; ++d) {
      if (contains_day(res.extreme_days, d)) continue;
      if (by_day[static_cast<size_t>(d)] > best) {
        best = by_day[static_cast<size_t>(d)];
        add = d;
      }
    }
    if (add < 0) {
      res.iterations.push_back(log);
      throw NoProgress(std::string("all days with ") + (use_heat ? "heat" : "electricity") +
                       " slack above tolerance are already selected");
    }
    log.added_day = add;
    res.iterations.push_back(log);
    if (static_cast<int>(res.extreme_days.size()) >= limits.max_extremes) {
      throw MaxExtremesExceeded("slack loop needs more than max_extremes=" +
                                std::to_string(limits.max_extremes) + " extreme days");
    }
    res.extreme_days.push_back(
        {add, use_heat ? ExtremeSource::SlackHeat : ExtremeSource::SlackEl, iter});
  }
}

}  // namespace repday::extremes
