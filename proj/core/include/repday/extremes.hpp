#ifndef REPDAY_EXTREMES_HPP
#define REPDAY_EXTREMES_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "repday/clustering.hpp"
#include "repday/lp.hpp"
#include "repday/resys.hpp"
#include "repday/timeseries.hpp"

namespace repday::extremes {

class MissingAttribute : public std::runtime_error {
 public:
  explicit MissingAttribute(const std::string& what) : std::runtime_error(what) {}
};

class DuplicateAttributeSpec : public std::runtime_error {
 public:
  explicit DuplicateAttributeSpec(const std::string& what) : std::runtime_error(what) {}
};

/// The loop would have to re-select a day it already holds.
class NoProgress : public std::runtime_error {
 public:
  explicit NoProgress(const std::string& what) : std::runtime_error(what) {}
};

class MaxExtremesExceeded : public std::runtime_error {
 public:
  explicit MaxExtremesExceeded(const std::string& what) : std::runtime_error(what) {}
};

class TooManyExtremes : public std::runtime_error {
 public:
  explicit TooManyExtremes(const std::string& what) : std::runtime_error(what) {}
};

/// day_index of synthetic periods (virtual days, centroids).
inline constexpr int kVirtualDay = -1;

/// Which day to take an attribute's profile from when splicing a virtual day.
struct ExtremeSpec {
  std::string attribute;
  ExtremumStatistic statistic = ExtremumStatistic::Absolute;
  ExtremumDirection direction = ExtremumDirection::Max;
};

enum class ExtremeSource { Statistical, Feasibility, SlackHeat, SlackEl, Virtual };

struct ExtremeDay {
  int day_index = 0;  // kVirtualDay marks synthetic days
  ExtremeSource source = ExtremeSource::Statistical;
  int iteration = 0;  // 0 for seeds, else the loop iteration that added it
};

enum class ModificationMode { FeasibilitySteps, Append };

struct SelectionLimits {
  int max_extremes = 30;
  double slack_tol = 1e-6;  // kWh
  bool seed_simple = false; // slack loop only; the feasibility loop always seeds
};

struct IterationLog {
  int iteration = 0;
  int n_extremes = 0;            // candidate set size used this iteration
  double o_init_objective = 0.0; // +inf when the design problem is infeasible
  lp::SolveStatus o_op_status = lp::SolveStatus::Optimal;
  double max_heat_slack = 0.0;   // slack loop only
  double max_el_slack = 0.0;     // slack loop only
  int added_day = -1;            // -1 when the loop stopped
};

struct SelectionResult {
  std::vector<ExtremeDay> extreme_days;
  std::vector<IterationLog> iterations;
  bool converged = false;
  resys::DesignVariables final_design;
  double final_objective = std::numeric_limits<double>::quiet_NaN();
};

/// The three statistical extremes: absolute-max electricity demand,
/// absolute-max heat demand, integral-min solar availability, deduplicated
/// in that order.
std::vector<ExtremeDay> select_simple(const Dataset& data);

/// Splices one artificial period from per-attribute extremum days. Attributes
/// without a spec follow the default direction table: demands from their
/// absolute-max day, solar from its integral-min day, price from its
/// integral-max day, and temperature from the heat-demand absolute-max day.
Period make_virtual_day(const Dataset& data, const std::vector<ExtremeSpec>& specs = {});

/// Denormalized centroids with weights N_j plus every extreme period at
/// weight zero (constraint rows only).
resys::RepresentativeSet modify_feasibility_steps(const ClusterResult& clusters,
                                                  const Dataset& data,
                                                  const std::vector<Period>& extreme_periods);
resys::RepresentativeSet modify_feasibility_steps(const ClusterResult& clusters,
                                                  const Dataset& data,
                                                  const std::vector<ExtremeDay>& extreme_days);

/// Removes the extreme days from the data, re-clusters the remainder, and
/// appends each extreme day as a weight-1 singleton. Total weight stays at
/// n_days and the weighted mean still matches the full data.
resys::RepresentativeSet modify_append(const Dataset& data,
                                       const KMeansConfig& config,
                                       const std::vector<ExtremeDay>& extreme_days);

/// Feasibility-based selection: seed with the simple extremes, then repeat
/// design -> fixed-design daily feasibility checks, adding the lowest-index
/// infeasible day until every day is feasible.
SelectionResult iterate_feasibility(const Dataset& data, const KMeansConfig& config,
                                    const resys::TechnologyParams& params,
                                    const resys::GridLimit& grid, ModificationMode mode,
                                    const SelectionLimits& limits = {});

/// Slack-based selection: repeat design -> fixed-design operations with slack
/// variables, adding the day with the largest heat slack (electricity slack
/// once heat is clear) until all slack is at most slack_tol.
SelectionResult iterate_slack(const Dataset& data, const KMeansConfig& config,
                              const resys::TechnologyParams& params,
                              const resys::GridLimit& grid, ModificationMode mode,
                              const SelectionLimits& limits = {});

}  // namespace repday::extremes

#endif  // REPDAY_EXTREMES_HPP
