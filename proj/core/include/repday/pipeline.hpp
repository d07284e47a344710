#ifndef REPDAY_PIPELINE_HPP
#define REPDAY_PIPELINE_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "repday/clustering.hpp"
#include "repday/extremes.hpp"
#include "repday/resys.hpp"
#include "repday/timeseries.hpp"

namespace repday::pipeline {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The reference design problem itself has no solution (e.g. zero grid with
/// no on-site resource to harvest).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

enum class Method { None, Simple, Feasibility, Slack };

std::string to_string(Method method);
Method method_from_string(const std::string& name);  // throws ConfigError
std::string to_string(extremes::ModificationMode mode);
extremes::ModificationMode modification_from_string(const std::string& name);

struct RunConfig {
  int k = 5;
  int n_init = 10000;
  std::uint64_t seed = 0;
  Method method = Method::Feasibility;
  extremes::ModificationMode modification = extremes::ModificationMode::FeasibilitySteps;
  double grid_fraction = 1.0;  // share of the reference peak draw, or kW if grid_absolute
  bool grid_absolute = false;
  bool virtual_days = false;   // one spliced virtual day instead of selected real days
  bool with_reference = true;  // solve the full-data reference for comparison columns
  int max_extremes = 30;
  double slack_tol = 1e-6;
  resys::TechnologyParams params;

  void validate() const;  // throws ConfigError
};

/// Full-data design optimum and the peak hourly grid draw that defines the
/// 100% grid connection for fraction-based limits.
struct ReferenceResult {
  resys::DesignVariables dv;
  double objective = 0.0;
  double peak_draw = 0.0;
};

struct RunReport {
  // configuration echo
  Method method = Method::None;
  extremes::ModificationMode modification = extremes::ModificationMode::FeasibilitySteps;
  int k = 0;
  std::uint64_t seed = 0;
  double grid_fraction = 1.0;
  bool grid_absolute = false;
  double c_lim = 0.0;  // resolved absolute limit [kW]
  double reference_peak = std::numeric_limits<double>::quiet_NaN();

  // reference case (full data, same grid limit)
  bool has_reference = false;
  resys::DesignVariables dv_ref{};
  double f_ref = std::numeric_limits<double>::quiet_NaN();

  // aggregated design problem
  bool design_feasible = false;
  resys::DesignVariables dv_repr{};
  double f_clustered = std::numeric_limits<double>::quiet_NaN();
  double capex_share = std::numeric_limits<double>::quiet_NaN();
  double opex_share = std::numeric_limits<double>::quiet_NaN();

  // fixed-design evaluation on the full series
  bool feasible_full_year = false;
  double f_operations = std::numeric_limits<double>::quiet_NaN();  // only when feasible
  double max_heat_slack = std::numeric_limits<double>::quiet_NaN();
  double max_el_slack = std::numeric_limits<double>::quiet_NaN();
  double accuracy = std::numeric_limits<double>::quiet_NaN();  // f_ref / f_operations
  resys::DesignVariables deviation_pct{};  // (repr - ref) / ref * 100, per variable

  // selection trace
  std::vector<extremes::ExtremeDay> extreme_days;
  std::vector<extremes::IterationLog> iterations;
  bool converged = false;
  int n_extremes = 0;
};

/// Solves the design problem over every day of the data at weight one.
ReferenceResult run_reference(const Dataset& data, const resys::TechnologyParams& params,
                              const resys::GridLimit& grid);

/// Cluster -> extreme selection -> aggregated design -> full-series
/// evaluation. The overloads taking ReferenceResult pointers reuse already
/// computed reference solutions: `unconstrained` fixes the 100% grid scale,
/// `matched` is the reference at the resolved limit (pass nullptr to solve
/// on demand).
RunReport run_aggregated(const Dataset& data, const RunConfig& config);
RunReport run_aggregated(const Dataset& data, const RunConfig& config,
                         const ReferenceResult* unconstrained);
RunReport run_aggregated(const Dataset& data, const RunConfig& config,
                         const ReferenceResult* unconstrained, const ReferenceResult* matched);

struct SweepPoint {
  double fraction = 0.0;
  RunReport report;
};

struct SweepResult {
  double reference_peak = 0.0;
  double f_ref_unconstrained = 0.0;
  resys::DesignVariables dv_ref_unconstrained{};
  std::vector<SweepPoint> points;
};

/// One aggregated run per fraction; the unconstrained reference is solved
/// once to fix the kW scale. Fractions are processed in the given order.
SweepResult sweep_grid_limits(const Dataset& data, const RunConfig& base,
                              const std::vector<double>& fractions);

struct ClusterCountEntry {
  int k = 0;
  RunReport without_extremes;
  RunReport with_extremes;
};

struct ClusterCountReport {
  double c_lim = 0.0;
  double reference_peak = 0.0;
  double f_ref = 0.0;
  resys::DesignVariables dv_ref{};
  std::vector<ClusterCountEntry> entries;
};

/// For each k, one run without extreme days and one with the configured
/// method, sharing a single reference solve.
ClusterCountReport compare_cluster_counts(const Dataset& data, const RunConfig& base,
                                          const std::vector<int>& ks);

// Deterministic serialization; path overloads throw std::runtime_error on
// I/O failure. Non-finite numbers are emitted as JSON null / empty CSV cells.
void write_report_json(const RunReport& report, std::ostream& out);
void write_report_json(const RunReport& report, const std::string& path);
void write_report_csv(const RunReport& report, std::ostream& out);
void write_report_csv(const RunReport& report, const std::string& path);
void write_sweep_json(const SweepResult& sweep, std::ostream& out);
void write_sweep_json(const SweepResult& sweep, const std::string& path);
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);
void write_sweep_csv(const SweepResult& sweep, const std::string& path);
void write_compare_json(const ClusterCountReport& report, std::ostream& out);
void write_compare_json(const ClusterCountReport& report, const std::string& path);
void write_compare_csv(const ClusterCountReport& report, std::ostream& out);
void write_compare_csv(const ClusterCountReport& report, const std::string& path);

}  // namespace repday::pipeline

#endif  // REPDAY_PIPELINE_HPP
