#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "repday/pipeline.hpp"

namespace repday::pipeline {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json design_json(const resys::DesignVariables& dv) {
  return ordered_json{{"p_hp", num(dv.p_hp)},
                      {"p_eh", num(dv.p_eh)},
                      {"p_pv", num(dv.p_pv)},
                      {"p_bat", num(dv.p_bat)},
                      {"e_bat", num(dv.e_bat)}};
}

const char* source_name(extremes::ExtremeSource s) {
  switch (s) {
    case extremes::ExtremeSource::Statistical: return "statistical";
    case extremes::ExtremeSource::Feasibility: return "feasibility";
    case extremes::ExtremeSource::SlackHeat: return "slack_heat";
    case extremes::ExtremeSource::SlackEl: return "slack_el";
    case extremes::ExtremeSource::Virtual: return "virtual";
  }
  return "statistical";
}

const char* status_name(lp::SolveStatus s) {
  switch (s) {
    case lp::SolveStatus::Optimal: return "optimal";
    case lp::SolveStatus::Infeasible: return "infeasible";
    case lp::SolveStatus::Unbounded: return "unbounded";
  }
  return "optimal";
}

ordered_json report_json(const RunReport& r) {
  ordered_json j;
  j["method"] = to_string(r.method);
  j["modification"] = to_string(r.modification);
  j["k"] = r.k;
  j["seed"] = r.seed;
  j["grid_fraction"] = num(r.grid_fraction);
  j["grid_absolute"] = r.grid_absolute;
  j["c_lim"] = num(r.c_lim);
  j["reference_peak"] = num(r.reference_peak);
  j["has_reference"] = r.has_reference;
  j["f_ref"] = num(r.f_ref);
  j["dv_ref"] = r.has_reference ? design_json(r.dv_ref) : ordered_json(nullptr);
  j["design_feasible"] = r.design_feasible;
  j["f_clustered"] = num(r.f_clustered);
  j["dv_repr"] = r.design_feasible ? design_json(r.dv_repr) : ordered_json(nullptr);
  j["capex_share"] = num(r.capex_share);
  j["opex_share"] = num(r.opex_share);
  j["feasible_full_year"] = r.feasible_full_year;
  j["f_operations"] = num(r.f_operations);
  j["max_heat_slack"] = num(r.max_heat_slack);
  j["max_el_slack"] = num(r.max_el_slack);
  j["accuracy"] = num(r.accuracy);
  j["deviation_pct"] = (r.has_reference && r.design_feasible) ? design_json(r.deviation_pct)
                                                              : ordered_json(nullptr);
  j["converged"] = r.converged;
  j["n_extremes"] = r.n_extremes;
  ordered_json days = ordered_json::array();
  for (const auto& e : r.extreme_days) {
    days.push_back(ordered_json{{"day_index", e.day_index},
                                {"source", source_name(e.source)},
                                {"iteration", e.iteration}});
  }
  j["extreme_days"] = std::move(days);
  ordered_json iters = ordered_json::array();
  for (const auto& it : r.iterations) {
    iters.push_back(ordered_json{{"iteration", it.iteration},
                                 {"n_extremes", it.n_extremes},
                                 {"o_init_objective", num(it.o_init_objective)},
                                 {"o_op_status", status_name(it.o_op_status)},
                                 {"max_heat_slack", num(it.max_heat_slack)},
                                 {"max_el_slack", num(it.max_el_slack)},
                                 {"added_day", it.added_day}});
  }
  j["iterations"] = std::move(iters);
  return j;
}

ordered_json sweep_json(const SweepResult& s) {
  ordered_json j;
  j["reference_peak"] = num(s.reference_peak);
  j["f_ref_unconstrained"] = num(s.f_ref_unconstrained);
  j["dv_ref_unconstrained"] = design_json(s.dv_ref_unconstrained);
  ordered_json points = ordered_json::array();
  for (const auto& p : s.points) {
    points.push_back(ordered_json{{"fraction", num(p.fraction)}, {"report", report_json(p.report)}});
  }
  j["points"] = std::move(points);
  return j;
}

ordered_json compare_json(const ClusterCountReport& c) {
  ordered_json j;
  j["c_lim"] = num(c.c_lim);
  j["reference_peak"] = num(c.reference_peak);
  j["f_ref"] = num(c.f_ref);
  j["dv_ref"] = design_json(c.dv_ref);
  ordered_json entries = ordered_json::array();
  for (const auto& e : c.entries) {
    entries.push_back(ordered_json{{"k", e.k},
                                   {"without_extremes", report_json(e.without_extremes)},
                                   {"with_extremes", report_json(e.with_extremes)}});
  }
  j["entries"] = std::move(entries);
  return j;
}

void dump_to(const ordered_json& j, std::ostream& out) { out << j.dump(2) << '\n'; }

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

/// Shortest-but-stable numeric cell: %.12g round-trips every value seen here
/// and is byte-deterministic; non-finite values become empty cells.
std::string csv_num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void sweep_csv(const SweepResult& s, std::ostream& out) {
  out << "fraction,total_cost,capex_share,opex_share,n_extreme_days,feasible\n";
  for (const auto& p : s.points) {
    const RunReport& r = p.report;
    out << csv_num(p.fraction) << ',' << csv_num(r.f_clustered) << ',' << csv_num(r.capex_share)
        << ',' << csv_num(r.opex_share) << ',' << r.n_extremes << ','
        << (r.feasible_full_year ? "true" : "false") << '\n';
  }
}

void report_csv(const RunReport& r, std::ostream& out) {
  const auto num = [&out](const char* key, double v) { out << key << ',' << csv_num(v) << '\n'; };
  const auto flag = [&out](const char* key, bool v) {
    out << key << ',' << (v ? "true" : "false") << '\n';
  };
  const auto design = [&out](const char* prefix, const resys::DesignVariables& dv, bool present) {
    const std::pair<const char*, double> fields[] = {{"p_hp", dv.p_hp},
                                                     {"p_eh", dv.p_eh},
                                                     {"p_pv", dv.p_pv},
                                                     {"p_bat", dv.p_bat},
                                                     {"e_bat", dv.e_bat}};
    for (const auto& [name, v] : fields)
      out << prefix << '.' << name << ',' << (present ? csv_num(v) : "") << '\n';
  };

  out << "key,value\n";
  out << "method," << to_string(r.method) << '\n';
  out << "modification," << to_string(r.modification) << '\n';
  out << "k," << r.k << '\n';
  out << "seed," << r.seed << '\n';
  num("grid_fraction", r.grid_fraction);
  flag("grid_absolute", r.grid_absolute);
  num("c_lim", r.c_lim);
  num("reference_peak", r.reference_peak);
  flag("has_reference", r.has_reference);
  num("f_ref", r.f_ref);
  design("dv_ref", r.dv_ref, r.has_reference);
  flag("design_feasible", r.design_feasible);
  num("f_clustered", r.f_clustered);
  design("dv_repr", r.dv_repr, r.design_feasible);
  num("capex_share", r.capex_share);
  num("opex_share", r.opex_share);
  flag("feasible_full_year", r.feasible_full_year);
  num("f_operations", r.f_operations);
  num("max_heat_slack", r.max_heat_slack);
  num("max_el_slack", r.max_el_slack);
  num("accuracy", r.accuracy);
  design("deviation_pct", r.deviation_pct, r.has_reference && r.design_feasible);
  flag("converged", r.converged);
  out << "n_extremes," << r.n_extremes << '\n';
  out << "extreme_days,";
  for (size_t i = 0; i < r.extreme_days.size(); ++i) {
    const auto& e = r.extreme_days[i];
    out << (i ? ";" : "") << e.day_index << ':' << source_name(e.source) << ':' << e.iteration;
  }
  out << '\n';
}

void compare_csv(const ClusterCountReport& c, std::ostream& out) {
  out << "k,variant,f_clustered,feasible_full_year,f_operations,accuracy\n";
  for (const auto& e : c.entries) {
    for (const RunReport* r : {&e.without_extremes, &e.with_extremes}) {
      out << e.k << ',' << (r == &e.without_extremes ? "none" : "with_extremes") << ','
          << csv_num(r->f_clustered) << ',' << (r->feasible_full_year ? "true" : "false") << ','
          << csv_num(r->f_operations) << ',' << csv_num(r->accuracy) << '\n';
    }
  }
}

}  // namespace

void write_report_json(const RunReport& report, std::ostream& out) {
  dump_to(report_json(report), out);
}

void write_report_json(const RunReport& report, const std::string& path) {
  auto out = open_or_throw(path);
  write_report_json(report, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_sweep_json(const SweepResult& sweep, std::ostream& out) {
  dump_to(sweep_json(sweep), out);
}

void write_sweep_json(const SweepResult& sweep, const std::string& path) {
  auto out = open_or_throw(path);
  write_sweep_json(sweep, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_report_csv(const RunReport& report, std::ostream& out) { report_csv(report, out); }

void write_report_csv(const RunReport& report, const std::string& path) {
  auto out = open_or_throw(path);
  write_report_csv(report, out);
  if (!out.good()) throw std::runtime_error("failed writing '" + path + "'");
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) { sweep_csv(sweep, out); }

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
  auto out = open_or_throw(path);
  write_sweep_csv(sweep, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_compare_json(const ClusterCountReport& report, std::ostream& out) {
  dump_to(compare_json(report), out);
}

void write_compare_json(const ClusterCountReport& report, const std::string& path) {
  auto out = open_or_throw(path);
  write_compare_json(report, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_compare_csv(const ClusterCountReport& report, std::ostream& out) {
  compare_csv(report, out);
}

void write_compare_csv(const ClusterCountReport& report, const std::string& path) {
  auto out = open_or_throw(path);
  write_compare_csv(report, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace repday::pipeline
