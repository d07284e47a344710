// repday — representative-day aggregation with extreme-day restoration.
//
// Commands: generate (synthetic dataset CSV), run (single aggregated design
// run), sweep (grid-limit sweep), compare-k (cluster-count comparison).
// Exit codes: 0 success, 1 runtime/solver failure, 2 configuration error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "repday/lp.hpp"
#include "repday/pipeline.hpp"
#include "repday/synthgen.hpp"
#include "repday/timeseries.hpp"
#include "svg_plot.hpp"

namespace {

using namespace repday;
using pipeline::ConfigError;

struct Flags {
  std::string config;
  std::string data;
  std::string out = ".";
  std::string method;
  std::string modification;
  int k = 0;
  double grid_fraction = 0.0;
  std::uint64_t seed = 0;
  bool virtual_days = false;
  bool no_plots = false;
};

std::string g6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::filesystem::path ensure_out_dir(const Flags& flags) {
  std::filesystem::path dir(flags.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + flags.out + "': " + ec.message());
  return dir;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out.good()) throw std::runtime_error("failed writing '" + path.string() + "'");
}

Dataset load_data(const Flags& flags) {
  Dataset data = load_csv(flags.data, default_schema());
  validate_original_units(data);
  return data;
}

/// True when the user passed `name` to this subcommand (false when the
/// subcommand does not even have the option).
bool passed(const CLI::App& sub, const std::string& name) {
  const CLI::Option* opt = sub.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

/// File values first, then any flag the user actually passed on top.
pipeline::RunConfig make_run_config(const CLI::App& sub, const Flags& flags,
                                    const cli::CliConfig& file) {
  pipeline::RunConfig cfg = file.run;
  if (passed(sub, "--method")) cfg.method = pipeline::method_from_string(flags.method);
  if (passed(sub, "--modification"))
    cfg.modification = pipeline::modification_from_string(flags.modification);
  if (passed(sub, "--k")) cfg.k = flags.k;
  if (passed(sub, "--grid-fraction")) cfg.grid_fraction = flags.grid_fraction;
  if (passed(sub, "--virtual-days")) cfg.virtual_days = true;
  if (passed(sub, "--seed")) cfg.seed = flags.seed;
  cfg.validate();
  return cfg;
}

int cmd_generate(const CLI::App& sub, const Flags& flags) {
  cli::CliConfig cfg = cli::load_cli_config(flags.config);
  if (passed(sub, "--seed")) cfg.synth.seed = flags.seed;
  const Dataset data = generate(cfg.synth);
  const auto dir = ensure_out_dir(flags);
  const auto path = dir / "dataset.csv";
  write_csv(data, path.string());
  std::cout << "wrote " << path.string() << " (" << data.n_days() << " days x "
            << data.hours_per_day() << " h)\n";
  return 0;
}

int cmd_run(const CLI::App& sub, const Flags& flags) {
  const cli::CliConfig file = cli::load_cli_config(flags.config);
  const pipeline::RunConfig cfg = make_run_config(sub, flags, file);
  const Dataset data = load_data(flags);

  const pipeline::RunReport report = pipeline::run_aggregated(data, cfg);

  const auto dir = ensure_out_dir(flags);
  pipeline::write_report_json(report, (dir / "report.json").string());
  pipeline::write_report_csv(report, (dir / "report.csv").string());
  if (!flags.no_plots) write_text_file(dir / "design.svg", svgplot::design_chart(report));

  std::cout << "method=" << pipeline::to_string(report.method) << " k=" << report.k
            << " c_lim=" << g6(report.c_lim) << " f_clustered=" << g6(report.f_clustered)
            << " feasible_full_year=" << (report.feasible_full_year ? "true" : "false")
            << " extremes=" << report.n_extremes << '\n';
  std::cout << "wrote " << (dir / "report.json").string() << '\n';
  return 0;
}

std::string csv_escape(std::string text) {
  for (auto& ch : text) {
    if (ch == '"' || ch == '\n' || ch == '\r') ch = ' ';
  }
  if (text.find(',') != std::string::npos) return '"' + text + '"';
  return text;
}

std::string csv_num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Writes the sweep table with a trailing status column; used when a point
/// fails so the completed prefix is still on disk.
void write_partial_sweep_csv(const std::filesystem::path& path,
                             const pipeline::SweepResult& done, double failed_fraction,
                             const std::string& error) {
  std::ostringstream out;
  out << "fraction,total_cost,capex_share,opex_share,n_extreme_days,feasible,status\n";
  for (const auto& p : done.points) {
    const auto& r = p.report;
    out << csv_num(p.fraction) << ',' << csv_num(r.f_clustered) << ',' << csv_num(r.capex_share)
        << ',' << csv_num(r.opex_share) << ',' << r.n_extremes << ','
        << (r.feasible_full_year ? "true" : "false") << ",ok\n";
  }
  out << csv_num(failed_fraction) << ",,,,," << ',' << csv_escape("error: " + error) << '\n';
  write_text_file(path, out.str());
}

int cmd_sweep(const CLI::App& sub, const Flags& flags) {
  const cli::CliConfig file = cli::load_cli_config(flags.config);
  const pipeline::RunConfig base = make_run_config(sub, flags, file);
  if (file.fractions.empty()) throw ConfigError("sweep needs at least one grid fraction");
  for (double f : file.fractions) {
    if (!(f >= 0.0)) throw ConfigError("grid fractions must be non-negative");
  }
  const Dataset data = load_data(flags);
  const auto dir = ensure_out_dir(flags);

  // The unconstrained reference fixes the 100% grid scale for every point.
  const pipeline::ReferenceResult unc =
      pipeline::run_reference(data, base.params, {lp::kInfinity});
  pipeline::SweepResult sweep;
  sweep.reference_peak = unc.peak_draw;
  sweep.f_ref_unconstrained = unc.objective;
  sweep.dv_ref_unconstrained = unc.dv;

  for (double fraction : file.fractions) {
    pipeline::RunConfig point_cfg = base;
    point_cfg.grid_absolute = false;
    point_cfg.grid_fraction = fraction;
    try {
      sweep.points.push_back({fraction, pipeline::run_aggregated(data, point_cfg, &unc)});
    } catch (const std::exception& e) {
      write_partial_sweep_csv(dir / "sweep.csv", sweep, fraction, e.what());
      std::cerr << "error: sweep point at fraction " << g6(fraction) << " failed: " << e.what()
                << '\n';
      return 1;
    }
  }

  pipeline::write_sweep_json(sweep, (dir / "sweep.json").string());
  pipeline::write_sweep_csv(sweep, (dir / "sweep.csv").string());
  if (!flags.no_plots) write_text_file(dir / "sweep.svg", svgplot::sweep_chart(sweep));

  std::cout << "swept " << sweep.points.size() << " grid fractions, reference peak "
            << g6(sweep.reference_peak) << " kW\n";
  std::cout << "wrote " << (dir / "sweep.csv").string() << '\n';
  return 0;
}

int cmd_compare_k(const CLI::App& sub, const Flags& flags) {
  const cli::CliConfig file = cli::load_cli_config(flags.config);
  const pipeline::RunConfig base = make_run_config(sub, flags, file);
  const Dataset data = load_data(flags);

  const pipeline::ClusterCountReport report =
      pipeline::compare_cluster_counts(data, base, file.cluster_counts);

  const auto dir = ensure_out_dir(flags);
  pipeline::write_compare_json(report, (dir / "compare_k.json").string());
  pipeline::write_compare_csv(report, (dir / "compare_k.csv").string());
  if (!flags.no_plots) write_text_file(dir / "compare_k.svg", svgplot::compare_chart(report));

  std::cout << "compared " << report.entries.size() << " cluster counts at c_lim "
            << g6(report.c_lim) << " kW (reference cost " << g6(report.f_ref) << ")\n";
  std::cout << "wrote " << (dir / "compare_k.json").string() << '\n';
  return 0;
}

void add_common_flags(CLI::App* sub, Flags& flags, bool with_data) {
  sub->add_option("--config", flags.config, "JSON config file (flags override file values)");
  if (with_data) {
    sub->add_option("--data", flags.data, "input dataset CSV")->required();
    sub->add_option("--method", flags.method,
                    "extreme-day method: none, simple, feasibility, slack");
    sub->add_option("--modification", flags.modification,
                    "representation modification: steps, append");
    sub->add_flag("--virtual-days", flags.virtual_days,
                  "use one synthetic worst-case day (method none, steps only)");
    sub->add_flag("--no-plots", flags.no_plots, "skip SVG plot output");
  }
  sub->add_option("--seed", flags.seed, "RNG seed override");
  sub->add_option("--out", flags.out, "output directory (default .)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "repday: reduce hourly time series to representative days, restore design\n"
      "feasibility with extreme days, and evaluate the resulting energy system LP"};
  app.require_subcommand(1);

  Flags flags;
  int rc = 0;

  CLI::App* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
  add_common_flags(gen, flags, false);
  gen->callback([&] { rc = cmd_generate(*gen, flags); });

  CLI::App* run = app.add_subcommand("run", "aggregate, design, and evaluate one configuration");
  add_common_flags(run, flags, true);
  run->add_option("--k", flags.k, "number of representative days");
  run->add_option("--grid-fraction", flags.grid_fraction,
                  "grid limit as a share of the reference peak draw");
  run->callback([&] { rc = cmd_run(*run, flags); });

  CLI::App* sweep = app.add_subcommand("sweep", "run a series of grid-limit fractions");
  add_common_flags(sweep, flags, true);
  sweep->add_option("--k", flags.k, "number of representative days");
  sweep->callback([&] { rc = cmd_sweep(*sweep, flags); });

  CLI::App* cmp = app.add_subcommand("compare-k", "contrast cluster counts with/without extremes");
  add_common_flags(cmp, flags, true);
  cmp->add_option("--grid-fraction", flags.grid_fraction,
                  "grid limit as a share of the reference peak draw");
  cmp->callback([&] { rc = cmd_compare_k(*cmp, flags); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const CsvError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const resys::InvalidParamsError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
