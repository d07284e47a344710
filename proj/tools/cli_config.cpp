#include "cli_config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include "json.hpp"

namespace repday::cli {
namespace {

using nlohmann::json;
using pipeline::ConfigError;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config section \"" + where + "\" must be an object");
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown config key \"" + where + "." + item.key() + "\"");
  }
}

template <typename T>
void assign(const json& obj, const std::string& where, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    obj.at(key).get_to(target);
  } catch (const json::exception&) {
    throw ConfigError("config key \"" + where + "." + key + "\" has the wrong type");
  }
}

void parse_run(const json& j, pipeline::RunConfig& run) {
  require_object(j, "run");
  reject_unknown(j, "run",
                 {"k", "n_init", "seed", "method", "modification", "grid_fraction",
                  "grid_absolute", "virtual_days", "with_reference", "max_extremes",
                  "slack_tol"});
  assign(j, "run", "k", run.k);
  assign(j, "run", "n_init", run.n_init);
  assign(j, "run", "seed", run.seed);
  std::string method = to_string(run.method);
  assign(j, "run", "method", method);
  run.method = pipeline::method_from_string(method);
  std::string modification = pipeline::to_string(run.modification);
  assign(j, "run", "modification", modification);
  run.modification = pipeline::modification_from_string(modification);
  assign(j, "run", "grid_fraction", run.grid_fraction);
  assign(j, "run", "grid_absolute", run.grid_absolute);
  assign(j, "run", "virtual_days", run.virtual_days);
  assign(j, "run", "with_reference", run.with_reference);
  assign(j, "run", "max_extremes", run.max_extremes);
  assign(j, "run", "slack_tol", run.slack_tol);
}

void parse_technology(const json& j, resys::TechnologyParams& tp) {
  require_object(j, "technology");
  reject_unknown(j, "technology",
                 {"capex_pv", "capex_hp", "capex_eh", "capex_bat_power", "capex_bat_energy",
                  "amortization_years", "interest_rate", "eta_eh", "eta_ch", "eta_dis",
                  "cop_supply_temp", "cop_quality", "cop_max", "c_slack"});
  assign(j, "technology", "capex_pv", tp.capex_pv);
  assign(j, "technology", "capex_hp", tp.capex_hp);
  assign(j, "technology", "capex_eh", tp.capex_eh);
  assign(j, "technology", "capex_bat_power", tp.capex_bat_power);
  assign(j, "technology", "capex_bat_energy", tp.capex_bat_energy);
  assign(j, "technology", "amortization_years", tp.amortization_years);
  assign(j, "technology", "interest_rate", tp.interest_rate);
  assign(j, "technology", "eta_eh", tp.eta_eh);
  assign(j, "technology", "eta_ch", tp.eta_ch);
  assign(j, "technology", "eta_dis", tp.eta_dis);
  assign(j, "technology", "cop_supply_temp", tp.cop_supply_temp);
  assign(j, "technology", "cop_quality", tp.cop_quality);
  assign(j, "technology", "cop_max", tp.cop_max);
  assign(j, "technology", "c_slack", tp.c_slack);
}

void parse_season(const json& parent, const std::string& where, const char* key,
                  SeasonalShape& shape) {
  if (!parent.contains(key)) return;
  const json& j = parent.at(key);
  const std::string path = where + "." + key;
  require_object(j, path);
  reject_unknown(j, path, {"amplitude", "phase_days"});
  assign(j, path, "amplitude", shape.amplitude);
  assign(j, path, "phase_days", shape.phase_days);
}

void parse_synth(const json& j, SynthConfig& synth) {
  require_object(j, "synth");
  reject_unknown(j, "synth",
                 {"preset", "n_days", "hours_per_day", "seed", "noise_level", "heat_season",
                  "el_season", "solar_season", "temp_season", "planted", "price_band"});
  if (j.contains("preset")) {
    std::string preset;
    assign(j, "synth", "preset", preset);
    if (preset == "default") {
      synth = SynthConfig{};
    } else if (preset == "desk_killer") {
      synth = desk_killer_config();
    } else if (preset == "dominance") {
      synth = dominance_config();
    } else {
      throw ConfigError("unknown synth preset \"" + preset + "\"");
    }
  }
  assign(j, "synth", "n_days", synth.n_days);
  assign(j, "synth", "hours_per_day", synth.hours_per_day);
  assign(j, "synth", "seed", synth.seed);
  assign(j, "synth", "noise_level", synth.noise_level);
  parse_season(j, "synth", "heat_season", synth.heat_season);
  parse_season(j, "synth", "el_season", synth.el_season);
  parse_season(j, "synth", "solar_season", synth.solar_season);
  parse_season(j, "synth", "temp_season", synth.temp_season);
  if (j.contains("planted")) {
    const json& arr = j.at("planted");
    if (!arr.is_array()) throw ConfigError("config key \"synth.planted\" must be an array");
    synth.planted.clear();
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "synth.planted[" + std::to_string(i) + "]";
      require_object(arr[i], where);
      reject_unknown(arr[i], where, {"day", "attribute", "scale"});
      PlantedExtreme p;
      assign(arr[i], where, "day", p.day);
      assign(arr[i], where, "attribute", p.attribute);
      assign(arr[i], where, "scale", p.scale);
      synth.planted.push_back(std::move(p));
    }
  }
  if (j.contains("price_band")) {
    const json& b = j.at("price_band");
    require_object(b, "synth.price_band");
    reject_unknown(b, "synth.price_band", {"min", "max", "mean"});
    assign(b, "synth.price_band", "min", synth.price_band.min);
    assign(b, "synth.price_band", "max", synth.price_band.max);
    assign(b, "synth.price_band", "mean", synth.price_band.mean);
  }
}

}  // namespace

CliConfig load_cli_config(const std::string& path) {
  CliConfig cfg;
  if (path.empty()) return cfg;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
  require_object(j, "<top level>");
  reject_unknown(j, "<top level>", {"run", "technology", "synth", "sweep", "compare"});

  if (j.contains("run")) parse_run(j.at("run"), cfg.run);
  if (j.contains("technology")) parse_technology(j.at("technology"), cfg.run.params);
  if (j.contains("synth")) parse_synth(j.at("synth"), cfg.synth);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    require_object(s, "sweep");
    reject_unknown(s, "sweep", {"fractions"});
    assign(s, "sweep", "fractions", cfg.fractions);
  }
  if (j.contains("compare")) {
    const json& c = j.at("compare");
    require_object(c, "compare");
    reject_unknown(c, "compare", {"cluster_counts"});
    assign(c, "compare", "cluster_counts", cfg.cluster_counts);
  }
  return cfg;
}

}  // namespace repday::cli
