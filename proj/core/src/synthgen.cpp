#include "repday/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace repday {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distinct, stable RNG streams per attribute derived from one user seed.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform draw in [-1, 1] built from the top 53 bits, so the sequence does
// not depend on the standard library's distribution implementation.
double uniform_pm1(std::uint64_t& state) {
  const double u01 = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  return 2.0 * u01 - 1.0;
}

// Gaussian-shaped bump on the 24 h circle.
double periodic_bump(double t, double center, double width) {
  double dt = std::fmod(std::abs(t - center), 24.0);
  dt = std::min(dt, 24.0 - dt);
  return std::exp(-0.5 * dt * dt / (width * width));
}

double heat_diurnal(double t) {
  return 0.40 + 0.35 * periodic_bump(t, 7.0, 2.2) + 0.50 * periodic_bump(t, 19.0, 2.8);
}

double el_diurnal(double t) {
  return 0.30 + 0.28 * periodic_bump(t, 8.0, 2.4) + 0.55 * periodic_bump(t, 19.5, 2.6);
}

double solar_elevation(double t) {
  const double c = std::cos(kTwoPi * (t - 12.5) / 24.0);
  return c > 0.0 ? std::pow(c, 1.4) : 0.0;
}

// 1 in midwinter (day 0 by default), 0 in midsummer.
double winter_weight(int day, const SeasonalShape& s) {
  return 0.5 * (1.0 + std::cos(kTwoPi * (static_cast<double>(day) - s.phase_days) / 365.25));
}

void validate(const SynthConfig& c) {
  if (c.n_days < 1) throw InvalidConfigError("n_days must be >= 1");
  if (c.hours_per_day < 1) throw InvalidConfigError("hours_per_day must be >= 1");
  if (c.noise_level < 0.0 || c.noise_level > 0.5) {
    throw InvalidConfigError("noise_level must be in [0, 0.5]");
  }
  const PriceBand& b = c.price_band;
  if (!(b.min >= 0.0)) throw InvalidConfigError("price band min must be >= 0");
  const bool degenerate = b.min == b.max;
  if (degenerate ? b.mean != b.min : !(b.min < b.mean && b.mean < b.max)) {
    throw InvalidConfigError("price band requires min < mean < max (or all equal)");
  }
  const std::set<std::string> known = {attr::el_demand, attr::heat_demand, attr::t_ambient,
                                       attr::solar_cf, attr::el_price};
  for (const PlantedExtreme& p : c.planted) {
    if (p.day < 0 || p.day >= c.n_days) {
      throw InvalidConfigError("planted extreme day " + std::to_string(p.day) + " out of range");
    }
    if (known.count(p.attribute) == 0) {
      throw InvalidConfigError("planted extreme on unknown attribute '" + p.attribute + "'");
    }
    if (!(p.scale > 0.0)) throw InvalidConfigError("planted extreme scale must be > 0");
  }
}

// Monotone map of the raw series onto [band.min, band.max]: endpoints land
// exactly on the band, and a power transform of the normalized values is
// bisected until the sample mean hits band.mean.
void map_price_band(std::vector<double>& p, const PriceBand& band) {
  if (band.min == band.max) {
    std::fill(p.begin(), p.end(), band.mean);
    return;
  }
  const auto [lo_it, hi_it] = std::minmax_element(p.begin(), p.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi - lo < 1e-12) {
    throw InvalidConfigError("price series is constant; cannot span the configured band");
  }
  std::vector<double> u(p.size());
  for (size_t i = 0; i < p.size(); ++i) u[i] = (p[i] - lo) / (hi - lo);

  const double target = (band.mean - band.min) / (band.max - band.min);
  const auto mean_pow = [&u](double gamma) {
    double s = 0.0;
    for (double v : u) s += std::pow(v, gamma);
    return s / static_cast<double>(u.size());
  };
  double glo = std::log(1e-8), ghi = std::log(1e8);
  if (mean_pow(std::exp(glo)) < target || mean_pow(std::exp(ghi)) > target) {
    throw InvalidConfigError("price band mean is not reachable for this series shape");
  }
  for (int it = 0; it < 200; ++it) {
    const double gm = 0.5 * (glo + ghi);
    (mean_pow(std::exp(gm)) > target ? glo : ghi) = gm;
  }
  const double gamma = std::exp(0.5 * (glo + ghi));
  for (size_t i = 0; i < p.size(); ++i) {
    p[i] = band.min + (band.max - band.min) * std::pow(u[i], gamma);
  }
}

}  // namespace

Dataset generate(const SynthConfig& config) {
  validate(config);
  const int D = config.n_days;
  const int H = config.hours_per_day;
  const size_t n = static_cast<size_t>(D) * H;

  const std::vector<std::string> order = default_schema();
  std::vector<std::vector<double>> values(order.size(), std::vector<double>(n));

  // One independent noise stream per attribute, in schema order, so planting
  // or reading a subset never shifts another attribute's draws.
  std::uint64_t root = config.seed;
  std::vector<std::uint64_t> streams(order.size());
  for (auto& s : streams) s = splitmix64(root);

  for (size_t a = 0; a < order.size(); ++a) {
    const std::string& name = order[a];
    std::uint64_t& rng = streams[a];
    for (int d = 0; d < D; ++d) {
      for (int h = 0; h < H; ++h) {
        const double t = (h + 0.5) * 24.0 / H;
        const double u = uniform_pm1(rng);
        double v = 0.0;
        if (name == attr::el_demand) {
          const double season = 0.70 + 0.45 * config.el_season.amplitude * winter_weight(d, config.el_season);
          v = 0.9 * season * el_diurnal(t) * (1.0 + config.noise_level * u);
        } else if (name == attr::heat_demand) {
          const double season = 0.25 + 1.75 * config.heat_season.amplitude * winter_weight(d, config.heat_season);
          v = 2.2 * season * heat_diurnal(t) * (1.0 + config.noise_level * u);
        } else if (name == attr::t_ambient) {
          const double season = 1.0 - config.temp_season.amplitude * winter_weight(d, config.temp_season);
          v = -3.0 + 21.0 * season + 3.5 * std::cos(kTwoPi * (t - 14.0) / 24.0) +
              8.0 * config.noise_level * u;
        } else if (name == attr::solar_cf) {
          const double season = 0.16 + 0.50 * config.solar_season.amplitude *
                                           (1.0 - winter_weight(d, config.solar_season));
          v = season * solar_elevation(t) * (1.0 + config.noise_level * u);
        } else {  // el_price: raw shape, mapped onto the band below
          v = 0.5 + 0.25 * std::cos(kTwoPi * (t - 18.0) / 24.0) +
              0.15 * std::sin(kTwoPi * (d + 3.0) / 29.0) + 0.5 * config.noise_level * u;
        }
        values[a][static_cast<size_t>(d) * H + h] = v;
      }
    }
  }

  map_price_band(values[order.size() - 1], config.price_band);

  // Plant extremes: rescale the day's own (noisy) profile so its hourly peak
  // is `scale` times the maximum over all non-planted days.
  for (const PlantedExtreme& plant : config.planted) {
    const size_t a = static_cast<size_t>(
        std::find(order.begin(), order.end(), plant.attribute) - order.begin());
    std::set<int> planted_days;
    for (const PlantedExtreme& q : config.planted) {
      if (q.attribute == plant.attribute) planted_days.insert(q.day);
    }
    double peak = 0.0;
    int peak_day = -1;
    for (int d = 0; d < D; ++d) {
      if (planted_days.count(d)) continue;
      for (int h = 0; h < H; ++h) {
        const double v = values[a][static_cast<size_t>(d) * H + h];
        if (peak_day < 0 || v > peak) peak = v, peak_day = d;
      }
    }
    if (peak_day < 0 || peak <= 0.0) {
      throw InvalidConfigError("cannot plant extreme on '" + plant.attribute +
                               "': no positive reference peak outside planted days");
    }
    double* row = &values[a][static_cast<size_t>(plant.day) * H];
    double row_max = *std::max_element(row, row + H);
    if (row_max <= 0.0) {
      const double* ref = &values[a][static_cast<size_t>(peak_day) * H];
      std::copy(ref, ref + H, row);
      row_max = peak;
    }
    for (int h = 0; h < H; ++h) row[h] = plant.scale * peak * (row[h] / row_max);
  }

  // Final validity clips (only planting can overshoot these).
  {
    const size_t a = static_cast<size_t>(
        std::find(order.begin(), order.end(), attr::solar_cf) - order.begin());
    for (double& v : values[a]) v = std::clamp(v, 0.0, 1.0);
  }

  std::vector<AttributeProfile> profiles;
  profiles.reserve(order.size());
  const auto unit_of = [](const std::string& name) -> std::string {
    if (name == attr::el_demand || name == attr::heat_demand) return "kWh/h";
    if (name == attr::t_ambient) return "degC";
    if (name == attr::solar_cf) return "-";
    return "EUR/kWh";
  };
  for (size_t a = 0; a < order.size(); ++a) {
    profiles.push_back({order[a], unit_of(order[a]), std::move(values[a])});
  }
  Dataset data(std::move(profiles), H);
  validate_original_units(data);
  return data;
}

Dataset duplicated_day_dataset(int k, int copies, std::uint64_t seed, int hours_per_day) {
  if (k < 1) throw InvalidConfigError("k must be >= 1");
  if (copies < 1) throw InvalidConfigError("copies must be >= 1");

  SynthConfig base_cfg;
  base_cfg.n_days = k;
  base_cfg.hours_per_day = hours_per_day;
  base_cfg.seed = seed;
  base_cfg.noise_level = 0.08;
  const Dataset base = generate(base_cfg);

  std::vector<int> sequence;
  sequence.reserve(static_cast<size_t>(k) * copies);
  for (int c = 0; c < copies; ++c) {
    for (int d = 0; d < k; ++d) sequence.push_back(d);
  }
  // Fisher-Yates with our own stream: std::shuffle's draw order is
  // implementation-defined, and the day order must be bit-stable.
  std::uint64_t state = seed ^ 0xd1b54a32d192ed03ULL;
  for (size_t i = sequence.size() - 1; i > 0; --i) {
    const size_t j = splitmix64(state) % (i + 1);
    std::swap(sequence[i], sequence[j]);
  }

  const int H = base.hours_per_day();
  std::vector<AttributeProfile> profiles;
  profiles.reserve(base.attributes().size());
  for (const AttributeProfile& p : base.attributes()) {
    AttributeProfile out{p.name, p.unit, {}};
    out.values.reserve(sequence.size() * static_cast<size_t>(H));
    for (int src : sequence) {
      const double* begin = &p.values[static_cast<size_t>(src) * H];
      out.values.insert(out.values.end(), begin, begin + H);
    }
    profiles.push_back(std::move(out));
  }
  return Dataset(std::move(profiles), H);
}

SynthConfig desk_killer_config() {
  SynthConfig c;
  c.n_days = 90;
  c.seed = 42;
  c.noise_level = 0.05;
  // A tight group of winter days with far-above-normal heat demand on
  // depressed solar; averaged into one cluster they under-state the worst
  // member, so a design built from centroids alone cannot serve day 11.
  c.planted = {
      {11, attr::heat_demand, 3.00}, {11, attr::solar_cf, 0.10},
      {12, attr::heat_demand, 2.95}, {12, attr::solar_cf, 0.13},
      {13, attr::heat_demand, 2.90}, {13, attr::solar_cf, 0.16},
      // Electricity peak day, and a joint day that is second-highest in
      // electricity while also cold and dim: individually dominated, so
      // only the iterative selections discover it at tight grid limits.
      {40, attr::el_demand, 3.30},
      {63, attr::el_demand, 3.20}, {63, attr::heat_demand, 1.50}, {63, attr::solar_cf, 0.20},
  };
  return c;
}

SynthConfig dominance_config() {
  SynthConfig c;
  c.n_days = 90;
  c.seed = 7;
  c.noise_level = 0.0;
  // Noise-free shared diurnal shapes make the planted days dominate every
  // other day point-wise in their attribute.
  c.planted = {
      {10, attr::heat_demand, 3.0},
      {10, attr::solar_cf, 0.05},
      {40, attr::el_demand, 2.5},
  };
  return c;
}

}  // namespace repday
