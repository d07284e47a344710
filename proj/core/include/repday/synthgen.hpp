#ifndef REPDAY_SYNTHGEN_HPP
#define REPDAY_SYNTHGEN_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "repday/timeseries.hpp"

namespace repday {

class InvalidConfigError : public std::runtime_error {
 public:
  explicit InvalidConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Forces one day to carry an attribute extreme. The day's own diurnal shape
/// is kept and rescaled so its peak equals `scale` times the series-wide
/// hourly maximum; scale > 1 plants a maximum, scale < 1 a depressed day.
struct PlantedExtreme {
  int day = 0;
  std::string attribute;
  double scale = 1.0;
};

struct PriceBand {
  double min = 0.190;
  double max = 0.370;
  double mean = 0.301;
};

/// Seasonal envelope controls per attribute: `amplitude` scales the
/// winter-summer swing, `phase_days` shifts the envelope along the year.
struct SeasonalShape {
  double amplitude = 1.0;
  double phase_days = 0.0;
};

struct SynthConfig {
  int n_days = 90;
  int hours_per_day = 24;
  std::uint64_t seed = 42;
  double noise_level = 0.05;  // relative, clipped to keep values valid

  SeasonalShape heat_season;
  SeasonalShape el_season;
  SeasonalShape solar_season;
  SeasonalShape temp_season;

  std::vector<PlantedExtreme> planted;
  PriceBand price_band;
};

/// Deterministic synthetic year: sinusoidal seasonal and diurnal shapes with
/// bounded multiplicative noise, planted extreme days, and an electricity
/// price series mapped onto the configured band (min and max exact, mean
/// within 1e-9 of the target).
Dataset generate(const SynthConfig& config);

/// k distinct base days, each repeated `copies` times, deterministically
/// shuffled. Clustering oracle input: k-means with the right k recovers the
/// base days exactly with SSD 0.
Dataset duplicated_day_dataset(int k, int copies, std::uint64_t seed = 7, int hours_per_day = 24);

/// The desk-scale evaluation dataset: 90 days with a small group of
/// near-identical "killer" days (scaled-up heat demand on depressed solar)
/// that clustering averages away.
SynthConfig desk_killer_config();

/// Noise-free dataset whose planted extreme days dominate every other day
/// component-wise; used for cluster-count and virtual-day comparisons.
SynthConfig dominance_config();

}  // namespace repday

#endif  // REPDAY_SYNTHGEN_HPP
