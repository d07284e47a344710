#ifndef REPDAY_TIMESERIES_HPP
#define REPDAY_TIMESERIES_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace repday {

// Canonical attribute names of the residential supply system input.
namespace attr {
inline constexpr const char* el_demand = "el_demand";
inline constexpr const char* heat_demand = "heat_demand";
inline constexpr const char* t_ambient = "t_ambient";
inline constexpr const char* solar_cf = "solar_cf";
inline constexpr const char* el_price = "el_price";
}  // namespace attr

/// Thrown when a dataset or one of its attributes violates a structural
/// invariant (ragged lengths, duplicate names, out-of-range values, ...).
class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by CSV ingestion. `kind()` distinguishes the failure modes the
/// loader contract names.
class CsvError : public std::runtime_error {
 public:
  enum class Kind { MissingColumn, NonNumericCell, RaggedLength, NaNValue, FileNotFound };

  CsvError(Kind kind, const std::string& what, long row = -1, long col = -1)
      : std::runtime_error(what), kind_(kind), row_(row), col_(col) {}

  Kind kind() const { return kind_; }
  long row() const { return row_; }
  long col() const { return col_; }

 private:
  Kind kind_;
  long row_;
  long col_;
};

class UnknownAttributeError : public std::runtime_error {
 public:
  explicit UnknownAttributeError(const std::string& name)
      : std::runtime_error("unknown attribute: " + name) {}
};

/// One full-length hourly profile (n_days * hours_per_day values).
struct AttributeProfile {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

/// One day of the multi-attribute series: matrix[attribute][hour].
struct Period {
  int day_index = 0;
  std::vector<std::string> attribute_names;
  std::vector<std::vector<double>> matrix;

  int n_attributes() const { return static_cast<int>(matrix.size()); }
  int n_hours() const { return matrix.empty() ? 0 : static_cast<int>(matrix.front().size()); }
  const std::vector<double>& row(const std::string& attribute) const;
};

/// Per-attribute z-normalization statistics over the entire series.
struct NormalizationParams {
  struct Stats {
    std::string name;
    double mu = 0.0;
    double sigma = 0.0;
  };
  std::vector<Stats> per_attribute;

  const Stats& find(const std::string& name) const;
  bool has(const std::string& name) const;
};

/// Immutable multi-attribute hourly time series organized as daily periods.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<AttributeProfile> attributes, int hours_per_day);

  int n_days() const { return n_days_; }
  int hours_per_day() const { return hours_per_day_; }
  int n_attributes() const { return static_cast<int>(attributes_.size()); }

  const std::vector<AttributeProfile>& attributes() const { return attributes_; }
  const AttributeProfile& attribute(const std::string& name) const;
  int attribute_index(const std::string& name) const;  // -1 if absent
  std::vector<std::string> attribute_names() const;

  double value(int attribute, int day, int hour) const {
    return attributes_[attribute].values[static_cast<size_t>(day) * hours_per_day_ + hour];
  }

  Period day(int day_index) const;

 private:
  std::vector<AttributeProfile> attributes_;
  int n_days_ = 0;
  int hours_per_day_ = 0;
};

enum class ExtremumStatistic { Absolute, Integral };
enum class ExtremumDirection { Max, Min };

/// Loads a CSV of hourly rows. The header must name every schema attribute;
/// columns are matched by name, extra columns are ignored. Row order is
/// chronological and authoritative; no timestamps are parsed.
Dataset load_csv(const std::string& path, const std::vector<std::string>& schema,
                 int hours_per_day = 24);
Dataset load_csv(std::istream& in, const std::vector<std::string>& schema,
                 int hours_per_day = 24, const std::string& origin = "<stream>");

/// Writes a dataset in the same CSV layout load_csv reads.
void write_csv(const Dataset& data, std::ostream& out);
void write_csv(const Dataset& data, const std::string& path);

/// The five-attribute schema of the residential supply system.
std::vector<std::string> default_schema();

/// Checks the physical-range invariants that only apply to original-unit
/// data: solar_cf in [0,1] and non-negative demands.
void validate_original_units(const Dataset& data);

/// Z-normalizes every attribute to mean 0, standard deviation 1 (population
/// divisor N). Constant attributes map to all zeros and record sigma = 0.
std::pair<Dataset, NormalizationParams> z_normalize(const Dataset& data);

/// Inverse of z_normalize: x = z * sigma + mu per attribute.
Dataset denormalize(const Dataset& data, const NormalizationParams& params);

/// Maps a flat attribute-major vector (length N_d * N_t, normalized space)
/// back to a Period in original units.
Period period_from_vector(const std::vector<double>& flat,
                          const std::vector<std::string>& attribute_names, int hours_per_day,
                          int day_index);
std::vector<double> period_to_vector(const Period& period);
Period denormalize_period(const Period& period, const NormalizationParams& params);

/// Day holding the extreme value of one attribute. `Absolute` compares single
/// hourly values, `Integral` compares daily sums. Ties break to the lowest
/// day index.
int attribute_extremum(const Dataset& data, const std::string& attribute,
                       ExtremumStatistic statistic, ExtremumDirection direction);

}  // namespace repday

#endif  // REPDAY_TIMESERIES_HPP
