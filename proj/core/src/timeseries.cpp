#include "repday/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

namespace repday {

namespace {

bool is_demand_like(const std::string& name) {
  return name == attr::el_demand || name == attr::heat_demand;
}

std::string default_unit(const std::string& name) {
  if (name == attr::el_demand || name == attr::heat_demand) return "kWh/h";
  if (name == attr::t_ambient) return "degC";
  if (name == attr::solar_cf) return "-";
  if (name == attr::el_price) return "EUR/kWh";
  return "";
}

void validate_profile(const AttributeProfile& p, int n_days, int hours_per_day) {
  const size_t expected = static_cast<size_t>(n_days) * hours_per_day;
  if (p.values.size() != expected) {
    throw DatasetError("attribute '" + p.name + "' has " + std::to_string(p.values.size()) +
                       " values, expected " + std::to_string(expected));
  }
  for (size_t i = 0; i < p.values.size(); ++i) {
    if (std::isnan(p.values[i])) {
      throw DatasetError("attribute '" + p.name + "' has NaN at index " + std::to_string(i));
    }
  }
}

}  // namespace

void validate_original_units(const Dataset& data) {
  for (const auto& p : data.attributes()) {
    for (size_t i = 0; i < p.values.size(); ++i) {
      const double v = p.values[i];
      if (p.name == attr::solar_cf && (v < 0.0 || v > 1.0)) {
        throw DatasetError("solar_cf out of [0,1] at index " + std::to_string(i) + ": " +
                           std::to_string(v));
      }
      if (is_demand_like(p.name) && v < 0.0) {
        throw DatasetError("negative demand in '" + p.name + "' at index " + std::to_string(i));
      }
    }
  }
}

const std::vector<double>& Period::row(const std::string& attribute) const {
  for (size_t i = 0; i < attribute_names.size(); ++i) {
    if (attribute_names[i] == attribute) return matrix[i];
  }
  throw UnknownAttributeError(attribute);
}

const NormalizationParams::Stats& NormalizationParams::find(const std::string& name) const {
  for (const auto& s : per_attribute) {
    if (s.name == name) return s;
  }
  throw UnknownAttributeError(name);
}

bool NormalizationParams::has(const std::string& name) const {
  for (const auto& s : per_attribute) {
    if (s.name == name) return true;
  }
  return false;
}

Dataset::Dataset(std::vector<AttributeProfile> attributes, int hours_per_day)
    : attributes_(std::move(attributes)), hours_per_day_(hours_per_day) {
  if (attributes_.empty()) throw DatasetError("dataset needs at least one attribute");
  if (hours_per_day_ < 1) throw DatasetError("hours_per_day must be >= 1");
  const size_t total = attributes_.front().values.size();
  if (total == 0 || total % static_cast<size_t>(hours_per_day_) != 0) {
    throw DatasetError("value count " + std::to_string(total) +
                       " not divisible by hours_per_day " + std::to_string(hours_per_day_));
  }
  n_days_ = static_cast<int>(total / hours_per_day_);

  std::unordered_set<std::string> seen;
  for (const auto& p : attributes_) {
    if (!seen.insert(p.name).second) {
      throw DatasetError("duplicate attribute name '" + p.name + "'");
    }
    validate_profile(p, n_days_, hours_per_day_);
  }
}

const AttributeProfile& Dataset::attribute(const std::string& name) const {
  const int idx = attribute_index(name);
  if (idx < 0) throw UnknownAttributeError(name);
  return attributes_[idx];
}

int Dataset::attribute_index(const std::string& name) const {
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> Dataset::attribute_names() const {
  std::vector<std::string> names;
  names.reserve(attributes_.size());
  for (const auto& p : attributes_) names.push_back(p.name);
  return names;
}

Period Dataset::day(int day_index) const {
  if (day_index < 0 || day_index >= n_days_) {
    throw DatasetError("day index " + std::to_string(day_index) + " out of range [0, " +
                       std::to_string(n_days_) + ")");
  }
  Period p;
  p.day_index = day_index;
  p.attribute_names = attribute_names();
  p.matrix.resize(attributes_.size());
  for (size_t a = 0; a < attributes_.size(); ++a) {
    const auto begin = attributes_[a].values.begin() +
                       static_cast<long>(day_index) * hours_per_day_;
    p.matrix[a].assign(begin, begin + hours_per_day_);
  }
  return p;
}

std::vector<std::string> default_schema() {
  return {attr::el_demand, attr::heat_demand, attr::t_ambient, attr::solar_cf, attr::el_price};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Dataset load_csv(std::istream& in, const std::vector<std::string>& schema, int hours_per_day,
                 const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw CsvError(CsvError::Kind::RaggedLength, origin + ": empty file");
  }
  const auto header = split_csv_line(line);
  std::vector<int> column_of(schema.size(), -1);
  for (size_t s = 0; s < schema.size(); ++s) {
    for (size_t h = 0; h < header.size(); ++h) {
      if (trim(header[h]) == schema[s]) {
        column_of[s] = static_cast<int>(h);
        break;
      }
    }
    if (column_of[s] < 0) {
      throw CsvError(CsvError::Kind::MissingColumn, origin + ": missing column '" + schema[s] + "'");
    }
  }

  std::vector<AttributeProfile> profiles(schema.size());
  for (size_t s = 0; s < schema.size(); ++s) {
    profiles[s].name = schema[s];
    profiles[s].unit = default_unit(schema[s]);
  }

  long row = 1;  // header was row 0
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    const auto fields = split_csv_line(line);
    for (size_t s = 0; s < schema.size(); ++s) {
      const int col = column_of[s];
      if (col >= static_cast<int>(fields.size())) {
        throw CsvError(CsvError::Kind::NonNumericCell,
                       origin + ": row " + std::to_string(row) + " has too few fields", row, col);
      }
      const std::string cell = trim(fields[col]);
      double v = 0.0;
      const auto* first = cell.data();
      const auto* last = cell.data() + cell.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc{} || ptr != last) {
        throw CsvError(CsvError::Kind::NonNumericCell,
                       origin + ": non-numeric cell at row " + std::to_string(row) + ", column '" +
                           schema[s] + "'",
                       row, col);
      }
      if (std::isnan(v)) {
        throw CsvError(CsvError::Kind::NaNValue,
                       origin + ": NaN at row " + std::to_string(row) + ", column '" + schema[s] +
                           "'",
                       row, col);
      }
      profiles[s].values.push_back(v);
    }
    ++row;
  }

  const size_t count = profiles.front().values.size();
  if (count == 0 || count % static_cast<size_t>(hours_per_day) != 0) {
    throw CsvError(CsvError::Kind::RaggedLength,
                   origin + ": " + std::to_string(count) + " data rows not divisible by " +
                       std::to_string(hours_per_day));
  }
  Dataset data(std::move(profiles), hours_per_day);
  validate_original_units(data);
  return data;
}

Dataset load_csv(const std::string& path, const std::vector<std::string>& schema,
                 int hours_per_day) {
  std::ifstream in(path);
  if (!in) {
    throw CsvError(CsvError::Kind::FileNotFound, "cannot open '" + path + "'");
  }
  return load_csv(in, schema, hours_per_day, path);
}

void write_csv(const Dataset& data, std::ostream& out) {
  const auto& attrs = data.attributes();
  for (size_t a = 0; a < attrs.size(); ++a) {
    out << (a ? "," : "") << attrs[a].name;
  }
  out << "\n";
  std::ostringstream cell;
  cell << std::setprecision(17);
  const size_t total = static_cast<size_t>(data.n_days()) * data.hours_per_day();
  for (size_t i = 0; i < total; ++i) {
    for (size_t a = 0; a < attrs.size(); ++a) {
      cell.str("");
      cell << attrs[a].values[i];
      out << (a ? "," : "") << cell.str();
    }
    out << "\n";
  }
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write '" + path + "'");
  write_csv(data, out);
}

std::pair<Dataset, NormalizationParams> z_normalize(const Dataset& data) {
  NormalizationParams params;
  std::vector<AttributeProfile> out = data.attributes();
  for (auto& p : out) {
    const size_t n = p.values.size();
    double mu = 0.0;
    for (double v : p.values) mu += v;
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (double v : p.values) var += (v - mu) * (v - mu);
    var /= static_cast<double>(n);  // population divisor
    const double sigma = std::sqrt(var);
    params.per_attribute.push_back({p.name, mu, sigma});
    if (sigma > 0.0) {
      for (double& v : p.values) v = (v - mu) / sigma;
    } else {
      for (double& v : p.values) v = 0.0;
    }
    p.unit = "z";
  }
  return {Dataset(std::move(out), data.hours_per_day()), params};
}

Dataset denormalize(const Dataset& data, const NormalizationParams& params) {
  std::vector<AttributeProfile> out = data.attributes();
  for (auto& p : out) {
    const auto& s = params.find(p.name);  // throws UnknownAttributeError
    for (double& v : p.values) v = v * s.sigma + s.mu;
    p.unit = default_unit(p.name);
  }
  return Dataset(std::move(out), data.hours_per_day());
}

Period period_from_vector(const std::vector<double>& flat,
                          const std::vector<std::string>& attribute_names, int hours_per_day,
                          int day_index) {
  if (flat.size() != attribute_names.size() * static_cast<size_t>(hours_per_day)) {
    throw DatasetError("flat vector length does not match attributes * hours");
  }
  Period p;
  p.day_index = day_index;
  p.attribute_names = attribute_names;
  p.matrix.resize(attribute_names.size());
  for (size_t a = 0; a < attribute_names.size(); ++a) {
    const auto begin = flat.begin() + static_cast<long>(a) * hours_per_day;
    p.matrix[a].assign(begin, begin + hours_per_day);
  }
  return p;
}

std::vector<double> period_to_vector(const Period& period) {
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(period.n_attributes()) * period.n_hours());
  for (const auto& row : period.matrix) flat.insert(flat.end(), row.begin(), row.end());
  return flat;
}

Period denormalize_period(const Period& period, const NormalizationParams& params) {
  Period out = period;
  for (size_t a = 0; a < out.attribute_names.size(); ++a) {
    const auto& s = params.find(out.attribute_names[a]);
    for (double& v : out.matrix[a]) v = v * s.sigma + s.mu;
  }
  return out;
}

int attribute_extremum(const Dataset& data, const std::string& attribute,
                       ExtremumStatistic statistic, ExtremumDirection direction) {
  const auto& profile = data.attribute(attribute);  // throws UnknownAttributeError
  const int nt = data.hours_per_day();
  int best_day = 0;
  double best = 0.0;
  for (int d = 0; d < data.n_days(); ++d) {
    double score;
    if (statistic == ExtremumStatistic::Integral) {
      score = 0.0;
      for (int t = 0; t < nt; ++t) score += profile.values[static_cast<size_t>(d) * nt + t];
    } else {
      score = profile.values[static_cast<size_t>(d) * nt];
      for (int t = 1; t < nt; ++t) {
        const double v = profile.values[static_cast<size_t>(d) * nt + t];
        if (direction == ExtremumDirection::Max ? v > score : v < score) score = v;
      }
    }
    const bool better =
        direction == ExtremumDirection::Max ? score > best : score < best;
    if (d == 0 || better) {
      best = score;
      best_day = d;
    }
  }
  return best_day;
}

}  // namespace repday
