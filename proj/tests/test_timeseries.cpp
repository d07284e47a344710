#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "repday/timeseries.hpp"

using namespace repday;

namespace {

Dataset three_hour_dataset(std::vector<double> el, std::vector<double> heat) {
  std::vector<AttributeProfile> profiles;
  profiles.push_back({attr::el_demand, "kWh/h", std::move(el)});
  profiles.push_back({attr::heat_demand, "kWh/h", std::move(heat)});
  return Dataset(std::move(profiles), 3);
}

}  // namespace

TEST_CASE("z-normalization matches hand-computed population statistics") {
  // Oracle, frozen by hand: x = [1,2,3] has mu = 2 and population sigma
  // sqrt(((1)^2+0+(1)^2)/3) = sqrt(2/3); z = [-(3/2)^(1/2), 0, +(3/2)^(1/2)].
  const auto [norm, params] = z_normalize(three_hour_dataset({1.0, 2.0, 3.0}, {5.0, 5.0, 5.0}));

  const auto& s = params.find(attr::el_demand);
  CHECK(s.mu == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.sigma == doctest::Approx(0.816496580927726).epsilon(1e-14));
  CHECK(norm.value(0, 0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-14));
  CHECK(norm.value(0, 0, 1) == doctest::Approx(0.0));
  CHECK(norm.value(0, 0, 2) == doctest::Approx(1.224744871391589).epsilon(1e-14));
  CHECK(norm.attribute(attr::el_demand).unit == "z");
}

TEST_CASE("constant attribute normalizes to zeros with sigma recorded as 0") {
  const auto [norm, params] = z_normalize(three_hour_dataset({1.0, 2.0, 3.0}, {5.0, 5.0, 5.0}));
  CHECK(params.find(attr::heat_demand).sigma == 0.0);
  CHECK(params.find(attr::heat_demand).mu == doctest::Approx(5.0));
  for (int h = 0; h < 3; ++h) CHECK(norm.value(1, 0, h) == 0.0);
}

TEST_CASE("denormalize inverts normalization exactly on a hand case") {
  // Oracle: z = [-1, +1] with mu = 0.28, sigma = 0.09 maps to [0.19, 0.37].
  std::vector<AttributeProfile> profiles;
  profiles.push_back({attr::el_price, "z", {-1.0, 1.0}});
  Dataset z(std::move(profiles), 2);
  NormalizationParams params;
  params.per_attribute.push_back({attr::el_price, 0.28, 0.09});
  const Dataset back = denormalize(z, params);
  CHECK(back.value(0, 0, 0) == doctest::Approx(0.19).epsilon(1e-15));
  CHECK(back.value(0, 0, 1) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(back.attribute(attr::el_price).unit == "EUR/kWh");
}

TEST_CASE("z_normalize then denormalize round-trips") {
  const Dataset data = three_hour_dataset({0.4, 1.7, 0.9}, {3.0, 3.0, 3.0});
  const auto [norm, params] = z_normalize(data);
  const Dataset back = denormalize(norm, params);
  for (int a = 0; a < data.n_attributes(); ++a) {
    for (int h = 0; h < 3; ++h) {
      CHECK(back.value(a, 0, h) == doctest::Approx(data.value(a, 0, h)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dataset constructor rejects structural violations") {
  // Ragged: lengths not divisible by hours_per_day.
  std::vector<AttributeProfile> ragged;
  ragged.push_back({attr::el_demand, "kWh/h", {1.0, 2.0}});
  CHECK_THROWS_AS(Dataset(std::move(ragged), 3), DatasetError);

  // Mismatched lengths across attributes.
  std::vector<AttributeProfile> mismatch;
  mismatch.push_back({attr::el_demand, "kWh/h", {1.0, 2.0, 3.0}});
  mismatch.push_back({attr::heat_demand, "kWh/h", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}});
  CHECK_THROWS_AS(Dataset(std::move(mismatch), 3), DatasetError);

  // Duplicate attribute names.
  std::vector<AttributeProfile> dup;
  dup.push_back({attr::el_demand, "kWh/h", {1.0, 2.0, 3.0}});
  dup.push_back({attr::el_demand, "kWh/h", {1.0, 2.0, 3.0}});
  CHECK_THROWS_AS(Dataset(std::move(dup), 3), DatasetError);

  // NaN payload.
  std::vector<AttributeProfile> nan_prof;
  nan_prof.push_back({attr::el_demand, "kWh/h", {1.0, std::nan(""), 3.0}});
  CHECK_THROWS_AS(Dataset(std::move(nan_prof), 3), DatasetError);
}

TEST_CASE("original-unit validation rejects out-of-range physics") {
  std::vector<AttributeProfile> bad_cf;
  bad_cf.push_back({attr::solar_cf, "-", {0.5, 1.2, 0.0}});
  const Dataset d1(std::move(bad_cf), 3);
  CHECK_THROWS_AS(validate_original_units(d1), DatasetError);

  std::vector<AttributeProfile> bad_demand;
  bad_demand.push_back({attr::heat_demand, "kWh/h", {0.5, -0.1, 0.0}});
  const Dataset d2(std::move(bad_demand), 3);
  CHECK_THROWS_AS(validate_original_units(d2), DatasetError);

  // Negative values are fine for z-normalized data: the structural
  // constructor accepts them and only the unit validator complains.
  std::vector<AttributeProfile> z_ok;
  z_ok.push_back({attr::heat_demand, "z", {-1.0, 0.0, 1.0}});
  CHECK_NOTHROW(Dataset(std::move(z_ok), 3));
}

TEST_CASE("CSV loader matches columns by name and ignores extras") {
  std::istringstream in(
      "comment,el_demand,heat_demand,t_ambient,solar_cf,el_price\n"
      "x,1.0,2.0,-3.5,0.1,0.30\n"
      "y,1.5,2.5,-3.0,0.2,0.35\n");
  const Dataset d = load_csv(in, default_schema(), 2);
  CHECK(d.n_days() == 1);
  CHECK(d.hours_per_day() == 2);
  CHECK(d.n_attributes() == 5);
  CHECK(d.value(d.attribute_index(attr::heat_demand), 0, 1) == doctest::Approx(2.5));
  CHECK(d.value(d.attribute_index(attr::t_ambient), 0, 0) == doctest::Approx(-3.5));
}

TEST_CASE("CSV loader reports structured errors") {
  SUBCASE("missing column") {
    std::istringstream in("el_demand,heat_demand\n1.0,2.0\n");
    try {
      load_csv(in, default_schema(), 1);
      FAIL("expected CsvError");
    } catch (const CsvError& e) {
      CHECK(e.kind() == CsvError::Kind::MissingColumn);
    }
  }
  SUBCASE("non-numeric cell") {
    std::istringstream in(
        "el_demand,heat_demand,t_ambient,solar_cf,el_price\n"
        "1.0,oops,0.0,0.1,0.3\n");
    try {
      load_csv(in, default_schema(), 1);
      FAIL("expected CsvError");
    } catch (const CsvError& e) {
      CHECK(e.kind() == CsvError::Kind::NonNumericCell);
      CHECK(e.row() == 1);
    }
  }
  SUBCASE("NaN cell") {
    std::istringstream in(
        "el_demand,heat_demand,t_ambient,solar_cf,el_price\n"
        "1.0,nan,0.0,0.1,0.3\n");
    try {
      load_csv(in, default_schema(), 1);
      FAIL("expected CsvError");
    } catch (const CsvError& e) {
      CHECK(e.kind() == CsvError::Kind::NaNValue);
    }
  }
  SUBCASE("row count not divisible by hours_per_day") {
    std::istringstream in(
        "el_demand,heat_demand,t_ambient,solar_cf,el_price\n"
        "1.0,2.0,0.0,0.1,0.3\n"
        "1.0,2.0,0.0,0.1,0.3\n"
        "1.0,2.0,0.0,0.1,0.3\n");
    try {
      load_csv(in, default_schema(), 2);
      FAIL("expected CsvError");
    } catch (const CsvError& e) {
      CHECK(e.kind() == CsvError::Kind::RaggedLength);
    }
  }
  SUBCASE("file not found") {
    try {
      load_csv("/nonexistent/path/data.csv", default_schema());
      FAIL("expected CsvError");
    } catch (const CsvError& e) {
      CHECK(e.kind() == CsvError::Kind::FileNotFound);
    }
  }
}

TEST_CASE("CSV write/load round-trip preserves every value bit-exactly") {
  std::vector<AttributeProfile> profiles;
  profiles.push_back({attr::el_demand, "kWh/h", {0.1, 1.0 / 3.0, 2.5}});
  profiles.push_back({attr::heat_demand, "kWh/h", {1e-9, 123.456, 0.0}});
  profiles.push_back({attr::t_ambient, "degC", {-12.25, 0.0, 33.3}});
  profiles.push_back({attr::solar_cf, "-", {0.0, 0.9999999999999999, 0.5}});
  profiles.push_back({attr::el_price, "EUR/kWh", {0.19, 0.37, 0.301}});
  const Dataset d(std::move(profiles), 3);

  std::ostringstream out;
  write_csv(d, out);
  std::istringstream in(out.str());
  const Dataset back = load_csv(in, default_schema(), 3);

  for (int a = 0; a < d.n_attributes(); ++a) {
    const int b = back.attribute_index(d.attributes()[a].name);
    REQUIRE(b >= 0);
    for (int h = 0; h < 3; ++h) {
      CHECK(back.value(b, 0, h) == d.value(a, 0, h));  // exact, 17 digits round-trip
    }
  }
}

TEST_CASE("period/vector conversions use attribute-major layout") {
  const Dataset d = three_hour_dataset({1.0, 2.0, 3.0}, {4.0, 5.0, 6.0});
  const Period p = d.day(0);
  const std::vector<double> flat = period_to_vector(p);
  REQUIRE(flat.size() == 6);
  CHECK(flat == std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0, 6.0});

  const Period q = period_from_vector(flat, p.attribute_names, 3, 7);
  CHECK(q.day_index == 7);
  CHECK(q.row(attr::heat_demand) == std::vector<double>{4.0, 5.0, 6.0});

  CHECK_THROWS_AS(period_from_vector({1.0, 2.0}, p.attribute_names, 3, 0), DatasetError);
}

TEST_CASE("denormalize_period applies per-attribute statistics") {
  Period p;
  p.day_index = 0;
  p.attribute_names = {attr::el_demand, attr::heat_demand};
  p.matrix = {{-1.0, 1.0}, {0.0, 2.0}};
  NormalizationParams params;
  params.per_attribute.push_back({attr::el_demand, 10.0, 2.0});
  params.per_attribute.push_back({attr::heat_demand, 1.0, 0.5});
  const Period out = denormalize_period(p, params);
  CHECK(out.matrix[0] == std::vector<double>{8.0, 12.0});
  CHECK(out.matrix[1] == std::vector<double>{1.0, 2.0});
}

TEST_CASE("attribute extremum statistics and tie-breaking") {
  // Day 0: el = [1, 5]; day 1: el = [4, 4]; day 2: el = [5, 0].
  // Absolute max = 5 first reached on day 0 (tie with day 2 -> lowest wins).
  // Integral: sums are 6, 8, 5 -> max day 1, min day 2.
  std::vector<AttributeProfile> profiles;
  profiles.push_back({attr::el_demand, "kWh/h", {1.0, 5.0, 4.0, 4.0, 5.0, 0.0}});
  const Dataset d(std::move(profiles), 2);

  CHECK(attribute_extremum(d, attr::el_demand, ExtremumStatistic::Absolute,
                           ExtremumDirection::Max) == 0);
  CHECK(attribute_extremum(d, attr::el_demand, ExtremumStatistic::Absolute,
                           ExtremumDirection::Min) == 2);
  CHECK(attribute_extremum(d, attr::el_demand, ExtremumStatistic::Integral,
                           ExtremumDirection::Max) == 1);
  CHECK(attribute_extremum(d, attr::el_demand, ExtremumStatistic::Integral,
                           ExtremumDirection::Min) == 2);
  CHECK_THROWS_AS(attribute_extremum(d, "bogus", ExtremumStatistic::Absolute,
                                     ExtremumDirection::Max),
                  UnknownAttributeError);
}
