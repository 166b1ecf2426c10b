#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "stcausal/error.hpp"
#include "stcausal/geo.hpp"
#include "stcausal/ingest.hpp"
#include "stcausal/rng.hpp"
#include "stcausal/serialize.hpp"
#include "stcausal/stats.hpp"
#include "stcausal/transform.hpp"

using namespace stcausal;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  auto dir = std::filesystem::temp_directory_path() / "stcausal_core_test";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

PollutantSeries hourly_series(Timestamp t0, const std::vector<double>& values) {
  PollutantSeries s;
  s.sensor = 0;
  s.category = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.timestamps.push_back(t0 + static_cast<Timestamp>(i) * kSecondsPerHour);
    s.values.push_back(values[i]);
  }
  return s;
}

// Independent chi2 oracle: Simpson integration of the density with the
// substitution t = u^2, which removes the df=1 singularity at zero.
double chi2_cdf_by_quadrature(double x, double df) {
  auto integrand = [&](double u) {
    double t = u * u;
    if (t <= 0.0) return df == 1.0 ? 2.0 * std::exp(-std::lgamma(0.5) - 0.5 * std::log(2.0))
                                   : 0.0;
    double logpdf = (df / 2.0 - 1.0) * std::log(t) - t / 2.0 - std::lgamma(df / 2.0) -
                    (df / 2.0) * std::log(2.0);
    return 2.0 * u * std::exp(logpdf);
  };
  const int steps = 20000;
  const double top = std::sqrt(x);
  double h = top / steps, sum = 0.0;
  for (int i = 0; i < steps; ++i) {
    double a = i * h, b = a + h;
    sum += (b - a) / 6.0 * (integrand(a) + 4.0 * integrand((a + b) / 2.0) + integrand(b));
  }
  return sum;
}

// Independent normal-quantile oracle: bisection on erfc.
double normal_quantile_by_bisection(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("iso timestamps round-trip") {
  auto t = parse_iso("2014-03-01T13:00:00");
  REQUIRE(t.has_value());
  CHECK(format_iso(*t) == "2014-03-01T13:00:00");
  CHECK(month_of_day(day_of(*t)) == 3);
  CHECK(year_of_day(day_of(*t)) == 2014);
  CHECK(!parse_iso("not a time").has_value());
  CHECK(!parse_iso("2014-13-01T00:00:00").has_value());
}

TEST_CASE("chi2 quantile matches quadrature oracle") {
  CHECK(chi2_quantile(1, 0.05) == doctest::Approx(3.8415).epsilon(1e-3));
  CHECK(chi2_quantile(3, 0.05) == doctest::Approx(7.8147).epsilon(1e-3));
  CHECK(chi2_quantile(5, 1.0) == 0.0);
  for (double df : {1.0, 2.0, 3.0, 7.0, 20.0}) {
    double q = chi2_quantile(df, 0.05);
    CHECK(chi2_cdf_by_quadrature(q, df) == doctest::Approx(0.95).epsilon(1e-5));
  }
}

TEST_CASE("sax breakpoints are the normal quantiles") {
  auto beta = sax_breakpoints(3);
  REQUIRE(beta.size() == 2);
  CHECK(beta[0] == doctest::Approx(-0.4307).epsilon(1e-3));
  CHECK(beta[1] == doctest::Approx(0.4307).epsilon(1e-3));
  for (int a = 2; a <= 10; ++a) {
    auto b = sax_breakpoints(a);
    for (int j = 1; j < a; ++j)
      CHECK(b[j - 1] ==
            doctest::Approx(normal_quantile_by_bisection(double(j) / a)).epsilon(1e-9));
  }
}

TEST_CASE("haversine") {
  CHECK(haversine_km(39.9, 116.4, 39.9, 116.4) == 0.0);
  // Beijing to Tianjin, checked against an independent great-circle oracle.
  CHECK(haversine_km(39.9042, 116.4074, 39.3434, 117.3616) ==
        doctest::Approx(103.0).epsilon(0.01));
  // Antipodal points: half the circumference.
  CHECK(haversine_km(0.0, 0.0, 0.0, 180.0) ==
        doctest::Approx(M_PI * 6371.0).epsilon(1e-5));

  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    double lat1 = rng.uniform(-90, 90), lon1 = rng.uniform(-180, 180);
    double lat2 = rng.uniform(-90, 90), lon2 = rng.uniform(-180, 180);
    double lat3 = rng.uniform(-90, 90), lon3 = rng.uniform(-180, 180);
    double dab = haversine_km(lat1, lon1, lat2, lon2);
    double dba = haversine_km(lat2, lon2, lat1, lon1);
    CHECK(dab == doctest::Approx(dba).epsilon(1e-12));
    double dac = haversine_km(lat1, lon1, lat3, lon3);
    double dcb = haversine_km(lat3, lon3, lat2, lon2);
    CHECK(dab <= dac + dcb + 1e-9);
  }
}

TEST_CASE("diff_normalize basics") {
  Timestamp t0 = *parse_iso("2014-01-01T00:00:00");

  SUBCASE("constant diffs degenerate to zero") {
    auto d = diff_normalize(hourly_series(t0, {1, 2, 3, 4, 5}));
    REQUIRE(d.values.size() == 4);
    for (double v : d.values) CHECK(v == 0.0);
  }
  SUBCASE("alternating series") {
    auto d = diff_normalize(hourly_series(t0, {0, 1, 0, 1, 0}));
    REQUIRE(d.values.size() == 4);
    CHECK(d.values[0] == doctest::Approx(1.0));
    CHECK(d.values[1] == doctest::Approx(-1.0));
    CHECK(d.values[2] == doctest::Approx(1.0));
    CHECK(d.values[3] == doctest::Approx(-1.0));
  }
  SUBCASE("gap breaks differencing") {
    PollutantSeries s = hourly_series(t0, {0, 1, 0});
    s.timestamps.push_back(s.timestamps.back() + 3 * kSecondsPerHour);
    s.values.push_back(5.0);
    s.timestamps.push_back(s.timestamps.back() + kSecondsPerHour);
    s.values.push_back(4.0);
    auto d = diff_normalize(s);
    REQUIRE(d.values.size() == 4);
    CHECK(is_missing(d.values[2]));  // across the gap
    CHECK(!is_missing(d.values[3]));
  }
  SUBCASE("too short") {
    CHECK_THROWS_AS(diff_normalize(hourly_series(t0, {1})), Error);
  }
  SUBCASE("z-normalization") {
    Rng rng(3);
    std::vector<double> vals;
    for (int i = 0; i < 500; ++i) vals.push_back(rng.normal() * 7 + 3);
    auto d = diff_normalize(hourly_series(t0, vals));
    double mean = 0, n = 0;
    for (double v : d.values)
      if (!is_missing(v)) {
        mean += v;
        n++;
      }
    mean /= n;
    double ss = 0;
    for (double v : d.values)
      if (!is_missing(v)) ss += (v - mean) * (v - mean);
    CHECK(std::abs(mean) < 1e-6);
    CHECK(std::sqrt(ss / n) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("shift invariance") {
    // Integer-valued readings so the shifted subtraction is exact in floats.
    Rng rng(11);
    std::vector<double> vals;
    for (int i = 0; i < 100; ++i) vals.push_back(static_cast<double>(rng.below(50)));
    auto d1 = diff_normalize(hourly_series(t0, vals));
    for (double& v : vals) v += 123.0;
    auto d2 = diff_normalize(hourly_series(t0, vals));
    for (std::size_t i = 0; i < d1.values.size(); ++i)
      CHECK(d1.values[i] == d2.values[i]);
  }
}

TEST_CASE("sax_discretize") {
  Timestamp t0 = *parse_iso("2014-01-01T00:00:00");

  SUBCASE("constant maps to the median level") {
    auto sym = sax_discretize(hourly_series(t0, {5, 5, 5, 5}), 3);
    REQUIRE(sym.days.size() == 1);
    for (auto [lvl, off] : sym.days[0].events) CHECK(lvl == 2);
  }
  SUBCASE("levels against frozen breakpoints") {
    // A zero-mean triple scaled to unit population variance is its own
    // z-normalization, so the symbols compare -1, 0, 1 with the breakpoints.
    double m = std::sqrt(1.5);
    auto sym = sax_discretize(hourly_series(t0, {-m, 0, m}), 3);
    REQUIRE(sym.days.size() == 1);
    REQUIRE(sym.days[0].events.size() == 3);
    CHECK(sym.days[0].events[0].first == 1);
    CHECK(sym.days[0].events[1].first == 2);
    CHECK(sym.days[0].events[2].first == 3);
    CHECK(sym.days[0].events[0].second == 0);
    CHECK(sym.days[0].events[1].second == 60);
    CHECK(sym.days[0].events[2].second == 120);
  }
  SUBCASE("monotone in the reading") {
    Rng rng(5);
    std::vector<double> vals;
    for (int i = 0; i < 300; ++i) vals.push_back(rng.normal());
    for (int a : {2, 5, 10}) {
      auto sym = sax_discretize(hourly_series(t0, vals), a);
      std::vector<std::pair<double, int>> seen;
      std::size_t vi = 0;
      for (const auto& day : sym.days)
        for (auto [lvl, off] : day.events) seen.emplace_back(vals[vi++], lvl);
      for (const auto& [va, la] : seen)
        for (const auto& [vb, lb] : seen)
          if (va < vb) CHECK(la <= lb);
    }
  }
  SUBCASE("day partitioning") {
    std::vector<double> vals(50);
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = static_cast<double>(i % 7);
    auto sym = sax_discretize(hourly_series(t0, vals), 4);
    REQUIRE(sym.days.size() == 3);  // 24 + 24 + 2 hours
    CHECK(sym.days[0].events.size() == 24);
    CHECK(sym.days[2].events.size() == 2);
  }
}

TEST_CASE("split_seasonal") {
  auto days_from = [](const char* iso, int n) {
    std::int64_t d0 = day_of(*parse_iso(iso));
    std::vector<std::int64_t> days(n);
    for (int i = 0; i < n; ++i) days[i] = d0 + i;
    return days;
  };

  SUBCASE("90-day single season") {
    auto split = split_seasonal(days_from("2014-03-01T00:00:00", 90), 15);
    CHECK(split.train_days[0].size() == 75);
    CHECK(split.test_days[0].size() == 15);
    CHECK(split.test_days[1].empty());
  }
  SUBCASE("n = 0 keeps everything in train") {
    auto split = split_seasonal(days_from("2014-03-01T00:00:00", 90), 0);
    CHECK(split.train_days[0].size() == 90);
    CHECK(split.test_days[0].empty());
  }
  SUBCASE("two years accumulate per-year test windows") {
    auto days = days_from("2014-03-01T00:00:00", 92);
    auto more = days_from("2015-03-01T00:00:00", 92);
    days.insert(days.end(), more.begin(), more.end());
    auto split = split_seasonal(days, 15);
    CHECK(split.test_days[0].size() == 30);
    CHECK(split.train_days[0].size() == 2 * 92 - 30);
  }
  SUBCASE("winter spans the year boundary as one block") {
    auto days = days_from("2014-12-01T00:00:00", 90);  // Dec-Feb
    auto split = split_seasonal(days, 15);
    CHECK(split.test_days[3].size() == 15);
    CHECK(split.train_days[3].size() == 75);
  }
  SUBCASE("no day in both train and test") {
    auto days = days_from("2014-03-01T00:00:00", 92);
    auto split = split_seasonal(days, 15);
    for (auto d : split.test_days[0])
      CHECK(!std::binary_search(split.train_days[0].begin(), split.train_days[0].end(),
                                d));
  }
  SUBCASE("insufficient data") {
    CHECK_THROWS_AS(split_seasonal(days_from("2014-03-01T00:00:00", 20), 15), Error);
  }
}

TEST_CASE("normality check calibration") {
  // Monte-Carlo oracle: Gaussian samples should rarely reject, uniform
  // samples should always reject at this size.
  int gaussian_ok = 0;
  const int runs = 100;
  for (int r = 0; r < runs; ++r) {
    Rng rng(2000 + r);
    std::vector<double> x(10000);
    for (auto& v : x) v = rng.normal();
    if (dagostino_pearson(x).p_value > 0.01) ++gaussian_ok;
  }
  CHECK(gaussian_ok >= 99);

  Rng rng(42);
  std::vector<double> u(10000);
  for (auto& v : u) v = rng.uniform();
  CHECK(dagostino_pearson(u).p_value < 0.01);

  // Exactly symmetric sample: skewness component is zero.
  std::vector<double> sym;
  for (int i = 0; i < 50; ++i) {
    sym.push_back(-1.0);
    sym.push_back(1.0);
  }
  CHECK(dagostino_pearson(sym).z_skew == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> few(10, 0.5);
  CHECK_THROWS_AS(dagostino_pearson(few), Error);
}

TEST_CASE("air quality ingestion") {
  std::string header = "sensor_id,timestamp,PM25,PM10,NO2,CO,O3,SO2\n";
  std::string meta = "sensor_id,city_id,lat,lon\nS1,C1,39.9,116.4\nS2,C1,39.8,116.5\n";
  auto meta_path = write_temp("sensors.csv", meta);

  SUBCASE("2 sensors x 24 rows gives 12 series") {
    std::string body;
    for (int h = 0; h < 24; ++h) {
      char ts[32];
      std::snprintf(ts, sizeof(ts), "2014-01-01T%02d:00:00", h);
      for (const char* s : {"S1", "S2"})
        body += std::string(s) + "," + ts + ",1,2,3,4,5,6\n";
    }
    auto path = write_temp("aq.csv", header + body);
    auto sensors = ingest_sensor_meta(meta_path);
    auto series = ingest_air_quality(path, sensors);
    CHECK(series.size() == 12);
    for (const auto& s : series) CHECK(s.timestamps.size() == 24);
  }
  SUBCASE("empty file with header only") {
    auto path = write_temp("aq_empty.csv", header);
    auto series = ingest_air_quality(path, ingest_sensor_meta(meta_path));
    CHECK(series.empty());
  }
  SUBCASE("duplicate timestamp is an error") {
    std::string body = "S1,2014-01-01T00:00:00,1,2,3,4,5,6\n"
                       "S1,2014-01-01T00:00:00,1,2,3,4,5,6\n";
    auto path = write_temp("aq_dup.csv", header + body);
    auto sensors = ingest_sensor_meta(meta_path);
    CHECK_THROWS_WITH_AS(ingest_air_quality(path, sensors),
                         doctest::Contains("DuplicateTimestamp"), Error);
  }
  SUBCASE("unknown sensor rejected") {
    std::string body = "S9,2014-01-01T00:00:00,1,2,3,4,5,6\n";
    auto path = write_temp("aq_unknown.csv", header + body);
    auto sensors = ingest_sensor_meta(meta_path);
    CHECK_THROWS_WITH_AS(ingest_air_quality(path, sensors),
                         doctest::Contains("UnknownSensor"), Error);
  }
  SUBCASE("malformed row reports the line") {
    std::string body = "S1,2014-01-01T00:00:00,1,2,3,4,5,6\nS1,garbage,1,2,3,4,5,6\n";
    auto path = write_temp("aq_bad.csv", header + body);
    auto sensors = ingest_sensor_meta(meta_path);
    CHECK_THROWS_WITH_AS(ingest_air_quality(path, sensors), doctest::Contains(":3"),
                         Error);
  }
  SUBCASE("out-of-order rows sorted, empty cells missing") {
    std::string body = "S1,2014-01-01T01:00:00,1,,3,4,5,6\n"
                       "S1,2014-01-01T00:00:00,2,2,3,4,5,6\n";
    auto path = write_temp("aq_order.csv", header + body);
    auto series = ingest_air_quality(path, ingest_sensor_meta(meta_path));
    const PollutantSeries* pm10 = nullptr;
    for (const auto& s : series)
      if (s.category == 1) pm10 = &s;
    REQUIRE(pm10 != nullptr);
    CHECK(pm10->timestamps[0] < pm10->timestamps[1]);
    CHECK(pm10->values[0] == 2.0);
    CHECK(is_missing(pm10->values[1]));
  }
}

TEST_CASE("meteorology grid averaging") {
  std::string header = "station_id,lat,lon,timestamp,T,P,H,WS,WD\n";
  GridSpec grid{30.0, 33.0, 110.0, 113.0, 3, 3};

  SUBCASE("one station per cell passes through") {
    std::string body;
    int id = 0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double lat = 30.5 + r, lon = 110.5 + c;
        body += "st" + std::to_string(id) + "," + std::to_string(lat) + "," +
                std::to_string(lon) + ",2014-01-01T00:00:00," + std::to_string(id) +
                ",2,3,4,5\n";
        ++id;
      }
    auto path = write_temp("met1.csv", header + body);
    auto m = ingest_meteorology(path, grid);
    CHECK(m.dim() == 45);
    REQUIRE(m.timestamps.size() == 1);
    for (int cell = 0; cell < 9; ++cell)
      CHECK(m.vectors(0, cell * 5 + 0) == static_cast<double>(cell));
  }
  SUBCASE("1x1 grid averages everything") {
    std::string body =
        "a,30.1,110.1,2014-01-01T00:00:00,0,0,0,0,0\n"
        "b,30.2,110.2,2014-01-01T00:00:00,2,2,2,2,2\n"
        "c,31.0,111.0,2014-01-01T00:00:00,4,4,4,4,4\n"
        "d,32.9,112.9,2014-01-01T00:00:00,6,6,6,6,6\n";
    auto path = write_temp("met2.csv", header + body);
    auto m = ingest_meteorology(path, GridSpec{30, 33, 110, 113, 1, 1});
    CHECK(m.dim() == 5);
    for (int k = 0; k < 5; ++k) CHECK(m.vectors(0, k) == 3.0);
  }
  SUBCASE("empty cell carries the region mean, hand-averaged") {
    // Five stations, none in the top-right cell. Region mean T
    // = (10+20+30+40+50)/5 = 30; cell (0,0) holds a and e: T = 30.
    std::string body =
        "a,30.5,110.5,2014-01-01T00:00:00,10,1,1,1,1\n"
        "b,30.5,111.5,2014-01-01T00:00:00,20,1,1,1,1\n"
        "c,31.5,110.5,2014-01-01T00:00:00,30,1,1,1,1\n"
        "d,31.5,111.5,2014-01-01T00:00:00,40,1,1,1,1\n"
        "e,30.6,110.6,2014-01-01T00:00:00,50,1,1,1,1\n";
    auto path = write_temp("met3.csv", header + body);
    auto m = ingest_meteorology(path, grid);
    CHECK(m.vectors(0, 0 * 5 + 0) == doctest::Approx(30.0));
    CHECK(m.vectors(0, 8 * 5 + 0) == doctest::Approx(30.0));
    CHECK(m.vectors(0, 1 * 5 + 0) == doctest::Approx(20.0));
  }
  SUBCASE("region without stations") {
    auto path = write_temp("met4.csv", header);
    CHECK_THROWS_WITH_AS(ingest_meteorology(path, grid),
                         doctest::Contains("EmptyRegion"), Error);
  }
}

TEST_CASE("dataset round-trips through json bitwise") {
  Dataset ds;
  ds.sensors.push_back({"S1", "C1", 39.9, 116.4});
  Rng rng(9);
  PollutantSeries s;
  s.sensor = 0;
  s.category = 2;
  Timestamp t0 = *parse_iso("2014-01-01T00:00:00");
  for (int i = 0; i < 100; ++i) {
    s.timestamps.push_back(t0 + i * kSecondsPerHour);
    s.values.push_back(i % 13 == 0 ? missing() : rng.normal() * 37.5);
  }
  ds.series.push_back(s);

  Json j = dataset_to_json(ds);
  Dataset back = dataset_from_json(Json::parse(j.dump()));
  REQUIRE(back.series.size() == 1);
  CHECK(back.sensors[0].sensor_id == "S1");
  CHECK(back.series[0].timestamps == ds.series[0].timestamps);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (is_missing(s.values[i]))
      CHECK(is_missing(back.series[0].values[i]));
    else
      CHECK(std::memcmp(&back.series[0].values[i], &s.values[i], sizeof(double)) == 0);
  }
}
