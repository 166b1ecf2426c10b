#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "stcausal/time.hpp"

namespace stcausal {

inline constexpr int kNumCategories = 6;  // M
inline constexpr std::array<std::string_view, kNumCategories> kCategoryNames = {
    "PM25", "PM10", "NO2", "CO", "O3", "SO2"};

int category_index(std::string_view name);  // -1 if unknown

inline double missing() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

struct SensorMeta {
  std::string sensor_id;
  std::string city_id;
  double latitude = 0.0;
  double longitude = 0.0;
};

struct PollutantSeries {
  int sensor = -1;    // index into the sensor table
  int category = -1;  // 0-based index into kCategoryNames
  std::vector<Timestamp> timestamps;  // strictly increasing, hourly cadence
  std::vector<double> values;         // NaN marks a missing reading
};

struct MeteoSeries {
  std::vector<Timestamp> timestamps;  // strictly increasing
  Eigen::MatrixXd vectors;            // one row per timestamp, D columns
  int dim() const { return static_cast<int>(vectors.cols()); }
};

// z-normalized 1-hour differences. Timestamp of each diff is the later source
// hour. source_* are the moments of the raw non-missing diffs, kept so a
// prediction in diff space can be re-integrated to concentration.
struct DiffSeries {
  int sensor = -1;
  int category = -1;
  std::vector<Timestamp> timestamps;
  std::vector<double> values;  // NaN where the source had a gap
  double diff_mean = 0.0;
  double diff_std = 1.0;
};

struct SymbolicDay {
  std::int64_t day = 0;                       // epoch day index
  std::vector<std::pair<int, int>> events;    // (level in [1,a], minutes from day start)
};

struct SymbolicSeries {
  int sensor = -1;
  int category = -1;
  int alphabet = 0;
  std::vector<SymbolicDay> days;
};

struct Dataset {
  std::vector<SensorMeta> sensors;
  std::vector<PollutantSeries> series;

  int sensor_index(std::string_view id) const;
  const PollutantSeries* find(int sensor, int category) const;
};

}  // namespace stcausal
