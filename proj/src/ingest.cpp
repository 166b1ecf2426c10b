#include "stcausal/ingest.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "stcausal/csv.hpp"
#include "stcausal/error.hpp"

namespace stcausal {

int category_index(std::string_view name) {
  for (int i = 0; i < kNumCategories; ++i)
    if (kCategoryNames[i] == name) return i;
  return -1;
}

int Dataset::sensor_index(std::string_view id) const {
  for (std::size_t i = 0; i < sensors.size(); ++i)
    if (sensors[i].sensor_id == id) return static_cast<int>(i);
  return -1;
}

const PollutantSeries* Dataset::find(int sensor, int category) const {
  for (const auto& s : series)
    if (s.sensor == sensor && s.category == category) return &s;
  return nullptr;
}

namespace {

double parse_value(const std::string& f, const std::string& path, std::size_t line) {
  if (f.empty()) return missing();
  char* end = nullptr;
  double v = std::strtod(f.c_str(), &end);
  if (end == f.c_str() || *end != '\0')
    throw Error(Errc::MalformedRow,
                path + ":" + std::to_string(line) + ": bad numeric field '" + f + "'");
  return v;
}

Timestamp parse_ts(const std::string& f, const std::string& path, std::size_t line) {
  auto t = parse_iso(f);
  if (!t)
    throw Error(Errc::MalformedRow,
                path + ":" + std::to_string(line) + ": bad timestamp '" + f + "'");
  return *t;
}

}  // namespace

std::vector<SensorMeta> ingest_sensor_meta(const std::string& path) {
  CsvReader reader(path, "sensor_id,city_id,lat,lon");
  std::vector<SensorMeta> out;
  CsvRow row;
  while (reader.next(row)) {
    SensorMeta m;
    m.sensor_id = row.fields[0];
    m.city_id = row.fields[1];
    m.latitude = parse_value(row.fields[2], path, row.line);
    m.longitude = parse_value(row.fields[3], path, row.line);
    if (m.sensor_id.empty() || is_missing(m.latitude) || is_missing(m.longitude) ||
        m.latitude < -90.0 || m.latitude > 90.0 || m.longitude < -180.0 ||
        m.longitude > 180.0)
      throw Error(Errc::MalformedRow,
                  path + ":" + std::to_string(row.line) + ": invalid sensor row");
    for (const auto& prev : out)
      if (prev.sensor_id == m.sensor_id)
        throw Error(Errc::MalformedRow, path + ":" + std::to_string(row.line) +
                                            ": duplicate sensor_id " + m.sensor_id);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<PollutantSeries> ingest_air_quality(const std::string& path,
                                                const std::vector<SensorMeta>& sensors) {
  CsvReader reader(path, "sensor_id,timestamp,PM25,PM10,NO2,CO,O3,SO2");
  std::map<std::string, int> sensor_idx;
  for (std::size_t i = 0; i < sensors.size(); ++i)
    sensor_idx[sensors[i].sensor_id] = static_cast<int>(i);

  struct Raw {
    Timestamp t;
    std::array<double, kNumCategories> v;
  };
  std::map<int, std::vector<Raw>> per_sensor;

  CsvRow row;
  while (reader.next(row)) {
    auto it = sensor_idx.find(row.fields[0]);
    if (it == sensor_idx.end())
      throw Error(Errc::UnknownSensor, path + ":" + std::to_string(row.line) +
                                           ": unknown sensor '" + row.fields[0] + "'");
    Raw r;
    r.t = parse_ts(row.fields[1], path, row.line);
    for (int c = 0; c < kNumCategories; ++c)
      r.v[c] = parse_value(row.fields[2 + c], path, row.line);
    per_sensor[it->second].push_back(r);
  }

  std::vector<PollutantSeries> out;
  for (auto& [sensor, rows] : per_sensor) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Raw& a, const Raw& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].t == rows[i - 1].t)
        throw Error(Errc::DuplicateTimestamp,
                    path + ": sensor " + sensors[sensor].sensor_id + " at " +
                        format_iso(rows[i].t));
    for (int c = 0; c < kNumCategories; ++c) {
      PollutantSeries s;
      s.sensor = sensor;
      s.category = c;
      s.timestamps.reserve(rows.size());
      s.values.reserve(rows.size());
      for (const Raw& r : rows) {
        s.timestamps.push_back(r.t);
        s.values.push_back(r.v[c]);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

MeteoSeries ingest_meteorology(const std::string& path, const GridSpec& grid) {
  if (grid.rows < 1 || grid.cols < 1)
    throw Error(Errc::BadConfig, "grid must be at least 1x1");
  CsvReader reader(path, "station_id,lat,lon,timestamp,T,P,H,WS,WD");

  struct Obs {
    int cell;
    std::array<double, 5> v;
  };
  std::map<Timestamp, std::vector<Obs>> by_time;

  const double dlat = (grid.lat_max - grid.lat_min) / grid.rows;
  const double dlon = (grid.lon_max - grid.lon_min) / grid.cols;

  CsvRow row;
  while (reader.next(row)) {
    double lat = parse_value(row.fields[1], path, row.line);
    double lon = parse_value(row.fields[2], path, row.line);
    if (is_missing(lat) || is_missing(lon))
      throw Error(Errc::MalformedRow,
                  path + ":" + std::to_string(row.line) + ": missing coordinates");
    if (lat < grid.lat_min || lat > grid.lat_max || lon < grid.lon_min ||
        lon > grid.lon_max)
      continue;  // station outside the region
    int r = dlat > 0 ? std::min(grid.rows - 1, static_cast<int>((lat - grid.lat_min) / dlat))
                     : 0;
    int c = dlon > 0 ? std::min(grid.cols - 1, static_cast<int>((lon - grid.lon_min) / dlon))
                     : 0;
    Obs o;
    o.cell = r * grid.cols + c;
    Timestamp t = parse_ts(row.fields[3], path, row.line);
    for (int k = 0; k < 5; ++k) o.v[k] = parse_value(row.fields[4 + k], path, row.line);
    by_time[t].push_back(o);
  }

  if (by_time.empty()) throw Error(Errc::EmptyRegion, path + ": no station in region");

  const int ncells = grid.rows * grid.cols;
  const int dim = 5 * ncells;
  MeteoSeries out;
  out.timestamps.reserve(by_time.size());
  out.vectors.resize(static_cast<Eigen::Index>(by_time.size()), dim);

  Eigen::Index ti = 0;
  for (const auto& [t, obs] : by_time) {
    out.timestamps.push_back(t);
    std::vector<std::array<double, 5>> sums(ncells, {0, 0, 0, 0, 0});
    std::vector<std::array<int, 5>> counts(ncells, {0, 0, 0, 0, 0});
    std::array<double, 5> region_sum = {0, 0, 0, 0, 0};
    std::array<int, 5> region_count = {0, 0, 0, 0, 0};
    for (const Obs& o : obs) {
      for (int k = 0; k < 5; ++k) {
        if (is_missing(o.v[k])) continue;
        sums[o.cell][k] += o.v[k];
        counts[o.cell][k] += 1;
        region_sum[k] += o.v[k];
        region_count[k] += 1;
      }
    }
    for (int cell = 0; cell < ncells; ++cell) {
      for (int k = 0; k < 5; ++k) {
        double v;
        if (counts[cell][k] > 0)
          v = sums[cell][k] / counts[cell][k];
        else if (region_count[k] > 0)
          v = region_sum[k] / region_count[k];
        else
          v = missing();
        out.vectors(ti, cell * 5 + k) = v;
      }
    }
    ++ti;
  }
  return out;
}

Dataset load_dataset(const std::string& meta_path, const std::string& air_path) {
  Dataset ds;
  ds.sensors = ingest_sensor_meta(meta_path);
  ds.series = ingest_air_quality(air_path, ds.sensors);
  return ds;
}

}  // namespace stcausal
