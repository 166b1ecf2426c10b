#pragma once

#include <string>
#include <vector>

#include "stcausal/types.hpp"

namespace stcausal {

// Sensor metadata CSV: sensor_id,city_id,lat,lon
std::vector<SensorMeta> ingest_sensor_meta(const std::string& path);

// Air-quality CSV: sensor_id,timestamp,PM25,PM10,NO2,CO,O3,SO2
// Produces one series per (sensor, category) appearing in the file; empty
// value fields become missing readings. Out-of-order rows are sorted;
// a duplicated (sensor, timestamp) is an error.
std::vector<PollutantSeries> ingest_air_quality(const std::string& path,
                                                const std::vector<SensorMeta>& sensors);

struct GridSpec {
  double lat_min = 0.0, lat_max = 0.0;
  double lon_min = 0.0, lon_max = 0.0;
  int rows = 3, cols = 3;
};

// Meteorology CSV: station_id,lat,lon,timestamp,T,P,H,WS,WD
// Per timestamp the 5 measurements of each grid cell are the mean of the
// stations falling in that cell; a cell with no station carries the
// region-wide mean for that timestamp. E_t dimension = 5 * rows * cols,
// cell-major in row-major cell order.
MeteoSeries ingest_meteorology(const std::string& path, const GridSpec& grid);

Dataset load_dataset(const std::string& meta_path, const std::string& air_path);

}  // namespace stcausal
