#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace stcausal {

// Flat `key = value` config file with `#` comments; CLI flags override file
// values. Every stage reads the same struct.
struct PipelineConfig {
  // data paths
  std::string sensors_path;
  std::string air_quality_path;
  std::string meteo_path;
  std::string workdir = "out";

  // meteorology grid
  double grid_lat_min = 0.0, grid_lat_max = 0.0;
  double grid_lon_min = 0.0, grid_lon_max = 0.0;
  int grid_rows = 3, grid_cols = 3;

  // pattern mining
  double sigma = 0.1;
  int delta_t_minutes = 60;
  int alphabet = 5;
  int sax_segment_minutes = 60;

  // candidate selection
  double delta_g_km = 200.0;
  double delta_p = 0.5;
  int top_x = 8;

  // model
  int lag_hours = 3;      // L
  int n_clusters = 4;     // K
  int n_neighbors = 2;    // N
  std::string sweep_k;    // e.g. "3,4,5"; empty = no sweep
  std::string sweep_n;
  int test_days = 15;
  std::string season = "spring";

  std::uint64_t seed = 1;
  int threads = 0;  // 0 = STCAUSAL_THREADS / hardware default

  // ablations and fidelity switches
  bool no_patterns = false;
  bool no_confounders = false;
  bool paper_exact_pi = false;
  bool paper_exact_corr = false;
  bool hard_assign = false;

  void load_file(const std::string& path);
  void validate() const;  // also applies flag implications (no_confounders -> K=1)
  void apply_implications();
};

std::map<std::string, std::string> parse_kv_file(const std::string& path);

}  // namespace stcausal
