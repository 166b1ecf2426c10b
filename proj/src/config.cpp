#include "stcausal/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "stcausal/error.hpp"

namespace stcausal {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::UnknownSensor: return "UnknownSensor";
    case Errc::DuplicateTimestamp: return "DuplicateTimestamp";
    case Errc::DegenerateSeries: return "DegenerateSeries";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::EmptyRegion: return "EmptyRegion";
    case Errc::EmptyDatabase: return "EmptyDatabase";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::EmptyTimestampList: return "EmptyTimestampList";
    case Errc::NoPatterns: return "NoPatterns";
    case Errc::NoUsableRows: return "NoUsableRows";
    case Errc::MissingLags: return "MissingLags";
    case Errc::MissingModel: return "MissingModel";
    case Errc::BadConfig: return "BadConfig";
    case Errc::Io: return "Io";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::NumericalUnderflow: return "NumericalUnderflow";
    case Errc::DegenerateCluster: return "DegenerateCluster";
    case Errc::UnstableSystem: return "UnstableSystem";
    case Errc::NonConvergence: return "NonConvergence";
  }
  return "Unknown";
}

bool errc_is_numerical(Errc c) {
  switch (c) {
    case Errc::SingularSystem:
    case Errc::NumericalUnderflow:
    case Errc::DegenerateCluster:
    case Errc::UnstableSystem:
    case Errc::NonConvergence:
      return true;
    default:
      return false;
  }
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t");
      std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::BadConfig,
                  path + ":" + std::to_string(lineno) + ": expected key = value");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

namespace {

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(Errc::BadConfig, "bad boolean '" + v + "'");
}

}  // namespace

void PipelineConfig::load_file(const std::string& path) {
  auto kv = parse_kv_file(path);
  auto get = [&](const char* key, auto& out) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    using T = std::decay_t<decltype(out)>;
    if constexpr (std::is_same_v<T, std::string>)
      out = it->second;
    else if constexpr (std::is_same_v<T, bool>)
      out = parse_bool(it->second);
    else if constexpr (std::is_same_v<T, double>)
      out = std::strtod(it->second.c_str(), nullptr);
    else if constexpr (std::is_same_v<T, std::uint64_t>)
      out = std::strtoull(it->second.c_str(), nullptr, 10);
    else
      out = static_cast<T>(std::strtol(it->second.c_str(), nullptr, 10));
    kv.erase(it);
  };
  get("sensors", sensors_path);
  get("air_quality", air_quality_path);
  get("meteorology", meteo_path);
  get("workdir", workdir);
  get("grid_lat_min", grid_lat_min);
  get("grid_lat_max", grid_lat_max);
  get("grid_lon_min", grid_lon_min);
  get("grid_lon_max", grid_lon_max);
  get("grid_rows", grid_rows);
  get("grid_cols", grid_cols);
  get("sigma", sigma);
  get("delta_t", delta_t_minutes);
  get("alphabet", alphabet);
  get("sax_segment", sax_segment_minutes);
  get("delta_g", delta_g_km);
  get("delta_p", delta_p);
  get("top_x", top_x);
  get("L", lag_hours);
  get("K", n_clusters);
  get("N", n_neighbors);
  get("sweep_k", sweep_k);
  get("sweep_n", sweep_n);
  get("test_days", test_days);
  get("season", season);
  get("seed", seed);
  get("threads", threads);
  get("no_patterns", no_patterns);
  get("no_confounders", no_confounders);
  get("paper_exact_pi", paper_exact_pi);
  get("paper_exact_corr", paper_exact_corr);
  get("hard_assign", hard_assign);
  if (!kv.empty())
    throw Error(Errc::BadConfig, path + ": unknown key '" + kv.begin()->first + "'");
}

void PipelineConfig::apply_implications() {
  if (no_confounders) n_clusters = 1;
}

void PipelineConfig::validate() const {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw Error(Errc::BadConfig, "sigma must be in (0,1]");
  if (delta_t_minutes <= 0) throw Error(Errc::BadConfig, "delta_t must be positive");
  if (alphabet < 2 || alphabet > 10)
    throw Error(Errc::BadConfig, "alphabet must be in [2,10]");
  if (delta_g_km < 0.0) throw Error(Errc::BadConfig, "delta_g must be >= 0");
  if (!(delta_p >= 0.0 && delta_p <= 1.0))
    throw Error(Errc::BadConfig, "delta_p must be in [0,1]");
  if (lag_hours < 1) throw Error(Errc::BadConfig, "L must be >= 1");
  if (n_clusters < 1) throw Error(Errc::BadConfig, "K must be >= 1");
  if (n_neighbors < 0) throw Error(Errc::BadConfig, "N must be >= 0");
  if (test_days < 0) throw Error(Errc::BadConfig, "test_days must be >= 0");
  bool season_ok = false;
  for (auto s : {"spring", "summer", "autumn", "winter", "all"})
    if (season == s) season_ok = true;
  if (!season_ok) throw Error(Errc::BadConfig, "season must be a season name or 'all'");
}

}  // namespace stcausal
