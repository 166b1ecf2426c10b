#include "stcausal/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stcausal/error.hpp"

namespace stcausal {

namespace {

Json values_to_json(const std::vector<double>& v) {
  Json arr = Json::array();
  for (double x : v) {
    if (is_missing(x))
      arr.push_back(nullptr);
    else
      arr.push_back(x);
  }
  return arr;
}

std::vector<double> values_from_json(const Json& arr) {
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& x : arr) out.push_back(x.is_null() ? missing() : x.get<double>());
  return out;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& rows) {
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const Json& arr) {
  Eigen::VectorXd v(arr.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = arr[i].get<double>();
  return v;
}

const std::string& sensor_id(const std::vector<SensorMeta>& sensors, int idx) {
  if (idx < 0 || idx >= static_cast<int>(sensors.size()))
    throw Error(Errc::BadConfig, "sensor index out of range");
  return sensors[static_cast<std::size_t>(idx)].sensor_id;
}

int require_sensor(const Dataset& ds, const std::string& id) {
  int s = ds.sensor_index(id);
  if (s < 0) throw Error(Errc::UnknownSensor, "sensor '" + id + "' not in dataset");
  return s;
}

int require_category(const std::string& name) {
  int c = category_index(name);
  if (c < 0) throw Error(Errc::BadConfig, "unknown category '" + name + "'");
  return c;
}

}  // namespace

Json dataset_to_json(const Dataset& ds) {
  Json j;
  Json sensors = Json::array();
  for (const auto& s : ds.sensors)
    sensors.push_back({{"sensor_id", s.sensor_id},
                       {"city_id", s.city_id},
                       {"lat", s.latitude},
                       {"lon", s.longitude}});
  j["sensors"] = std::move(sensors);
  Json series = Json::array();
  for (const auto& s : ds.series) {
    Json e;
    e["sensor"] = sensor_id(ds.sensors, s.sensor);
    e["category"] = kCategoryNames[s.category];
    e["timestamps"] = s.timestamps;
    e["values"] = values_to_json(s.values);
    series.push_back(std::move(e));
  }
  j["series"] = std::move(series);
  return j;
}

Dataset dataset_from_json(const Json& j) {
  Dataset ds;
  for (const auto& s : j.at("sensors"))
    ds.sensors.push_back({s.at("sensor_id").get<std::string>(),
                          s.at("city_id").get<std::string>(), s.at("lat").get<double>(),
                          s.at("lon").get<double>()});
  for (const auto& e : j.at("series")) {
    PollutantSeries s;
    s.sensor = require_sensor(ds, e.at("sensor").get<std::string>());
    s.category = require_category(e.at("category").get<std::string>());
    s.timestamps = e.at("timestamps").get<std::vector<Timestamp>>();
    s.values = values_from_json(e.at("values"));
    ds.series.push_back(std::move(s));
  }
  return ds;
}

Json meteo_to_json(const MeteoSeries& m) {
  Json j;
  j["timestamps"] = m.timestamps;
  j["vectors"] = matrix_to_json(m.vectors);
  return j;
}

MeteoSeries meteo_from_json(const Json& j) {
  MeteoSeries m;
  m.timestamps = j.at("timestamps").get<std::vector<Timestamp>>();
  m.vectors = matrix_from_json(j.at("vectors"));
  return m;
}

Json pattern_set_to_json(const PatternSet& ps, const std::vector<SensorMeta>& sensors) {
  Json j;
  j["key"] = {{"sensor", sensor_id(sensors, ps.sensor)},
              {"category", kCategoryNames[ps.category]}};
  j["sigma"] = ps.sigma;
  j["sigma_abs"] = ps.sigma_abs;
  j["delta_t"] = ps.delta_t_minutes;
  Json patterns = Json::array();
  for (const auto& p : ps.patterns) {
    Json occ = Json::array();
    for (const auto& o : p.occurrences)
      occ.push_back(Json::array({o.day, format_iso(o.start)}));
    patterns.push_back(
        {{"levels", p.levels}, {"support", p.support}, {"occurrences", std::move(occ)}});
  }
  j["patterns"] = std::move(patterns);
  return j;
}

PatternSet pattern_set_from_json(const Json& j, const Dataset& ds) {
  PatternSet ps;
  ps.sensor = require_sensor(ds, j.at("key").at("sensor").get<std::string>());
  ps.category = require_category(j.at("key").at("category").get<std::string>());
  ps.sigma = j.at("sigma").get<double>();
  ps.sigma_abs = j.at("sigma_abs").get<int>();
  ps.delta_t_minutes = j.at("delta_t").get<int>();
  for (const auto& p : j.at("patterns")) {
    EvolvingPattern ep;
    ep.levels = p.at("levels").get<std::vector<int>>();
    ep.support = p.at("support").get<int>();
    ep.delta_t_minutes = ps.delta_t_minutes;
    for (const auto& o : p.at("occurrences")) {
      auto t = parse_iso(o[1].get<std::string>());
      if (!t) throw Error(Errc::MalformedRow, "bad occurrence timestamp");
      ep.occurrences.push_back({o[0].get<std::int64_t>(), *t});
    }
    ps.patterns.push_back(std::move(ep));
  }
  return ps;
}

Json candidate_set_to_json(const CandidateSet& cs, const std::vector<SensorMeta>& sensors) {
  Json j;
  j["target"] = {{"sensor", sensor_id(sensors, cs.target_sensor)},
                 {"category", kCategoryNames[cs.target_category]}};
  Json arr = Json::array();
  for (const auto& c : cs.candidates)
    arr.push_back({{"sensor", sensor_id(sensors, c.sensor)},
                   {"category", kCategoryNames[c.category]},
                   {"corr", c.corr},
                   {"distance_km", c.distance_km}});
  j["candidates"] = std::move(arr);
  return j;
}

CandidateSet candidate_set_from_json(const Json& j, const Dataset& ds) {
  CandidateSet cs;
  cs.target_sensor = require_sensor(ds, j.at("target").at("sensor").get<std::string>());
  cs.target_category =
      require_category(j.at("target").at("category").get<std::string>());
  for (const auto& c : j.at("candidates"))
    cs.candidates.push_back({require_sensor(ds, c.at("sensor").get<std::string>()),
                             require_category(c.at("category").get<std::string>()),
                             c.at("corr").get<double>(),
                             c.at("distance_km").get<double>()});
  return cs;
}

namespace {

Json parents_to_json(const ParentSpec& p, const std::vector<SensorMeta>& sensors) {
  Json locals = Json::array();
  for (int c : p.local_categories) locals.push_back(kCategoryNames[c]);
  Json nbs = Json::array();
  for (const auto& nb : p.neighbors)
    nbs.push_back({{"sensor", sensor_id(sensors, nb.sensor)},
                   {"category", kCategoryNames[nb.category]}});
  return Json{{"local_categories", std::move(locals)}, {"neighbors", std::move(nbs)}};
}

ParentSpec parents_from_json(const Json& j, const Dataset& ds, int sensor, int category,
                             int lag_hours) {
  ParentSpec p;
  p.target_sensor = sensor;
  p.target_category = category;
  p.lag_hours = lag_hours;
  for (const auto& c : j.at("local_categories"))
    p.local_categories.push_back(require_category(c.get<std::string>()));
  for (const auto& nb : j.at("neighbors"))
    p.neighbors.push_back({require_sensor(ds, nb.at("sensor").get<std::string>()),
                           require_category(nb.at("category").get<std::string>())});
  return p;
}

}  // namespace

Json model_to_json(const CausalModel& m, const std::vector<SensorMeta>& sensors) {
  Json j;
  j["version"] = kModelVersion;
  const ParentSpec& base = m.clusters.at(0).parents;
  j["target"] = {{"sensor", sensor_id(sensors, base.target_sensor)},
                 {"category", kCategoryNames[base.target_category]}};
  j["K"] = m.n_clusters;
  j["N"] = m.n_neighbors;
  j["L"] = m.lag_hours;
  Json clusters = Json::array();
  for (const auto& c : m.clusters) {
    Json e;
    e["parents"] = parents_to_json(c.parents, sensors);
    e["A"] = vector_to_json(c.coef);
    e["mu0"] = c.mu0;
    e["sigma2"] = c.sigma2;
    e["B_mean"] = vector_to_json(c.env_mean);
    e["B_cov"] = matrix_to_json(c.env_cov);
    clusters.push_back(std::move(e));
  }
  j["clusters"] = std::move(clusters);
  j["cluster_weights"] = vector_to_json(m.cluster_weight);
  j["ll_trace"] = m.ll_trace;
  return j;
}

CausalModel model_from_json(const Json& j, const Dataset& ds) {
  if (j.at("version").get<int>() != kModelVersion)
    throw Error(Errc::BadConfig, "unsupported model version");
  CausalModel m;
  m.n_clusters = j.at("K").get<int>();
  m.n_neighbors = j.at("N").get<int>();
  m.lag_hours = j.at("L").get<int>();
  int sensor = require_sensor(ds, j.at("target").at("sensor").get<std::string>());
  int category = require_category(j.at("target").at("category").get<std::string>());
  for (const auto& e : j.at("clusters")) {
    GbnCluster c;
    c.parents = parents_from_json(e.at("parents"), ds, sensor, category, m.lag_hours);
    c.coef = vector_from_json(e.at("A"));
    c.mu0 = e.at("mu0").get<double>();
    c.sigma2 = e.at("sigma2").get<double>();
    c.env_mean = vector_from_json(e.at("B_mean"));
    c.env_cov = matrix_from_json(e.at("B_cov"));
    m.clusters.push_back(std::move(c));
  }
  m.cluster_weight = vector_from_json(j.at("cluster_weights"));
  m.ll_trace = j.at("ll_trace").get<std::vector<double>>();
  return m;
}

Json pathway_to_json(const PathwayGraph& g, const std::vector<SensorMeta>& sensors) {
  Json j;
  Json nodes = Json::array();
  for (const auto& n : g.nodes)
    nodes.push_back({{"sensor", sensor_id(sensors, n.sensor)},
                     {"category", kCategoryNames[n.category]}});
  j["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"cluster", e.cluster},
                     {"weight", e.weight},
                     {"hop", e.hop}});
  j["edges"] = std::move(edges);
  j["root"] = g.root;
  return j;
}

std::string digraph_to_dot(const Digraph& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (int i = 0; i < g.n; ++i) os << "  n" << i << " [label=\"" << i << "\"];\n";
  for (const auto& [from, to] : g.edges) os << "  n" << from << " -> n" << to << ";\n";
  os << "}\n";
  return os.str();
}

std::string truth_to_dot(const TruthGraph& g) {
  std::ostringstream os;
  os << "digraph truth {\n";
  for (int i = 0; i < g.n; ++i) os << "  n" << i << " [label=\"" << i << "\"];\n";
  for (const auto& e : g.edges)
    os << "  n" << e.from << " -> n" << e.to << " [label=\"lag " << e.lag << "\"];\n";
  os << "}\n";
  return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error(Errc::Io, "cannot rename " + tmp + " to " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stcausal
