#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "stcausal/types.hpp"

namespace stcausal {

struct SyntheticSpec {
  int n_series = 20;
  int max_lag = 3;
  double edge_density = 0.05;
  int confounder = 4;  // this node influences every other node
  double noise_std = 1.0;
  int n_samples = 5000;
  double coef_min = 0.3, coef_max = 0.9;
  std::uint64_t seed = 1;
};

struct TruthEdge {
  int from = -1, to = -1;
  int lag = 1;
  double coef = 0.0;
};

struct TruthGraph {
  int n = 0;
  std::vector<TruthEdge> edges;
};

struct SynthData {
  TruthGraph truth;
  Eigen::MatrixXd series;  // n_samples x n_series
  std::vector<std::pair<double, double>> locations;  // (lat, lon) per series
  std::vector<Timestamp> timestamps;                 // hourly
};

// Linear lagged system x_j(t) = sum_{i->j} c x_i(t - lag) + noise, with the
// confounder wired to every other node and coefficients rescaled until the
// companion spectral radius is below 0.95.
SynthData gen_synthetic(const SyntheticSpec& spec);

struct Digraph {
  int n = 0;
  std::set<std::pair<int, int>> edges;
};

struct EdgeMetrics {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Structure comparison ignoring lags. Empty recovered set scores 0.
EdgeMetrics edge_metrics(const Digraph& recovered, const TruthGraph& truth);

}  // namespace stcausal
