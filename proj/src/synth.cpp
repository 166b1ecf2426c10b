#include "stcausal/synth.hpp"

#include <Eigen/Eigenvalues>

#include "stcausal/error.hpp"
#include "stcausal/rng.hpp"

namespace stcausal {

namespace {

double companion_spectral_radius(const TruthGraph& g, int max_lag) {
  const int n = g.n;
  const int dim = n * max_lag;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(dim, dim);
  for (const TruthEdge& e : g.edges)
    companion(e.to, (e.lag - 1) * n + e.from) = e.coef;
  for (int l = 1; l < max_lag; ++l)
    companion.block((l)*n, (l - 1) * n, n, n).setIdentity();
  // Spectral radius via the (possibly complex) eigenvalues.
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

SynthData gen_synthetic(const SyntheticSpec& spec) {
  if (spec.n_series < 2 || spec.max_lag < 1 || spec.confounder < 0 ||
      spec.confounder >= spec.n_series)
    throw Error(Errc::BadConfig, "invalid synthetic spec");

  Rng rng(spec.seed);
  SynthData out;
  out.truth.n = spec.n_series;

  auto draw_coef = [&]() {
    double mag = rng.uniform(spec.coef_min, spec.coef_max);
    return rng.uniform() < 0.5 ? -mag : mag;
  };
  auto draw_lag = [&]() { return 1 + static_cast<int>(rng.below(spec.max_lag)); };

  for (int j = 0; j < spec.n_series; ++j) {
    if (j == spec.confounder) continue;
    out.truth.edges.push_back({spec.confounder, j, draw_lag(), draw_coef()});
  }
  for (int i = 0; i < spec.n_series; ++i) {
    for (int j = 0; j < spec.n_series; ++j) {
      if (i == j || i == spec.confounder) continue;
      if (rng.uniform() < spec.edge_density)
        out.truth.edges.push_back({i, j, draw_lag(), draw_coef()});
    }
  }

  // Rescale until stationary.
  int attempts = 0;
  double rho = companion_spectral_radius(out.truth, spec.max_lag);
  while (rho >= 0.95) {
    if (++attempts > 10) throw Error(Errc::UnstableSystem, "could not stabilize system");
    double scale = 0.9 * 0.95 / rho;
    for (TruthEdge& e : out.truth.edges) e.coef *= scale;
    rho = companion_spectral_radius(out.truth, spec.max_lag);
  }

  const int burn = 50 * spec.max_lag;
  const int total = spec.n_samples + burn;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(total, spec.n_series);
  for (int t = 0; t < total; ++t) {
    for (int j = 0; j < spec.n_series; ++j)
      x(t, j) = spec.noise_std * rng.normal();
    for (const TruthEdge& e : out.truth.edges)
      if (t - e.lag >= 0) x(t, e.to) += e.coef * x(t - e.lag, e.from);
  }
  out.series = x.bottomRows(spec.n_samples);

  out.locations.reserve(spec.n_series);
  for (int j = 0; j < spec.n_series; ++j)
    out.locations.emplace_back(rng.uniform(30.0, 40.0), rng.uniform(110.0, 120.0));

  const Timestamp t0 = days_from_civil(2014, 1, 1) * kSecondsPerDay;
  out.timestamps.reserve(spec.n_samples);
  for (int t = 0; t < spec.n_samples; ++t)
    out.timestamps.push_back(t0 + static_cast<Timestamp>(t) * kSecondsPerHour);
  return out;
}

EdgeMetrics edge_metrics(const Digraph& recovered, const TruthGraph& truth) {
  std::set<std::pair<int, int>> truth_edges;
  for (const TruthEdge& e : truth.edges) truth_edges.insert({e.from, e.to});

  int correct = 0;
  for (const auto& e : recovered.edges)
    if (truth_edges.count(e)) ++correct;

  EdgeMetrics m;
  m.precision = recovered.edges.empty()
                    ? 0.0
                    : static_cast<double>(correct) / recovered.edges.size();
  m.recall = truth_edges.empty() ? 0.0
                                 : static_cast<double>(correct) / truth_edges.size();
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

}  // namespace stcausal
