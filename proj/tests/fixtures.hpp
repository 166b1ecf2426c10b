#pragma once

// Synthetic fixtures shared by the unit and acceptance suites.

#include <vector>

#include "stcausal/design.hpp"
#include "stcausal/em.hpp"
#include "stcausal/rng.hpp"

namespace stcausal::fixtures {

inline Timestamp base_time() { return days_from_civil(2014, 1, 1) * kSecondsPerDay; }

inline DiffSeries make_diff_series(int sensor, int category,
                                   const std::vector<double>& values) {
  DiffSeries d;
  d.sensor = sensor;
  d.category = category;
  d.diff_mean = 0.0;
  d.diff_std = 1.0;
  Timestamp t0 = base_time();
  for (std::size_t i = 0; i < values.size(); ++i) {
    d.timestamps.push_back(t0 + static_cast<Timestamp>(i) * kSecondsPerHour);
    d.values.push_back(values[i]);
  }
  return d;
}

inline std::vector<Timestamp> all_hours(std::size_t from, std::size_t to) {
  std::vector<Timestamp> out;
  for (std::size_t i = from; i < to; ++i)
    out.push_back(base_time() + static_cast<Timestamp>(i) * kSecondsPerHour);
  return out;
}

// Lagged pair: y_t = coef * x_{t-lag} + noise; returns (x, y).
inline std::pair<std::vector<double>, std::vector<double>> lagged_pair(
    int n, double coef, int lag, double noise_std, Rng& rng) {
  std::vector<double> x(n), y(n);
  for (int t = 0; t < n; ++t) {
    x[t] = rng.normal();
    y[t] = noise_std * rng.normal();
    if (t - lag >= 0) y[t] += coef * x[t - lag];
  }
  return {x, y};
}

// Two-regime mixture design: two separable environment blobs select between
// two coefficient vectors. Returns the design plus the true regime labels.
struct TwoRegime {
  MixtureDesign design;
  std::vector<int> labels;
  Eigen::VectorXd coef_a, coef_b;
  double mu0_a, mu0_b;
};

inline TwoRegime two_regime_design(int n_rows, std::uint64_t seed,
                                   double noise_std = 0.3) {
  Rng rng(seed);
  TwoRegime out;
  const int dim = 2;

  out.coef_a = Eigen::VectorXd(dim);
  out.coef_a << 1.5, -0.5;
  out.coef_b = Eigen::VectorXd(dim);
  out.coef_b << -1.0, 1.0;
  out.mu0_a = 0.3;
  out.mu0_b = -0.2;

  out.design.universe.target_sensor = 0;
  out.design.universe.target_category = 0;
  out.design.universe.local_categories = {0, 1};
  out.design.universe.lag_hours = 1;

  DesignRows& rows = out.design.rows;
  rows.p.resize(n_rows);
  rows.q.resize(n_rows, dim);
  rows.e.resize(n_rows, 2);
  Timestamp t0 = base_time();
  for (int i = 0; i < n_rows; ++i) {
    int regime = rng.uniform() < 0.5 ? 0 : 1;
    out.labels.push_back(regime);
    rows.t.push_back(t0 + static_cast<Timestamp>(i) * kSecondsPerHour);
    double ex = (regime == 0 ? -3.0 : 3.0) + rng.normal();
    double ey = rng.normal();
    rows.e(i, 0) = ex;
    rows.e(i, 1) = ey;
    for (int j = 0; j < dim; ++j) rows.q(i, j) = rng.normal();
    const Eigen::VectorXd& coef = regime == 0 ? out.coef_a : out.coef_b;
    double mu0 = regime == 0 ? out.mu0_a : out.mu0_b;
    rows.p(i) = mu0 + rows.q.row(i).dot(coef) + noise_std * rng.normal();
  }
  return out;
}

// Agreement with truth up to a permutation of the two labels.
inline double label_accuracy(const std::vector<int>& tags,
                             const std::vector<int>& truth) {
  std::size_t same = 0, flipped = 0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == truth[i]) ++same;
    if (tags[i] == 1 - truth[i]) ++flipped;
  }
  return static_cast<double>(std::max(same, flipped)) /
         static_cast<double>(tags.size());
}

}  // namespace stcausal::fixtures
