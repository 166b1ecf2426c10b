#include "stcausal/design.hpp"

#include <algorithm>

#include "stcausal/error.hpp"

namespace stcausal {

void DiffTable::add(DiffSeries d) {
  Hourly h;
  if (!d.timestamps.empty()) {
    h.t0 = d.timestamps.front();
    std::size_t span =
        static_cast<std::size_t>((d.timestamps.back() - h.t0) / kSecondsPerHour) + 1;
    h.v.assign(span, missing());
    for (std::size_t i = 0; i < d.timestamps.size(); ++i)
      h.v[static_cast<std::size_t>((d.timestamps[i] - h.t0) / kSecondsPerHour)] =
          d.values[i];
  }
  index_[{d.sensor, d.category}] = static_cast<int>(series_.size());
  hourly_.push_back(std::move(h));
  series_.push_back(std::move(d));
}

int DiffTable::index_of(int sensor, int category) const {
  auto it = index_.find({sensor, category});
  return it == index_.end() ? -1 : it->second;
}

const DiffSeries* DiffTable::find(int sensor, int category) const {
  int i = index_of(sensor, category);
  return i < 0 ? nullptr : &series_[i];
}

double DiffTable::value_by_index(int idx, Timestamp t) const {
  if (idx < 0) return missing();
  const Hourly& h = hourly_[idx];
  if (h.v.empty() || t < h.t0) return missing();
  std::int64_t off = t - h.t0;
  if (off % kSecondsPerHour != 0) return missing();
  std::size_t i = static_cast<std::size_t>(off / kSecondsPerHour);
  return i < h.v.size() ? h.v[i] : missing();
}

double DiffTable::value_at(int sensor, int category, Timestamp t) const {
  return value_by_index(index_of(sensor, category), t);
}

std::vector<int> local_categories_for(const DiffTable& diffs, int sensor) {
  std::vector<int> out;
  for (int c = 0; c < kNumCategories; ++c)
    if (diffs.index_of(sensor, c) >= 0) out.push_back(c);
  return out;
}

DesignRows build_design_rows(const DiffTable& diffs, const ParentSpec& spec,
                             const MeteoSeries* meteo, std::span<const Timestamp> windows) {
  const int dim = spec.dim();
  const int edim = meteo ? meteo->dim() : 0;
  const int n_local = static_cast<int>(spec.local_categories.size());

  std::vector<Timestamp> keep_t;
  std::vector<Eigen::VectorXd> keep_q;
  std::vector<double> keep_p;
  std::vector<Eigen::Index> keep_e;

  const int target_idx = diffs.index_of(spec.target_sensor, spec.target_category);
  std::vector<int> local_idx(n_local);
  for (int c = 0; c < n_local; ++c)
    local_idx[c] = diffs.index_of(spec.target_sensor, spec.local_categories[c]);
  std::vector<int> st_idx(spec.neighbors.size());
  for (std::size_t nb = 0; nb < spec.neighbors.size(); ++nb)
    st_idx[nb] = diffs.index_of(spec.neighbors[nb].sensor, spec.neighbors[nb].category);

  Eigen::VectorXd qrow(dim);
  for (Timestamp t : windows) {
    double p = diffs.value_by_index(target_idx, t);
    if (is_missing(p)) continue;

    bool ok = true;
    for (int c = 0; c < n_local && ok; ++c)
      for (int l = 1; l <= spec.lag_hours && ok; ++l) {
        double v = diffs.value_by_index(local_idx[c], t - l * kSecondsPerHour);
        if (is_missing(v))
          ok = false;
        else
          qrow(spec.local_col(c, l)) = v;
      }
    for (std::size_t nb = 0; nb < spec.neighbors.size() && ok; ++nb)
      for (int l = 1; l <= spec.lag_hours && ok; ++l) {
        double v = diffs.value_by_index(st_idx[nb], t - l * kSecondsPerHour);
        if (is_missing(v))
          ok = false;
        else
          qrow(spec.st_col(static_cast<int>(nb), l)) = v;
      }
    if (!ok) continue;

    Eigen::Index erow = -1;
    if (meteo) {
      auto it = std::lower_bound(meteo->timestamps.begin(), meteo->timestamps.end(), t);
      if (it == meteo->timestamps.end() || *it != t) continue;
      erow = it - meteo->timestamps.begin();
      if (!meteo->vectors.row(erow).allFinite()) continue;
    }

    keep_t.push_back(t);
    keep_p.push_back(p);
    keep_q.push_back(qrow);
    keep_e.push_back(erow);
  }

  if (keep_t.empty()) throw Error(Errc::NoUsableRows, "no usable design rows");

  DesignRows out;
  out.t = std::move(keep_t);
  const Eigen::Index n = static_cast<Eigen::Index>(out.t.size());
  out.p.resize(n);
  out.q.resize(n, dim);
  out.e.resize(n, edim);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.p(i) = keep_p[i];
    out.q.row(i) = keep_q[i];
    if (meteo) out.e.row(i) = meteo->vectors.row(keep_e[i]);
  }
  return out;
}

}  // namespace stcausal
