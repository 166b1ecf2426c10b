#include "stcausal/gc.hpp"

#include <algorithm>

#include "stcausal/error.hpp"
#include "stcausal/stats.hpp"
#include "stcausal/wls.hpp"

namespace stcausal {

GcResult gc_score(const DiffTable& diffs, const PatternIndex& patterns,
                  int target_sensor, int target_category, int cand_sensor,
                  int lag_hours, std::span<const Timestamp> windows,
                  long match_override) {
  if (windows.empty()) throw Error(Errc::NoUsableRows, "gc_score needs windows");
  const double chi2_crit = chi2_quantile(lag_hours, 0.05);
  auto target_ts = patterns.timestamps(target_sensor, target_category);

  GcResult best;
  for (int cat = 0; cat < kNumCategories; ++cat) {
    if (diffs.index_of(cand_sensor, cat) < 0) continue;

    ParentSpec spec;
    spec.target_sensor = target_sensor;
    spec.target_category = target_category;
    spec.local_categories = local_categories_for(diffs, target_sensor);
    spec.lag_hours = lag_hours;
    spec.neighbors.push_back({cand_sensor, cat});

    DesignRows rows;
    try {
      rows = build_design_rows(diffs, spec, nullptr, windows);
    } catch (const Error&) {
      continue;  // no usable rows for this category
    }
    if (rows.rows() < spec.dim() + 2) continue;

    long matched = match_override;
    if (matched < 0) {
      auto cand_ts = patterns.timestamps(cand_sensor, cat);
      if (target_ts.empty() || cand_ts.empty())
        matched = 0;
      else
        matched = static_cast<long>(
            match_timestamps(target_ts, cand_ts, lag_hours).matched_target.size());
    }
    if (matched == 0) {
      // Multiplicative match factor: score is 0 regardless of the variances.
      if (best.best_category < 0) {
        best.best_category = cat;
        best.best_lag = 1;
      }
      continue;
    }

    Eigen::VectorXd w = Eigen::VectorXd::Ones(rows.rows());
    std::vector<int> local_cols(spec.local_dim());
    for (int j = 0; j < spec.local_dim(); ++j) local_cols[j] = j;
    double var1 = conditional_variance(rows.q, rows.p, w, local_cols);

    for (int l = 1; l <= lag_hours; ++l) {
      std::vector<int> cols = local_cols;
      cols.push_back(spec.st_col(0, l));
      double var2 = conditional_variance(rows.q, rows.p, w, cols);
      double reduction = (var1 - var2) / (var2 * chi2_crit);
      double score = static_cast<double>(matched) * std::max(0.0, reduction);
      if (score > best.score || best.best_category < 0) {
        best.score = score;
        best.best_category = cat;
        best.best_lag = l;
      }
    }
  }
  return best;
}

ParentSpec init_structure(int target_sensor, int target_category,
                          const CandidateSet& candidates, const DiffTable& diffs,
                          const PatternIndex& patterns, int n_neighbors, int lag_hours,
                          std::span<const Timestamp> windows, double min_score,
                          long match_override) {
  ParentSpec spec;
  spec.target_sensor = target_sensor;
  spec.target_category = target_category;
  spec.local_categories = local_categories_for(diffs, target_sensor);
  spec.lag_hours = lag_hours;
  if (n_neighbors <= 0 || candidates.candidates.empty()) return spec;

  struct Scored {
    GcResult gc;
    Candidate cand;
  };
  std::vector<Scored> scored;
  for (const Candidate& c : candidates.candidates) {
    GcResult gc = gc_score(diffs, patterns, target_sensor, target_category, c.sensor,
                           lag_hours, windows, match_override);
    if (gc.best_category < 0) continue;
    if (!(gc.score > min_score)) continue;
    scored.push_back({gc, c});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.gc.score != b.gc.score) return a.gc.score > b.gc.score;
    if (a.cand.corr != b.cand.corr) return a.cand.corr > b.cand.corr;
    if (a.cand.distance_km != b.cand.distance_km)
      return a.cand.distance_km < b.cand.distance_km;
    return a.cand.sensor < b.cand.sensor;
  });
  if (static_cast<int>(scored.size()) > n_neighbors) scored.resize(n_neighbors);
  for (const Scored& s : scored)
    spec.neighbors.push_back({s.cand.sensor, s.gc.best_category});
  return spec;
}

}  // namespace stcausal
