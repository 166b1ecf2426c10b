#include "stcausal/match.hpp"

#include <algorithm>

#include "stcausal/error.hpp"
#include "stcausal/geo.hpp"

namespace stcausal {

MatchResult match_timestamps(std::span<const Timestamp> ts_target,
                             std::span<const Timestamp> ts_causer, int lag_hours) {
  const std::int64_t lag = static_cast<std::int64_t>(lag_hours) * kSecondsPerHour;
  MatchResult r;

  // M_s: target timestamps with a causer timestamp in [t - L, t].
  std::size_t j = 0;
  for (Timestamp t : ts_target) {
    while (j < ts_causer.size() && ts_causer[j] < t - lag) ++j;
    if (j < ts_causer.size() && ts_causer[j] <= t) {
      r.matched_target.push_back(t);
      r.matched_pairs.emplace_back(t, ts_causer[j]);
    }
  }
  // M_s': causer timestamps with a target timestamp in [t', t' + L].
  std::size_t i = 0;
  for (Timestamp tp : ts_causer) {
    while (i < ts_target.size() && ts_target[i] < tp) ++i;
    if (i < ts_target.size() && ts_target[i] <= tp + lag) r.matched_causer.push_back(tp);
  }
  return r;
}

MatchStats match_stats(std::span<const Timestamp> ts_target,
                       std::span<const Timestamp> ts_causer, int lag_hours,
                       bool as_printed_corr) {
  if (ts_target.empty() || ts_causer.empty())
    throw Error(Errc::EmptyTimestampList, "match stats need nonempty timestamp lists");

  MatchResult r = match_timestamps(ts_target, ts_causer, lag_hours);
  MatchStats s;
  s.lag_hours = lag_hours;
  s.precision = static_cast<double>(r.matched_causer.size()) / ts_causer.size();
  s.recall = static_cast<double>(r.matched_target.size()) / ts_target.size();
  double pr = s.precision + s.recall;
  if (pr > 0.0)
    s.corr = as_printed_corr ? 2.0 * s.precision / pr : 2.0 * s.precision * s.recall / pr;
  s.matched_pairs = std::move(r.matched_pairs);
  return s;
}

void PatternIndex::add(PatternSet ps) {
  ts_.push_back(pattern_timestamps(ps));
  sets_.push_back(std::move(ps));
}

const PatternSet* PatternIndex::find(int sensor, int category) const {
  for (const auto& ps : sets_)
    if (ps.sensor == sensor && ps.category == category) return &ps;
  return nullptr;
}

std::span<const Timestamp> PatternIndex::timestamps(int sensor, int category) const {
  for (std::size_t i = 0; i < sets_.size(); ++i)
    if (sets_[i].sensor == sensor && sets_[i].category == category) return ts_[i];
  return {};
}

CandidateSet candidate_causers(int target_sensor, int target_category,
                               const PatternIndex& patterns,
                               const std::vector<SensorMeta>& sensors, double delta_g_km,
                               double delta_p, int lag_hours, int top_x,
                               bool as_printed_corr) {
  auto target_ts = patterns.timestamps(target_sensor, target_category);
  if (target_ts.empty())
    throw Error(Errc::NoPatterns, "target sensor has no pattern occurrences");

  CandidateSet out;
  out.target_sensor = target_sensor;
  out.target_category = target_category;

  const SensorMeta& tm = sensors[target_sensor];
  for (int s = 0; s < static_cast<int>(sensors.size()); ++s) {
    if (s == target_sensor) continue;
    double dist = haversine_km(tm.latitude, tm.longitude, sensors[s].latitude,
                               sensors[s].longitude);
    if (dist > delta_g_km) continue;
    int best_cat = -1;
    double best_corr = 0.0;
    for (int c = 0; c < kNumCategories; ++c) {
      auto ts = patterns.timestamps(s, c);
      if (ts.empty()) continue;
      MatchStats ms = match_stats(target_ts, ts, lag_hours, as_printed_corr);
      if (best_cat < 0 || ms.corr > best_corr) {
        best_cat = c;
        best_corr = ms.corr;
      }
    }
    if (best_cat < 0 || best_corr < delta_p) continue;
    out.candidates.push_back({s, best_cat, best_corr, dist});
  }

  std::sort(out.candidates.begin(), out.candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.corr != b.corr) return a.corr > b.corr;
              if (a.distance_km != b.distance_km) return a.distance_km < b.distance_km;
              return a.sensor < b.sensor;
            });
  if (top_x >= 0 && static_cast<int>(out.candidates.size()) > top_x)
    out.candidates.resize(top_x);
  return out;
}

std::vector<Timestamp> matched_training_windows(const PatternSet& target,
                                                const std::vector<const PatternSet*>& candidates,
                                                int lag_hours) {
  std::vector<Timestamp> target_ts = pattern_timestamps(target);
  if (candidates.empty()) return target_ts;

  std::vector<Timestamp> out;
  for (const PatternSet* cand : candidates) {
    std::vector<Timestamp> cand_ts = pattern_timestamps(*cand);
    MatchResult r = match_timestamps(target_ts, cand_ts, lag_hours);
    out.insert(out.end(), r.matched_target.begin(), r.matched_target.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace stcausal
