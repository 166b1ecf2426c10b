#pragma once

#include <span>
#include <vector>

#include "stcausal/fep.hpp"
#include "stcausal/types.hpp"

namespace stcausal {

// t_s' matches t_s when 0 <= t_s - t_s' <= L. TS_s is the target side,
// TS_s' the (potential) causer side.
struct MatchResult {
  std::vector<Timestamp> matched_target;  // M_s
  std::vector<Timestamp> matched_causer;  // M_s'
  // one pair per matched target timestamp: (t_s, earliest matching t_s')
  std::vector<std::pair<Timestamp, Timestamp>> matched_pairs;
};

// Single linear merge scan over both sorted lists.
MatchResult match_timestamps(std::span<const Timestamp> ts_target,
                             std::span<const Timestamp> ts_causer, int lag_hours);

struct MatchStats {
  double precision = 0.0;  // |M_s'| / |TS_s'|
  double recall = 0.0;     // |M_s| / |TS_s|
  double corr = 0.0;
  int lag_hours = 0;
  std::vector<std::pair<Timestamp, Timestamp>> matched_pairs;
};

// corr = 2PR/(P+R), 0 when P+R = 0. The paper prints 2P/(P+R); that variant
// is available behind `as_printed_corr` for fidelity experiments.
MatchStats match_stats(std::span<const Timestamp> ts_target,
                       std::span<const Timestamp> ts_causer, int lag_hours,
                       bool as_printed_corr = false);

struct Candidate {
  int sensor = -1;
  int category = -1;  // best-correlated category at that sensor
  double corr = 0.0;
  double distance_km = 0.0;
};

struct CandidateSet {
  int target_sensor = -1;
  int target_category = -1;
  std::vector<Candidate> candidates;  // corr descending, ties by distance
};

// All pattern sets of a dataset, indexed by (sensor, category).
class PatternIndex {
 public:
  void add(PatternSet ps);
  const PatternSet* find(int sensor, int category) const;
  const std::vector<PatternSet>& all() const { return sets_; }
  // Cached sorted occurrence timestamps for a set.
  std::span<const Timestamp> timestamps(int sensor, int category) const;

 private:
  std::vector<PatternSet> sets_;
  std::vector<std::vector<Timestamp>> ts_;
};

CandidateSet candidate_causers(int target_sensor, int target_category,
                               const PatternIndex& patterns,
                               const std::vector<SensorMeta>& sensors, double delta_g_km,
                               double delta_p, int lag_hours, int top_x,
                               bool as_printed_corr = false);

// Target occurrence timestamps matched by at least one candidate; with no
// candidates, all target occurrence timestamps.
std::vector<Timestamp> matched_training_windows(const PatternSet& target,
                                                const std::vector<const PatternSet*>& candidates,
                                                int lag_hours);

}  // namespace stcausal
