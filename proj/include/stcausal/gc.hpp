#pragma once

#include <limits>

#include "stcausal/design.hpp"
#include "stcausal/match.hpp"

namespace stcausal {

struct GcResult {
  double score = 0.0;
  int best_category = -1;
  int best_lag = 0;
};

// Granger-style causality score from candidate sensor s_n to the target
// pollutant: the best, over the candidate's categories and lags 1..L, of
//   matched_count * (var1 - var2) / (var2 * chi2_L(0.05))
// where var1 conditions the target on its local lag block only and var2
// additionally on the candidate's series at the probed lag. Negative variance
// reductions clamp to 0; score <= 1 reads as no causality.
//
// match_override >= 0 replaces the pattern-matched count (used by the
// no-patterns ablation, where it is the row count).
GcResult gc_score(const DiffTable& diffs, const PatternIndex& patterns,
                  int target_sensor, int target_category, int cand_sensor,
                  int lag_hours, std::span<const Timestamp> windows,
                  long match_override = -1);

// Top-N candidates by gc_score (ties by corr, then distance, then sensor id).
// Candidates not exceeding min_score are dropped. N = 0 gives the local-only
// spec.
ParentSpec init_structure(int target_sensor, int target_category,
                          const CandidateSet& candidates, const DiffTable& diffs,
                          const PatternIndex& patterns, int n_neighbors, int lag_hours,
                          std::span<const Timestamp> windows,
                          double min_score = -std::numeric_limits<double>::infinity(),
                          long match_override = -1);

}  // namespace stcausal
