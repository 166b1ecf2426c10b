#pragma once

#include <optional>

#include "stcausal/config.hpp"
#include "stcausal/em.hpp"
#include "stcausal/granger.hpp"
#include "stcausal/synth.hpp"
#include "stcausal/transform.hpp"

namespace stcausal {

// Knobs shared by the real pipeline and the simplified synthetic one.
struct PgParams {
  double sigma = 0.1;
  int alphabet = 5;
  int delta_t_minutes = 60;
  int segment_minutes = 60;
  double delta_g_km = 200.0;
  double delta_p = 0.5;
  int top_x = 8;
  int lag_hours = 3;
  int n_clusters = 1;
  int n_neighbors = 2;
  double min_gc_score = 1.0;  // scores at or below 1 read as no causality
  bool no_patterns = false;
  bool paper_exact_pi = false;
  bool paper_exact_corr = false;
  bool hard_assign = false;
  std::uint64_t seed = 1;
};

PgParams params_from_config(const PipelineConfig& cfg);

// Mine every (sensor, category) series; parallel over series, stable order.
std::vector<PatternSet> mine_dataset(const Dataset& ds, double sigma,
                                     int delta_t_minutes, int alphabet,
                                     int segment_minutes);

DiffTable build_diff_table(const Dataset& ds);

double series_value_at(const PollutantSeries& s, Timestamp t);

// Keep timestamps whose calendar day is in `days` (sorted); additionally drop
// the first `exclude_first_hours` hours of each contiguous day block.
std::vector<Timestamp> filter_by_days(std::span<const Timestamp> ts,
                                      const std::vector<std::int64_t>& days,
                                      int exclude_first_hours = 0);

// All hourly timestamps of the target series on the given days (the
// no-patterns ablation replaces matched windows with these).
std::vector<Timestamp> all_hour_windows(const PollutantSeries& target,
                                        const std::vector<std::int64_t>& days);

struct TrainOutput {
  CausalModel model;
  double val_accuracy = 0.0;        // held-out tail of the training windows
  double local_val_accuracy = 0.0;  // same protocol with N = 0
  int n_train_rows = 0;
  int n_val_rows = 0;
};

// Train on the leading 80% of the windows, validate on the tail (held-out
// concentration accuracy). The local (N = 0) variant backs the pathway stop
// rule.
TrainOutput train_target(const Dataset& ds, const DiffTable& diffs,
                         const PatternIndex& patterns, const MeteoSeries* meteo,
                         int target_sensor, int target_category,
                         const CandidateSet& candidates,
                         std::span<const Timestamp> windows, const PgParams& params);

// 1-hour-ahead concentration accuracy of `model` at the given windows.
// Returns NaN when no usable test row exists.
double evaluate_accuracy(const CausalModel& model, const DiffTable& diffs,
                         const CandidateSet& candidates, const MeteoSeries* meteo,
                         const PollutantSeries& target_series,
                         const DiffSeries& target_diffs,
                         std::span<const Timestamp> windows, int lag_hours);

// ---- synthetic benchmark ----

// Dataset view of synthetic series: one sensor per series, single category,
// values cumulated so the 1-hour diffs recover the series exactly.
Dataset synth_to_dataset(const SynthData& data);

Digraph simplified_pg_graph(const SynthData& data, const PgParams& params);

struct MethodReport {
  EdgeMetrics metrics;
  double runtime_ms = 0.0;
  Digraph graph;
};

struct BenchReport {
  SyntheticSpec spec;
  TruthGraph truth;
  MethodReport granger, lasso, pg;
};

BenchReport run_synth_bench(const SyntheticSpec& spec, const PgParams& params);

}  // namespace stcausal
