#pragma once

#include <array>

#include "stcausal/stats.hpp"
#include "stcausal/types.hpp"

namespace stcausal {

// d_t = v_t - v_{t-1} for consecutive hourly pairs (a gap or a missing source
// value makes the diff missing), then z-normalized over non-missing diffs.
// Diffs with |std| below kDegenerateStd are all defined as 0.
inline constexpr double kDegenerateStd = 1e-12;
DiffSeries diff_normalize(const PollutantSeries& series);

// SAX over the whole-series z-normalization, partitioned by calendar day and
// aggregated per segment (segment_minutes = 60 keeps the raw hourly values).
// Zero-variance series map every reading to the median level.
SymbolicSeries sax_discretize(const PollutantSeries& series, int alphabet,
                              int segment_minutes = 60);

enum class Season { Spring = 0, Summer = 1, Autumn = 2, Winter = 3 };
inline constexpr std::array<std::string_view, 4> kSeasonNames = {"spring", "summer",
                                                                 "autumn", "winter"};
Season season_of_month(int month);  // MAM, JJA, SON, DJF

struct SeasonalSplit {
  std::array<std::vector<std::int64_t>, 4> train_days;
  std::array<std::vector<std::int64_t>, 4> test_days;
};

// Last `test_days` calendar days of each (season, year) block go to test.
// `all_days` must be sorted distinct epoch-day indices.
SeasonalSplit split_seasonal(const std::vector<std::int64_t>& all_days, int test_days);

// D'Agostino-Pearson on the non-missing diff values.
NormalityResult normality_check(const DiffSeries& diffs);

}  // namespace stcausal
