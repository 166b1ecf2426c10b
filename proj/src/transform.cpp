#include "stcausal/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stcausal/error.hpp"

namespace stcausal {

DiffSeries diff_normalize(const PollutantSeries& series) {
  if (series.timestamps.size() < 2)
    throw Error(Errc::DegenerateSeries, "series shorter than 2 readings");

  DiffSeries out;
  out.sensor = series.sensor;
  out.category = series.category;
  out.timestamps.reserve(series.timestamps.size() - 1);
  out.values.reserve(series.timestamps.size() - 1);

  std::size_t n_defined = 0;
  double sum = 0.0;
  for (std::size_t i = 1; i < series.timestamps.size(); ++i) {
    out.timestamps.push_back(series.timestamps[i]);
    bool consecutive = series.timestamps[i] - series.timestamps[i - 1] == kSecondsPerHour;
    double d = missing();
    if (consecutive && !is_missing(series.values[i]) && !is_missing(series.values[i - 1]))
      d = series.values[i] - series.values[i - 1];
    out.values.push_back(d);
    if (!is_missing(d)) {
      ++n_defined;
      sum += d;
    }
  }
  if (n_defined < 2)
    throw Error(Errc::DegenerateSeries, "fewer than 2 consecutive-hour pairs");

  double mean = sum / n_defined;
  double ss = 0.0;
  for (double d : out.values)
    if (!is_missing(d)) ss += (d - mean) * (d - mean);
  double std = std::sqrt(ss / n_defined);

  out.diff_mean = mean;
  out.diff_std = std;
  if (std < kDegenerateStd) {
    for (double& d : out.values)
      if (!is_missing(d)) d = 0.0;
    out.diff_std = 0.0;
  } else {
    for (double& d : out.values)
      if (!is_missing(d)) d = (d - mean) / std;
  }
  return out;
}

SymbolicSeries sax_discretize(const PollutantSeries& series, int alphabet,
                              int segment_minutes) {
  if (alphabet < 2 || alphabet > 10)
    throw Error(Errc::BadConfig, "alphabet must be in [2, 10]");
  if (segment_minutes < 1) throw Error(Errc::BadConfig, "segment must be >= 1 minute");

  SymbolicSeries out;
  out.sensor = series.sensor;
  out.category = series.category;
  out.alphabet = alphabet;

  // Whole-series z-normalization.
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : series.values)
    if (!is_missing(v)) {
      sum += v;
      ++n;
    }
  if (n == 0) return out;
  double mean = sum / n;
  double ss = 0.0;
  for (double v : series.values)
    if (!is_missing(v)) ss += (v - mean) * (v - mean);
  double std = std::sqrt(ss / n);
  const bool degenerate = std < kDegenerateStd;
  const int median_level = (alphabet + 1) / 2 + (alphabet + 1) % 2;  // ceil((a+1)/2)

  std::vector<double> beta = sax_breakpoints(alphabet);
  auto level_of = [&](double z) {
    int lvl = 1;
    while (lvl <= static_cast<int>(beta.size()) && z > beta[lvl - 1]) ++lvl;
    return lvl;
  };

  // Partition by calendar day; aggregate per segment within the day.
  std::map<std::int64_t, std::map<int, std::pair<double, int>>> by_day;  // day -> segment -> (sum, count)
  for (std::size_t i = 0; i < series.timestamps.size(); ++i) {
    if (is_missing(series.values[i])) continue;
    std::int64_t day = day_of(series.timestamps[i]);
    int seg = minutes_into_day(series.timestamps[i]) / segment_minutes;
    auto& acc = by_day[day][seg];
    acc.first += series.values[i];
    acc.second += 1;
  }

  for (const auto& [day, segs] : by_day) {
    SymbolicDay sd;
    sd.day = day;
    for (const auto& [seg, acc] : segs) {
      double v = acc.first / acc.second;
      int lvl = degenerate ? median_level : level_of((v - mean) / std);
      sd.events.emplace_back(lvl, seg * segment_minutes);
    }
    out.days.push_back(std::move(sd));
  }
  return out;
}

Season season_of_month(int month) {
  if (month >= 3 && month <= 5) return Season::Spring;
  if (month >= 6 && month <= 8) return Season::Summer;
  if (month >= 9 && month <= 11) return Season::Autumn;
  return Season::Winter;
}

SeasonalSplit split_seasonal(const std::vector<std::int64_t>& all_days, int test_days) {
  if (test_days < 0) throw Error(Errc::BadConfig, "test_days must be >= 0");
  if (all_days.empty()) throw Error(Errc::InsufficientData, "no days in dataset");

  // Group by (season, season-year); December belongs to the winter that
  // starts in that year.
  std::map<std::pair<int, int>, std::vector<std::int64_t>> blocks;
  for (std::int64_t day : all_days) {
    int m = month_of_day(day);
    int y = year_of_day(day);
    Season s = season_of_month(m);
    if (s == Season::Winter && m != 12) --y;
    blocks[{static_cast<int>(s), y}].push_back(day);
  }

  SeasonalSplit out;
  for (auto& [key, days] : blocks) {
    std::sort(days.begin(), days.end());
    if (test_days > 0 && static_cast<int>(days.size()) < 2 * test_days)
      throw Error(Errc::InsufficientData,
                  std::string(kSeasonNames[key.first]) + " " + std::to_string(key.second) +
                      " has " + std::to_string(days.size()) + " days, needs " +
                      std::to_string(2 * test_days));
    std::size_t cut = days.size() - static_cast<std::size_t>(test_days);
    auto& train = out.train_days[key.first];
    auto& test = out.test_days[key.first];
    train.insert(train.end(), days.begin(), days.begin() + cut);
    test.insert(test.end(), days.begin() + cut, days.end());
  }
  for (int s = 0; s < 4; ++s) {
    std::sort(out.train_days[s].begin(), out.train_days[s].end());
    std::sort(out.test_days[s].begin(), out.test_days[s].end());
  }
  return out;
}

NormalityResult normality_check(const DiffSeries& diffs) {
  std::vector<double> vals;
  vals.reserve(diffs.values.size());
  for (double v : diffs.values)
    if (!is_missing(v)) vals.push_back(v);
  return dagostino_pearson(vals);
}

}  // namespace stcausal
