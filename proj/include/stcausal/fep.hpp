#pragma once

#include <vector>

#include "stcausal/types.hpp"

namespace stcausal {

struct Occurrence {
  std::int64_t day = 0;  // epoch day index
  Timestamp start = 0;   // absolute time of the pattern's first element
};

struct EvolvingPattern {
  std::vector<int> levels;  // length >= 2, consecutive levels differ
  int delta_t_minutes = 0;
  int support = 0;  // number of distinct days the pattern occurs on
  std::vector<Occurrence> occurrences;  // one per occurring day, earliest embedding
};

struct PatternSet {
  int sensor = -1;
  int category = -1;
  double sigma = 0.0;  // support fraction as configured (0 when given absolute)
  int sigma_abs = 0;
  int delta_t_minutes = 0;
  std::vector<EvolvingPattern> patterns;  // sorted by levels, no duplicates
};

// The PrefixSpan variant projects on *every* occurrence of an item; the
// first-occurrence mode reproduces the standard behaviour that misses
// time-constrained patterns and exists for regression tests.
enum class ProjectionMode { Full, FirstOccurrence };

struct ProjectedDatabase {
  std::vector<int> prefix;
  struct Entry {
    int day_pos;  // index into SymbolicSeries::days
    int anchor;   // event index the prefix's last element matched
  };
  std::vector<Entry> entries;
};

// Project on `item`: with an empty prefix every occurrence of the item
// anchors a postfix; otherwise only occurrences within (0, delta_t] of the
// current anchor do. Postfix times are implicitly relative to the anchor.
ProjectedDatabase project(const SymbolicSeries& db, const ProjectedDatabase& pdb,
                          int item, int delta_t_minutes,
                          ProjectionMode mode = ProjectionMode::Full);

// Items != prev whose day-deduplicated postfix count within (0, delta_t]
// reaches sigma_abs, with that count. Sorted by item.
std::vector<std::pair<int, int>> local_frequent_items(const SymbolicSeries& db,
                                                      const ProjectedDatabase& pdb,
                                                      int sigma_abs, int delta_t_minutes,
                                                      int prev);

// Mine all frequent evolving patterns; sigma is a fraction of days, converted
// by ceiling to an absolute day count.
PatternSet mine_feps(const SymbolicSeries& db, double sigma, int delta_t_minutes);
PatternSet mine_feps_abs(const SymbolicSeries& db, int sigma_abs, int delta_t_minutes,
                         ProjectionMode mode = ProjectionMode::Full);

// Exhaustive reference enumeration (test oracle). Guarded to small instances:
// days <= 10, events per day <= 12, alphabet <= 4.
PatternSet brute_force_feps(const SymbolicSeries& db, int sigma_abs, int delta_t_minutes);

// Sorted distinct occurrence start timestamps across all patterns in the set.
std::vector<Timestamp> pattern_timestamps(const PatternSet& ps);

}  // namespace stcausal
