#include "stcausal/fep.hpp"

#include <algorithm>
#include <cmath>

#include "stcausal/error.hpp"

namespace stcausal {

namespace {

int max_level(const SymbolicSeries& db) {
  int m = db.alphabet;
  for (const auto& d : db.days)
    for (const auto& [lvl, off] : d.events) m = std::max(m, lvl);
  return m;
}

// Can `levels[k..]` embed into `events` after position `pos` under the gap
// constraint? Backtracks because the earliest next match is not always the
// one that lets the rest embed.
bool embed_from(const std::vector<std::pair<int, int>>& events, std::size_t pos,
                const std::vector<int>& levels, std::size_t k, int delta_t) {
  if (k == levels.size()) return true;
  int base = events[pos].second;
  for (std::size_t j = pos + 1; j < events.size(); ++j) {
    int rel = events[j].second - base;
    if (rel > delta_t) break;
    if (rel > 0 && events[j].first == levels[k] &&
        embed_from(events, j, levels, k + 1, delta_t))
      return true;
  }
  return false;
}

// Earliest absolute start minute of an embedding in the day, -1 if none.
int earliest_start(const SymbolicDay& day, const std::vector<int>& levels, int delta_t) {
  for (std::size_t j = 0; j < day.events.size(); ++j)
    if (day.events[j].first == levels[0] &&
        embed_from(day.events, j, levels, 1, delta_t))
      return day.events[j].second;
  return -1;
}

void collect_occurrences(const SymbolicSeries& db, EvolvingPattern& p) {
  for (const auto& day : db.days) {
    int start = earliest_start(day, p.levels, p.delta_t_minutes);
    if (start >= 0)
      p.occurrences.push_back({day.day, day.day * kSecondsPerDay + start * 60});
  }
  p.support = static_cast<int>(p.occurrences.size());
}

void sort_patterns(PatternSet& ps) {
  std::sort(ps.patterns.begin(), ps.patterns.end(),
            [](const EvolvingPattern& a, const EvolvingPattern& b) {
              return a.levels < b.levels;
            });
}

}  // namespace

ProjectedDatabase project(const SymbolicSeries& db, const ProjectedDatabase& pdb,
                          int item, int delta_t_minutes, ProjectionMode mode) {
  ProjectedDatabase out;
  out.prefix = pdb.prefix;
  out.prefix.push_back(item);

  // An occurrence at the end of a day has an empty postfix and is omitted.
  if (pdb.prefix.empty()) {
    for (int dp = 0; dp < static_cast<int>(db.days.size()); ++dp) {
      const auto& events = db.days[dp].events;
      for (int j = 0; j + 1 < static_cast<int>(events.size()); ++j) {
        if (events[j].first != item) continue;
        out.entries.push_back({dp, j});
        if (mode == ProjectionMode::FirstOccurrence) break;
      }
    }
    return out;
  }

  for (const auto& entry : pdb.entries) {
    const auto& events = db.days[entry.day_pos].events;
    int base = events[entry.anchor].second;
    for (int j = entry.anchor + 1; j < static_cast<int>(events.size()); ++j) {
      int rel = events[j].second - base;
      if (rel > delta_t_minutes) break;
      if (rel <= 0 || events[j].first != item) continue;
      if (j + 1 < static_cast<int>(events.size()))
        out.entries.push_back({entry.day_pos, j});
      if (mode == ProjectionMode::FirstOccurrence) break;
    }
  }
  // Distinct embeddings of the prefix can end at the same event; the postfix
  // only depends on the anchor, so keep each (day, anchor) once.
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ProjectedDatabase::Entry& a, const ProjectedDatabase::Entry& b) {
              return a.day_pos != b.day_pos ? a.day_pos < b.day_pos : a.anchor < b.anchor;
            });
  out.entries.erase(std::unique(out.entries.begin(), out.entries.end(),
                                [](const ProjectedDatabase::Entry& a,
                                   const ProjectedDatabase::Entry& b) {
                                  return a.day_pos == b.day_pos && a.anchor == b.anchor;
                                }),
                    out.entries.end());
  return out;
}

std::vector<std::pair<int, int>> local_frequent_items(const SymbolicSeries& db,
                                                      const ProjectedDatabase& pdb,
                                                      int sigma_abs, int delta_t_minutes,
                                                      int prev) {
  const int levels = max_level(db);
  std::vector<int> day_count(levels + 1, 0);
  std::vector<int> last_day(levels + 1, -1);

  for (const auto& entry : pdb.entries) {
    const auto& events = db.days[entry.day_pos].events;
    int base = events[entry.anchor].second;
    for (int j = entry.anchor + 1; j < static_cast<int>(events.size()); ++j) {
      int rel = events[j].second - base;
      if (rel > delta_t_minutes) break;
      if (rel <= 0) continue;
      int item = events[j].first;
      if (last_day[item] != entry.day_pos) {
        last_day[item] = entry.day_pos;
        ++day_count[item];
      }
    }
  }

  std::vector<std::pair<int, int>> out;
  for (int item = 1; item <= levels; ++item)
    if (item != prev && day_count[item] >= sigma_abs)
      out.emplace_back(item, day_count[item]);
  return out;
}

namespace {

void prefix_span(const SymbolicSeries& db, const ProjectedDatabase& pdb, int prev,
                 int sigma_abs, int delta_t, ProjectionMode mode, PatternSet& out) {
  for (const auto& [item, support] : local_frequent_items(db, pdb, sigma_abs, delta_t, prev)) {
    ProjectedDatabase grown = project(db, pdb, item, delta_t, mode);
    EvolvingPattern p;
    p.levels = grown.prefix;
    p.delta_t_minutes = delta_t;
    p.support = support;
    out.patterns.push_back(std::move(p));
    prefix_span(db, grown, item, sigma_abs, delta_t, mode, out);
  }
}

}  // namespace

PatternSet mine_feps_abs(const SymbolicSeries& db, int sigma_abs, int delta_t_minutes,
                         ProjectionMode mode) {
  if (db.days.empty()) throw Error(Errc::EmptyDatabase, "symbolic database has no days");
  if (sigma_abs < 1) throw Error(Errc::BadConfig, "sigma_abs must be >= 1");
  if (delta_t_minutes <= 0) throw Error(Errc::BadConfig, "delta_t must be positive");

  PatternSet out;
  out.sensor = db.sensor;
  out.category = db.category;
  out.sigma_abs = sigma_abs;
  out.delta_t_minutes = delta_t_minutes;

  // Initial frequent single items, counted per day.
  const int levels = max_level(db);
  std::vector<int> day_count(levels + 1, 0);
  for (const auto& day : db.days) {
    std::vector<bool> seen(levels + 1, false);
    for (const auto& [lvl, off] : day.events)
      if (!seen[lvl]) {
        seen[lvl] = true;
        ++day_count[lvl];
      }
  }

  ProjectedDatabase root;
  for (int item = 1; item <= levels; ++item) {
    if (day_count[item] < sigma_abs) continue;
    ProjectedDatabase pdb = project(db, root, item, delta_t_minutes, mode);
    prefix_span(db, pdb, item, sigma_abs, delta_t_minutes, mode, out);
  }

  for (auto& p : out.patterns) collect_occurrences(db, p);
  sort_patterns(out);
  return out;
}

PatternSet mine_feps(const SymbolicSeries& db, double sigma, int delta_t_minutes) {
  if (!(sigma > 0.0 && sigma <= 1.0))
    throw Error(Errc::BadConfig, "sigma must be in (0, 1]");
  if (db.days.empty()) throw Error(Errc::EmptyDatabase, "symbolic database has no days");
  int sigma_abs =
      std::max<int>(1, static_cast<int>(std::ceil(sigma * static_cast<double>(db.days.size()))));
  PatternSet ps = mine_feps_abs(db, sigma_abs, delta_t_minutes);
  ps.sigma = sigma;
  return ps;
}

namespace {

// Oracle-side containment check, written against the definitions directly and
// kept separate from the miner's embedding search on purpose.
bool oracle_contains(const std::vector<std::pair<int, int>>& events, std::size_t from,
                     const std::vector<int>& levels, std::size_t k, int delta_t,
                     int prev_minute) {
  if (k == levels.size()) return true;
  for (std::size_t j = from; j < events.size(); ++j) {
    if (k > 0) {
      int rel = events[j].second - prev_minute;
      if (rel > delta_t) break;
      if (rel <= 0) continue;
    }
    if (events[j].first != levels[k]) continue;
    if (oracle_contains(events, j + 1, levels, k + 1, delta_t, events[j].second))
      return true;
  }
  return false;
}

int oracle_support(const SymbolicSeries& db, const std::vector<int>& levels, int delta_t) {
  int sup = 0;
  for (const auto& day : db.days)
    if (oracle_contains(day.events, 0, levels, 0, delta_t, 0)) ++sup;
  return sup;
}

int oracle_earliest(const SymbolicDay& day, const std::vector<int>& levels, int delta_t) {
  for (std::size_t j = 0; j < day.events.size(); ++j)
    if (day.events[j].first == levels[0] &&
        oracle_contains(day.events, j + 1, levels, 1, delta_t, day.events[j].second))
      return day.events[j].second;
  return -1;
}

void oracle_extend(const SymbolicSeries& db, std::vector<int>& seq, int sigma_abs,
                   int delta_t, int max_len, int alphabet, PatternSet& out) {
  if (static_cast<int>(seq.size()) >= max_len) return;
  for (int next = 1; next <= alphabet; ++next) {
    if (next == seq.back()) continue;  // evolving constraint
    seq.push_back(next);
    int sup = oracle_support(db, seq, delta_t);
    if (sup >= sigma_abs) {
      EvolvingPattern p;
      p.levels = seq;
      p.delta_t_minutes = delta_t;
      p.support = sup;
      for (const auto& day : db.days) {
        int start = oracle_earliest(day, seq, delta_t);
        if (start >= 0)
          p.occurrences.push_back({day.day, day.day * kSecondsPerDay + start * 60});
      }
      out.patterns.push_back(std::move(p));
      oracle_extend(db, seq, sigma_abs, delta_t, max_len, alphabet, out);
    }
    seq.pop_back();
  }
}

}  // namespace

PatternSet brute_force_feps(const SymbolicSeries& db, int sigma_abs, int delta_t_minutes) {
  if (db.days.empty()) throw Error(Errc::EmptyDatabase, "symbolic database has no days");
  std::size_t max_day = 0;
  for (const auto& d : db.days) max_day = std::max(max_day, d.events.size());
  int alphabet = max_level(db);
  if (db.days.size() > 10 || max_day > 12 || alphabet > 4)
    throw Error(Errc::InstanceTooLarge, "oracle bound: days <= 10, events <= 12, alphabet <= 4");

  PatternSet out;
  out.sensor = db.sensor;
  out.category = db.category;
  out.sigma_abs = sigma_abs;
  out.delta_t_minutes = delta_t_minutes;

  std::vector<int> seq;
  for (int first = 1; first <= alphabet; ++first) {
    seq.assign(1, first);
    if (oracle_support(db, seq, delta_t_minutes) < sigma_abs) continue;
    oracle_extend(db, seq, sigma_abs, delta_t_minutes, static_cast<int>(max_day), alphabet,
                  out);
  }
  sort_patterns(out);
  return out;
}

std::vector<Timestamp> pattern_timestamps(const PatternSet& ps) {
  std::vector<Timestamp> out;
  for (const auto& p : ps.patterns)
    for (const auto& o : p.occurrences) out.push_back(o.start);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace stcausal
