// Acceptance suite: one checkable criterion per --criterion N, a PASS/FAIL
// line each, exit nonzero on failure. `--criterion all` runs everything.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "stcausal/em.hpp"
#include "stcausal/error.hpp"
#include "stcausal/fep.hpp"
#include "stcausal/gc.hpp"
#include "stcausal/granger.hpp"
#include "stcausal/ingest.hpp"
#include "stcausal/match.hpp"
#include "stcausal/pipeline.hpp"
#include "stcausal/rng.hpp"
#include "stcausal/serialize.hpp"
#include "stcausal/wls.hpp"

namespace fs = std::filesystem;
using namespace stcausal;
using namespace stcausal::fixtures;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "    FAILED: " << what << "\n";
    }
  }
};

// ---------- criterion 1: Table-2 golden mining ----------

SymbolicSeries paper_example_db() {
  SymbolicSeries db;
  db.sensor = 0;
  db.category = 0;
  db.alphabet = 3;
  auto add_day = [&](std::vector<std::pair<int, int>> events) {
    SymbolicDay d;
    d.day = 16000 + static_cast<std::int64_t>(db.days.size());
    d.events = std::move(events);
    db.days.push_back(std::move(d));
  };
  add_day({{2, 0}, {1, 10}, {2, 30}, {3, 40}});
  add_day({{1, 0}, {2, 30}, {1, 360}, {2, 400}, {3, 420}});
  add_day({{2, 0}, {3, 30}});
  add_day({{1, 0}, {1, 120}, {3, 140}, {2, 150}, {3, 180}});
  add_day({{2, 50}, {2, 80}, {3, 120}, {1, 210}});
  return db;
}

bool criterion1() {
  Check c;
  SymbolicSeries db = paper_example_db();
  PatternSet ps = mine_feps_abs(db, 3, 60);

  std::map<std::vector<int>, int> got;
  for (const auto& p : ps.patterns) got[p.levels] = p.support;
  std::map<std::vector<int>, int> want = {
      {{1, 2}, 3}, {{1, 3}, 3}, {{2, 3}, 5}, {{1, 2, 3}, 3}};
  c.expect(got == want, "golden pattern set mismatch");

  // First-occurrence projection reproduces the worked failure: no local item
  // is frequent in the projected database of the initial item.
  ProjectedDatabase root;
  ProjectedDatabase first = project(db, root, 1, 60, ProjectionMode::FirstOccurrence);
  c.expect(first.entries.size() == 3, "first-occurrence projection should have 3 postfixes");
  c.expect(local_frequent_items(db, first, 3, 60, 1).empty(),
           "first-occurrence local items should be empty");
  ProjectedDatabase full = project(db, root, 1, 60, ProjectionMode::Full);
  c.expect(full.entries.size() == 5, "full projection should have 5 postfixes");

  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

// ---------- criterion 2: miner oracle equivalence ----------

bool criterion2() {
  Check c;
  Rng rng(424242);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int n_days = 1 + static_cast<int>(rng.below(8));
    int alphabet = 2 + static_cast<int>(rng.below(3));
    SymbolicSeries db;
    db.sensor = 0;
    db.category = 0;
    db.alphabet = alphabet;
    for (int d = 0; d < n_days; ++d) {
      SymbolicDay day;
      day.day = 16000 + d;
      std::vector<int> offsets;
      int n_events = static_cast<int>(rng.below(13));
      for (int e = 0; e < n_events; ++e)
        offsets.push_back(10 * static_cast<int>(rng.below(70)));
      std::sort(offsets.begin(), offsets.end());
      offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
      for (int off : offsets)
        day.events.emplace_back(1 + static_cast<int>(rng.below(alphabet)), off);
      db.days.push_back(std::move(day));
    }
    if (db.days.empty()) continue;
    int sigma_abs = 1 + static_cast<int>(rng.below(n_days));
    int delta_t = std::vector<int>{30, 60, 120}[rng.below(3)];

    PatternSet mined = mine_feps_abs(db, sigma_abs, delta_t);
    PatternSet brute = brute_force_feps(db, sigma_abs, delta_t);
    bool equal = mined.patterns.size() == brute.patterns.size();
    for (std::size_t i = 0; equal && i < mined.patterns.size(); ++i) {
      equal = mined.patterns[i].levels == brute.patterns[i].levels &&
              mined.patterns[i].support == brute.patterns[i].support &&
              mined.patterns[i].occurrences.size() == brute.patterns[i].occurrences.size();
      for (std::size_t k = 0; equal && k < mined.patterns[i].occurrences.size(); ++k)
        equal = mined.patterns[i].occurrences[k].start ==
                brute.patterns[i].occurrences[k].start;
    }
    c.expect(equal, "trial " + std::to_string(trial) + " differs from the oracle");
    ++checked;
    if (!c.ok) break;
  }
  std::printf("    %d random databases checked\n", checked);
  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

// ---------- criterion 3: matcher oracle equivalence ----------

bool criterion3() {
  Check c;
  Rng rng(5150);
  for (int trial = 0; trial < 500; ++trial) {
    auto draw = [&] {
      std::vector<Timestamp> ts;
      int n = 1 + static_cast<int>(rng.below(60));
      for (int i = 0; i < n; ++i)
        ts.push_back(static_cast<Timestamp>(rng.below(300)) * kSecondsPerHour);
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      return ts;
    };
    std::vector<Timestamp> ts = draw(), tsp = draw();
    int lag = static_cast<int>(rng.below(6));

    MatchResult fast = match_timestamps(ts, tsp, lag);
    // Quadratic pairing straight from the definition.
    std::vector<Timestamp> m_t, m_c;
    for (Timestamp t : ts)
      for (Timestamp tp : tsp)
        if (t - tp >= 0 && t - tp <= static_cast<Timestamp>(lag) * kSecondsPerHour) {
          m_t.push_back(t);
          break;
        }
    for (Timestamp tp : tsp)
      for (Timestamp t : ts)
        if (t - tp >= 0 && t - tp <= static_cast<Timestamp>(lag) * kSecondsPerHour) {
          m_c.push_back(tp);
          break;
        }
    c.expect(fast.matched_target == m_t && fast.matched_causer == m_c,
             "merge scan differs from brute force at trial " + std::to_string(trial));

    MatchStats narrow = match_stats(ts, tsp, lag);
    MatchStats wide = match_stats(ts, tsp, lag + 3);
    c.expect(wide.precision >= narrow.precision && wide.recall >= narrow.recall &&
                 wide.corr >= narrow.corr - 1e-12,
             "L-monotonicity violated at trial " + std::to_string(trial));
    if (!c.ok) break;
  }
  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

// ---------- criterion 4: EM soundness ----------

bool criterion4() {
  Check c;
  int tag_ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TwoRegime fixture = two_regime_design(2000, 9000 + seed);
    EmOptions opts;
    opts.seed = seed;
    CausalModel model = em_learn(fixture.design, {fixture.design.universe}, 2, opts);
    for (std::size_t i = 1; i < model.ll_trace.size(); ++i)
      c.expect(model.ll_trace[i] >=
                   model.ll_trace[i - 1] - 1e-8 * std::abs(model.ll_trace[i - 1]),
               "log likelihood decreased at seed " + std::to_string(seed));
    if (label_accuracy(model.tag, fixture.labels) >= 0.95) ++tag_ok;
  }
  std::printf("    tag accuracy >= 95%% in %d/20 seeds\n", tag_ok);
  c.expect(tag_ok == 20, "tag accuracy below 95% in some seed");

  // K = 1, N = 0 equals the plain least-squares autoregression.
  Rng rng(4242);
  const int n = 1200;
  std::vector<double> y(n), x1(n);
  for (int i = 0; i < n; ++i) {
    x1[i] = rng.normal();
    y[i] = 0.4 * (i > 0 ? y[i - 1] : 0) + 0.2 * rng.normal();
  }
  DiffTable diffs;
  diffs.add(make_diff_series(0, 0, y));
  diffs.add(make_diff_series(0, 1, x1));
  PatternIndex patterns;
  CandidateSet cands;
  cands.target_sensor = 0;
  cands.target_category = 0;
  RefineOptions ropts;
  ropts.n_clusters = 1;
  ropts.n_neighbors = 0;
  ropts.lag_hours = 3;
  auto windows = all_hours(3, n);
  CausalModel model = refine(diffs, patterns, nullptr, 0, 0, cands, windows, ropts);

  MixtureDesign design = build_mixture_design(diffs, 0, 0, cands, 3, nullptr, windows);
  WlsFit direct = fit_wls(design.rows.q, design.rows.p,
                          Eigen::VectorXd::Ones(design.rows.rows()));
  double coef_err = (model.clusters[0].coef - direct.coef).cwiseAbs().maxCoeff();
  double mu_err = std::abs(model.clusters[0].mu0 - direct.intercept);
  c.expect(coef_err <= 1e-9 && mu_err <= 1e-9,
           "K=1/N=0 coefficients differ from least squares");
  for (Eigen::Index i = 0; i < 25; ++i) {
    double est = predict_diff(model, design, i);
    double want = direct.intercept + design.rows.q.row(i).dot(direct.coef);
    c.expect(std::abs(est - want) <= 1e-9, "K=1/N=0 prediction differs");
  }
  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

// ---------- criterion 5: GC score calibration ----------

PatternIndex dense_stamp_index(int n_series, int hours, int step) {
  PatternIndex patterns;
  for (int s = 0; s < n_series; ++s) {
    PatternSet ps;
    ps.sensor = s;
    ps.category = 0;
    EvolvingPattern ep;
    ep.levels = {1, 2};
    for (int i = 5; i < hours; i += step) {
      Timestamp t = base_time() + static_cast<Timestamp>(i) * kSecondsPerHour;
      ep.occurrences.push_back({day_of(t), t});
    }
    ep.support = static_cast<int>(ep.occurrences.size());
    ps.patterns.push_back(std::move(ep));
    patterns.add(std::move(ps));
  }
  return patterns;
}

bool criterion5() {
  Check c;
  // Null pairs: independent series, score <= 1 in >= 93% of 200 trials.
  int null_ok = 0;
  const int n = 2000;
  PatternIndex patterns = dense_stamp_index(2, n, 12);
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(70000 + trial);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
    }
    DiffTable diffs;
    diffs.add(make_diff_series(0, 0, a));
    diffs.add(make_diff_series(1, 0, b));
    GcResult r = gc_score(diffs, patterns, 0, 0, 1, 3, all_hours(5, n));
    if (r.score <= 1.0) ++null_ok;
  }
  std::printf("    null score <= 1 in %d/200 trials\n", null_ok);
  c.expect(null_ok >= 186, "null calibration below 93%");

  // Planted x -> y with coefficient 0.8 at lag 2.
  int hit = 0, lag_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng(80000 + trial);
    auto [x, y] = lagged_pair(2000, 0.8, 2, 1.0, rng);
    DiffTable diffs;
    diffs.add(make_diff_series(0, 0, y));
    diffs.add(make_diff_series(1, 0, x));
    GcResult r = gc_score(diffs, patterns, 0, 0, 1, 3, all_hours(5, 2000));
    if (r.score > 1.0) ++hit;
    if (r.best_lag == 2) ++lag_ok;
  }
  std::printf("    planted edge found in %d/50, lag correct in %d/50\n", hit, lag_ok);
  c.expect(hit >= 48, "planted edge detection below 95%");
  c.expect(lag_ok >= 48, "lag identification below 95%");
  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

// ---------- criterion 6: synthetic structure recovery ----------

bool criterion6() {
  Check c;
  const int seeds = 50;
  double f1_pg = 0, f1_lasso = 0, f1_granger = 0;
  for (int s = 0; s < seeds; ++s) {
    SyntheticSpec spec;
    spec.seed = 31000 + s;
    PgParams params;
    params.n_neighbors = 2;
    params.n_clusters = 1;
    params.delta_p = 0.0;
    params.top_x = 1000;
    params.min_gc_score = 1.0;
    params.seed = spec.seed;
    BenchReport r = run_synth_bench(spec, params);
    f1_pg += r.pg.metrics.f1;
    f1_lasso += r.lasso.metrics.f1;
    f1_granger += r.granger.metrics.f1;
  }
  f1_pg /= seeds;
  f1_lasso /= seeds;
  f1_granger /= seeds;
  std::printf("    mean F1: pg %.3f, lasso %.3f, pairwise %.3f\n", f1_pg, f1_lasso,
              f1_granger);
  c.expect(f1_pg >= f1_lasso, "pg mean F1 below lasso");
  c.expect(f1_lasso >= f1_granger, "lasso mean F1 below pairwise granger");
  c.expect(f1_pg >= 0.6, "pg mean F1 below 0.6");
  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

// ---------- criterion 7: ablation direction ----------

// Regime-switching system: the target follows a bursty causer only through
// its meaningful moves, with the regime (visible in E_t) flipping the
// coefficient; nearby noise sensors are in range but carry no signal.
struct AblationWorld {
  Dataset ds;
  MeteoSeries meteo;
  std::vector<std::int64_t> train_days, test_days;
};

AblationWorld make_ablation_world(std::uint64_t seed) {
  Rng rng(seed);
  AblationWorld w;
  const int days = 150, hours = days * 24;

  w.ds.sensors.push_back({"T", "c", 39.90, 116.40});
  w.ds.sensors.push_back({"X", "c", 39.95, 116.45});
  for (int k = 0; k < 3; ++k)
    w.ds.sensors.push_back({"N" + std::to_string(k), "c", 39.80 + 0.05 * k, 116.30});

  Timestamp t0 = base_time();
  std::vector<double> x(hours), y(hours);
  std::vector<std::vector<double>> noise(3, std::vector<double>(hours));
  w.meteo.vectors.resize(hours, 1);
  double xv = 0, yv = 0;
  std::vector<double> nv(3, 0.0);
  for (int t = 0; t < hours; ++t) {
    int regime = (t / 96) % 2;
    double burst = rng.uniform() < 0.04 ? 8.0 * (rng.uniform() < 0.5 ? 1 : -1) : 0.0;
    xv = 0.75 * xv + rng.normal() + burst;
    x[t] = 60 + 5 * xv;
    double dx = t >= 1 ? x[t - 1] - (t >= 2 ? x[t - 2] : 60.0) : 0.0;
    double drive = std::abs(dx) > 6.0 ? dx : 0.0;  // only meaningful moves carry over
    double coef = regime == 0 ? 0.9 : -0.7;
    yv = 0.6 * yv + coef * drive / 5.0 + 0.4 * rng.normal();
    y[t] = 60 + 5 * yv;
    for (int k = 0; k < 3; ++k) {
      nv[k] = 0.8 * nv[k] + rng.normal() + (rng.uniform() < 0.04 ? 6.0 : 0.0);
      noise[k][t] = 60 + 5 * nv[k];
    }
    w.meteo.timestamps.push_back(t0 + static_cast<Timestamp>(t) * kSecondsPerHour);
    w.meteo.vectors(t, 0) = (regime == 0 ? 2.0 : 9.0) + 0.3 * rng.normal();
  }

  auto add_series = [&](int sensor, const std::vector<double>& v) {
    PollutantSeries s;
    s.sensor = sensor;
    s.category = 0;
    for (int t = 0; t < hours; ++t) {
      s.timestamps.push_back(t0 + static_cast<Timestamp>(t) * kSecondsPerHour);
      s.values.push_back(v[t]);
    }
    w.ds.series.push_back(std::move(s));
  };
  add_series(0, y);
  add_series(1, x);
  for (int k = 0; k < 3; ++k) add_series(2 + k, noise[k]);

  for (int d = 0; d < days; ++d) {
    std::int64_t day = day_of(t0) + d;
    (d < days - 30 ? w.train_days : w.test_days).push_back(day);
  }
  return w;
}

bool criterion7() {
  Check c;
  int full_beats_np = 0, full_beats_nc = 0, both = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    AblationWorld w = make_ablation_world(52000 + s);
    DiffTable diffs = build_diff_table(w.ds);
    PatternIndex patterns;
    for (auto& ps : mine_dataset(w.ds, 0.1, 60, 5, 60)) patterns.add(std::move(ps));

    CandidateSet cands = candidate_causers(0, 0, patterns, w.ds.sensors, 200.0, 0.2, 3,
                                           8, false);
    const PatternSet* target_ps = patterns.find(0, 0);
    std::vector<const PatternSet*> cand_ps;
    for (const Candidate& cd : cands.candidates) {
      const PatternSet* p = patterns.find(cd.sensor, cd.category);
      if (p) cand_ps.push_back(p);
    }
    std::vector<Timestamp> matched = matched_training_windows(*target_ps, cand_ps, 3);
    std::vector<Timestamp> all_ts = w.ds.series[0].timestamps;

    auto run_mode = [&](bool no_patterns, int k) {
      PgParams params;
      params.lag_hours = 3;
      params.n_clusters = k;
      params.n_neighbors = 2;
      params.min_gc_score = 1.0;
      params.no_patterns = no_patterns;
      params.seed = 1;
      std::vector<Timestamp> train = filter_by_days(
          no_patterns ? all_ts : matched, w.train_days);
      TrainOutput out = train_target(w.ds, diffs, patterns, &w.meteo, 0, 0, cands,
                                     train, params);
      // Scoring happens on the pattern-matched test periods for every mode.
      std::vector<Timestamp> test = filter_by_days(matched, w.test_days, 3);
      const PollutantSeries* series = w.ds.find(0, 0);
      const DiffSeries* d = diffs.find(0, 0);
      return evaluate_accuracy(out.model, diffs, cands, &w.meteo, *series, *d, test, 3);
    };

    double acc_full = run_mode(false, 2);
    double acc_np = run_mode(true, 2);
    double acc_nc = run_mode(false, 1);
    if (acc_full >= acc_np) ++full_beats_np;
    if (acc_full >= acc_nc) ++full_beats_nc;
    if (acc_full >= acc_np && acc_full >= acc_nc) ++both;
    std::printf("    seed %2d: full %.4f, no-patterns %.4f, no-confounders %.4f\n", s,
                acc_full, acc_np, acc_nc);
  }
  std::printf("    full >= no-patterns in %d/20, full >= no-confounders in %d/20, both in %d/20\n",
              full_beats_np, full_beats_nc, both);
  c.expect(both >= 16, "full model wins both ablations in fewer than 80% of seeds");
  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

// ---------- criterion 8: linear scalability ----------

double time_refine(int rows, int targets, std::uint64_t seed) {
  Rng rng(seed);
  // Shared synthetic world: 4 candidate series + meteo, one target per run.
  const int n = rows + 10;
  DiffTable diffs;
  std::vector<std::vector<double>> series(5, std::vector<double>(n));
  for (int s = 0; s < 5; ++s)
    for (int i = 0; i < n; ++i) series[s][i] = rng.normal();
  for (int i = 1; i < n; ++i)
    series[0][i] += 0.5 * series[1][i - 1];
  for (int s = 0; s < 5; ++s) diffs.add(make_diff_series(s, 0, series[s]));

  MeteoSeries meteo;
  meteo.vectors.resize(n, 5);
  Timestamp t0 = base_time();
  for (int i = 0; i < n; ++i) {
    meteo.timestamps.push_back(t0 + static_cast<Timestamp>(i) * kSecondsPerHour);
    for (int j = 0; j < 5; ++j) meteo.vectors(i, j) = rng.normal();
  }

  PatternIndex patterns = dense_stamp_index(5, n, 7);
  CandidateSet cands;
  cands.target_sensor = 0;
  cands.target_category = 0;
  for (int s = 1; s < 5; ++s) cands.candidates.push_back({s, 0, 0.8, 10.0 * s});

  RefineOptions opts;
  opts.n_clusters = 3;
  opts.n_neighbors = 2;
  opts.lag_hours = 3;
  // Fixed work per row: no early stopping, two outer rounds.
  opts.em.rel_tol = 0.0;
  opts.em.max_iters = 10;
  opts.max_outer = 2;
  opts.outer_rel_tol = 0.0;
  opts.em.seed = seed;

  auto windows = all_hours(5, static_cast<std::size_t>(rows) + 5);
  double best = 1e300;
  for (int rep = 0; rep < 2; ++rep) {
    auto start = Clock::now();
    for (int t = 0; t < targets; ++t)
      refine(diffs, patterns, &meteo, 0, 0, cands, windows, opts);
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    best = std::min(best, ms);
  }
  return best;
}

double linear_fit_r2(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double alpha = (sy - beta * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = alpha + beta * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - sy / n) * (ys[i] - sy / n);
  }
  return 1.0 - ss_res / ss_tot;
}

bool criterion8() {
  Check c;
  std::vector<double> sizes = {1000, 2000, 4000, 8000}, times;
  for (double rows : sizes) {
    times.push_back(time_refine(static_cast<int>(rows), 1, 77));
    std::printf("    T = %5.0f rows: %8.1f ms\n", rows, times.back());
  }
  double r2_rows = linear_fit_r2(sizes, times);
  std::printf("    R^2 of linear fit in T: %.4f\n", r2_rows);
  c.expect(r2_rows >= 0.95, "runtime not linear in row count");

  std::vector<double> target_counts = {10, 20, 40}, target_times;
  for (double t : target_counts) {
    target_times.push_back(time_refine(1500, static_cast<int>(t), 78));
    std::printf("    targets = %2.0f: %8.1f ms\n", t, target_times.back());
  }
  double r2_targets = linear_fit_r2(target_counts, target_times);
  std::printf("    R^2 of linear fit in targets: %.4f\n", r2_targets);
  c.expect(r2_targets >= 0.95, "runtime not linear in target count");
  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

// ---------- criterion 9: CLI determinism ----------

int run_cli(const std::string& args) {
  const char* b = std::getenv("STCAUSAL_BIN");
  if (!b) return -1;
  std::string cmd = std::string(b) + " " + args + " > /dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Compare two directory trees byte for byte; runtime_ms values are the one
// sanctioned exception (they are measurements of the run, not of the data).
bool trees_identical(const fs::path& a, const fs::path& b, Check& c) {
  std::vector<fs::path> rel;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), a));
  std::sort(rel.begin(), rel.end());
  bool same = true;
  for (const auto& r : rel) {
    std::string ca = slurp(a / r), cb = slurp(b / r);
    if (r.filename() == "synth_bench.json") {
      Json ja = Json::parse(ca), jb = Json::parse(cb);
      for (Json* j : {&ja, &jb})
        for (auto& trial : (*j)["trials"])
          for (auto& [name, m] : trial["per_method"].items()) m.erase("runtime_ms");
      ca = ja.dump();
      cb = jb.dump();
    }
    if (ca != cb) {
      c.expect(false, "artifact differs between runs: " + r.string());
      same = false;
    }
  }
  return same;
}

bool criterion9() {
  Check c;
  if (!std::getenv("STCAUSAL_BIN")) {
    std::printf("    STCAUSAL_BIN not set; cannot drive the CLI\n");
    return false;
  }
  fs::path dir = fs::temp_directory_path() / "stcausal_acceptance9";
  fs::remove_all(dir);
  fs::create_directories(dir);

  // Deterministic fixture CSVs.
  {
    std::ofstream f(dir / "sensors.csv");
    f << "sensor_id,city_id,lat,lon\nA,c,39.90,116.40\nB,c,39.95,116.45\n";
  }
  {
    Rng rng(55);
    Timestamp t0 = days_from_civil(2014, 3, 1) * kSecondsPerDay;
    std::ofstream f(dir / "air.csv");
    f << "sensor_id,timestamp,PM25,PM10,NO2,CO,O3,SO2\n";
    char buf[300];
    double av = 0, bv = 0;
    for (int t = 0; t < 24 * 60; ++t) {
      std::string ts = format_iso(t0 + static_cast<Timestamp>(t) * kSecondsPerHour);
      bv = 0.9 * bv + rng.normal() + (rng.uniform() < 0.05 ? 5.0 : 0.0);
      av = 0.8 * av + 0.4 * bv + 0.3 * rng.normal();
      for (auto [sid, v] : {std::pair{"A", av}, std::pair{"B", bv}}) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f\n", sid,
                      ts.c_str(), 60 + 5 * v, 55 + 4 * v, 30 + 2 * v, 10 + v, 80 - 3 * v,
                      20 + v);
        f << buf;
      }
    }
  }
  {
    Rng rng(56);
    Timestamp t0 = days_from_civil(2014, 3, 1) * kSecondsPerDay;
    std::ofstream f(dir / "meteo.csv");
    f << "station_id,lat,lon,timestamp,T,P,H,WS,WD\n";
    char buf[200];
    for (int t = 0; t < 24 * 60; ++t) {
      std::string ts = format_iso(t0 + static_cast<Timestamp>(t) * kSecondsPerHour);
      std::snprintf(buf, sizeof(buf), "st0,39.92,116.42,%s,%.2f,%.2f,%.2f,%.2f,%.2f\n",
                    ts.c_str(), 15 + rng.normal(), 1010 + rng.normal(),
                    50 + 2 * rng.normal(), 4 + rng.normal(), 180 + 5 * rng.normal());
      f << buf;
    }
  }

  auto run_all = [&](const std::string& wd, int threads) {
    std::string common = " --workdir " + wd + " --season spring --test-days 10 -L 2" +
                         " --threads " + std::to_string(threads);
    bool ok = true;
    ok &= run_cli("ingest --sensors " + (dir / "sensors.csv").string() +
                  " --air-quality " + (dir / "air.csv").string() + " --meteorology " +
                  (dir / "meteo.csv").string() +
                  " --grid-lat-min 39.8 --grid-lat-max 40.0 --grid-lon-min 116.3"
                  " --grid-lon-max 116.5 --grid-rows 1 --grid-cols 1" +
                  common) == 0;
    ok &= run_cli("mine" + common) == 0;
    ok &= run_cli("candidates --delta-g 50 --delta-p 0.2" + common) == 0;
    ok &= run_cli("train -K 2 -N 1 --delta-g 50 --delta-p 0.2" + common) == 0;
    ok &= run_cli("evaluate --delta-g 50 --delta-p 0.2" + common) == 0;
    ok &= run_cli("pathway --root A:PM25 --hops 2" + common) == 0;
    ok &= run_cli("pca -K 2" + common) == 0;
    ok &= run_cli("synth-bench --series 6 --samples 1000 --trials 1 --seed 3"
                  " --confounder 1" +
                  common) == 0;
    return ok;
  };

  bool ok1 = run_all((dir / "run1").string(), 2);
  bool ok2 = run_all((dir / "run2").string(), 2);
  bool ok3 = run_all((dir / "run3").string(), 1);  // worker count must not matter
  c.expect(ok1 && ok2 && ok3, "a CLI command failed");
  if (ok1 && ok2) trees_identical(dir / "run1", dir / "run2", c);
  if (ok1 && ok3) trees_identical(dir / "run1", dir / "run3", c);
  std::fputs(c.detail.str().c_str(), stdout);
  return c.ok;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  std::string which = "all";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) which = argv[i + 1];

  std::vector<Criterion> criteria = {
      {1, "worked-example golden mining with the projection regression", criterion1},
      {2, "miner equals the exhaustive oracle on 200 random databases", criterion2},
      {3, "matcher merge scan equals brute force, monotone in L", criterion3},
      {4, "EM soundness: monotone likelihood, regime tags, K=1 collapse", criterion4},
      {5, "causality score calibration and planted-edge detection", criterion5},
      {6, "20-node confounded recovery: pg >= lasso >= pairwise, pg >= 0.6", criterion6},
      {7, "ablations: full model beats -patterns and -confounders", criterion7},
      {8, "training time linear in rows and in targets", criterion8},
      {9, "CLI artifacts byte-identical across reruns and worker counts", criterion9},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    if (which != "all" && which != std::to_string(crit.id)) continue;
    auto start = Clock::now();
    bool ok = false;
    try {
      ok = crit.fn();
    } catch (const std::exception& e) {
      std::printf("    exception: %s\n", e.what());
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("criterion %d: %s (%.1fs) - %s\n", crit.id, ok ? "PASS" : "FAIL", secs,
                crit.title);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
