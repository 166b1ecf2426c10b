#include "stcausal/em.hpp"

#include <algorithm>
#include <cmath>

#include "stcausal/error.hpp"
#include "stcausal/kernels.hpp"
#include "stcausal/kmeans.hpp"
#include "stcausal/parallel.hpp"
#include "stcausal/wls.hpp"

namespace stcausal {

namespace {

constexpr double kTinyWeight = 1e-9;

Eigen::MatrixXd regularized_cov(const Eigen::MatrixXd& cov) {
  const Eigen::Index d = cov.rows();
  if (d == 0) return cov;
  double scale = cov.trace() / static_cast<double>(d);
  if (!(scale > 0.0)) scale = 1.0;
  Eigen::MatrixXd out = cov;
  out.diagonal().array() += 1e-6 * scale;
  return out;
}

// Expand a compact coefficient vector to the design's full column universe.
Eigen::VectorXd expand_coef(const MixtureDesign& design, const ParentSpec& spec,
                            const Eigen::VectorXd& compact) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(design.rows.q.cols());
  std::vector<int> cols = design.cols_for(spec);
  for (std::size_t j = 0; j < cols.size(); ++j) full(cols[j]) = compact(j);
  return full;
}

std::vector<ClusterDensity> make_densities(const MixtureDesign& design,
                                           const std::vector<GbnCluster>& clusters) {
  std::vector<ClusterDensity> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters)
    out.push_back(make_cluster_density(expand_coef(design, c.parents, c.coef), c.mu0,
                                       c.sigma2, c.env_mean, c.env_cov));
  return out;
}

}  // namespace

int MixtureDesign::slot_of(int sensor, int category) const {
  for (std::size_t i = 0; i < universe.neighbors.size(); ++i)
    if (universe.neighbors[i].sensor == sensor && universe.neighbors[i].category == category)
      return static_cast<int>(i);
  return -1;
}

std::vector<int> MixtureDesign::cols_for(const ParentSpec& spec) const {
  std::vector<int> cols;
  cols.reserve(spec.dim());
  for (int ci = 0; ci < static_cast<int>(spec.local_categories.size()); ++ci) {
    int ui = -1;
    for (int j = 0; j < static_cast<int>(universe.local_categories.size()); ++j)
      if (universe.local_categories[j] == spec.local_categories[ci]) ui = j;
    if (ui < 0) throw Error(Errc::MissingLags, "local category outside the design universe");
    for (int l = 1; l <= spec.lag_hours; ++l) cols.push_back(universe.local_col(ui, l));
  }
  for (std::size_t nb = 0; nb < spec.neighbors.size(); ++nb) {
    int slot = slot_of(spec.neighbors[nb].sensor, spec.neighbors[nb].category);
    if (slot < 0) throw Error(Errc::MissingLags, "neighbor outside the design universe");
    for (int l = 1; l <= spec.lag_hours; ++l)
      cols.push_back(universe.st_col(slot, l));
  }
  return cols;
}

Eigen::MatrixXd MixtureDesign::submatrix(const ParentSpec& spec) const {
  std::vector<int> cols = cols_for(spec);
  Eigen::MatrixXd sub(rows.q.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) sub.col(j) = rows.q.col(cols[j]);
  return sub;
}

MixtureDesign build_mixture_design(const DiffTable& diffs, int target_sensor,
                                   int target_category, const CandidateSet& candidates,
                                   int lag_hours, const MeteoSeries* meteo,
                                   std::span<const Timestamp> windows) {
  MixtureDesign design;
  design.universe.target_sensor = target_sensor;
  design.universe.target_category = target_category;
  design.universe.local_categories = local_categories_for(diffs, target_sensor);
  design.universe.lag_hours = lag_hours;
  for (const Candidate& c : candidates.candidates)
    for (int cat = 0; cat < kNumCategories; ++cat)
      if (diffs.index_of(c.sensor, cat) >= 0)
        design.universe.neighbors.push_back({c.sensor, cat});
  design.rows = build_design_rows(diffs, design.universe, meteo, windows);
  return design;
}

double e_step(const MixtureDesign& design, const std::vector<GbnCluster>& clusters,
              const Eigen::MatrixXd& pi, Eigen::MatrixXd& gamma, int* underflow_rows,
              Eigen::VectorXd* row_ll_out) {
  const Eigen::Index n = design.rows.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(clusters.size());

  Eigen::MatrixXd logd;
  mixture_log_densities(design.rows.p, design.rows.q, design.rows.e,
                        make_densities(design, clusters), logd);

  gamma.resize(n, k);
  Eigen::VectorXd row_ll(n);
  int underflows = 0;
  const double neg_inf = -std::numeric_limits<double>::infinity();

  parallel_for(n, [&](std::int64_t i) {
    for (Eigen::Index c = 0; c < k; ++c) {
      double w = pi(i, c);
      logd(i, c) = w > 0.0 ? logd(i, c) + std::log(w) : neg_inf;
    }
    double m = logd.row(i).maxCoeff();
    if (!std::isfinite(m)) {
      gamma.row(i).setConstant(1.0 / static_cast<double>(k));
      row_ll(i) = neg_inf;
      return;
    }
    double sum = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) sum += std::exp(logd(i, c) - m);
    double lse = m + std::log(sum);
    for (Eigen::Index c = 0; c < k; ++c) gamma(i, c) = std::exp(logd(i, c) - lse);
    row_ll(i) = lse;
  });

  double ll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(row_ll(i))) {
      ll += row_ll(i);
    } else {
      ++underflows;
    }
  }
  if (underflows == static_cast<int>(n))
    throw Error(Errc::NumericalUnderflow, "all rows underflowed in the E-step");
  if (underflow_rows) *underflow_rows += underflows;
  if (row_ll_out) *row_ll_out = row_ll;
  return ll;
}

namespace {

void fit_clusters(const MixtureDesign& design, const Eigen::MatrixXd& weights,
                  std::vector<GbnCluster>& clusters) {
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    GbnCluster& c = clusters[k];
    Eigen::VectorXd w = weights.col(static_cast<Eigen::Index>(k));
    double tk = w.sum();
    if (!(tk > kTinyWeight)) throw Error(Errc::DegenerateCluster, "cluster lost all mass");

    Eigen::MatrixXd sub = design.submatrix(c.parents);
    WlsFit fit = fit_wls(sub, design.rows.p, w);
    c.coef = fit.coef;
    c.mu0 = fit.intercept;
    c.sigma2 = fit.sigma2;

    if (design.rows.e.cols() > 0) {
      Eigen::VectorXd mean;
      Eigen::MatrixXd cov;
      weighted_mean_cov(design.rows.e, w, mean, cov);
      c.env_mean = mean;
      c.env_cov = regularized_cov(cov);
    } else {
      c.env_mean.resize(0);
      c.env_cov.resize(0, 0);
    }
  }
}

}  // namespace

void m_step(const MixtureDesign& design, Eigen::MatrixXd& gamma,
            std::vector<GbnCluster>& clusters, Eigen::MatrixXd& pi,
            std::vector<int>& tag, const EmOptions& opts, const Eigen::VectorXd& row_ll,
            bool* reseeded) {
  const Eigen::Index n = gamma.rows();
  const Eigen::Index k = gamma.cols();

  // Re-seed a cluster that has lost its mass from the worst-explained rows.
  for (Eigen::Index c = 0; c < k; ++c) {
    if (gamma.col(c).sum() > kTinyWeight) continue;
    if (reseeded && *reseeded)
      throw Error(Errc::DegenerateCluster,
                  "cluster " + std::to_string(c) + " empty after re-seed");
    if (reseeded) *reseeded = true;
    int want = std::max<int>(2, clusters[static_cast<std::size_t>(c)].parents.dim() + 2);
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return row_ll(a) < row_ll(b); });
    for (int i = 0; i < want && i < static_cast<int>(n); ++i) {
      gamma.row(order[i]).setZero();
      gamma(order[i], c) = 1.0;
    }
  }

  Eigen::MatrixXd weights = gamma;
  if (opts.hard_assign) {
    weights.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best;
      gamma.row(i).maxCoeff(&best);
      weights(i, best) = 1.0;
    }
  }
  fit_clusters(design, weights, clusters);

  // pi_tk = gamma_tk / T_k; the default then renormalizes each row so pi
  // stays a per-timestamp prior.
  Eigen::VectorXd tk = gamma.colwise().sum();
  pi.resize(n, k);
  for (Eigen::Index c = 0; c < k; ++c) pi.col(c) = gamma.col(c) / tk(c);
  if (!opts.paper_exact_pi) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = pi.row(i).sum();
      if (s > 0.0)
        pi.row(i) /= s;
      else
        pi.row(i).setConstant(1.0 / static_cast<double>(k));
    }
  }

  tag.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best;
    pi.row(i).maxCoeff(&best);
    tag[i] = static_cast<int>(best);
  }
}

CausalModel em_learn(const MixtureDesign& design,
                     const std::vector<ParentSpec>& cluster_parents, int n_clusters,
                     const EmOptions& opts) {
  const Eigen::Index n = design.rows.rows();
  const int k = n_clusters;
  if (k < 1) throw Error(Errc::BadConfig, "K must be >= 1");

  int max_dim = 0;
  for (const auto& p : cluster_parents) max_dim = std::max(max_dim, p.dim());
  Eigen::Index min_rows = std::max<Eigen::Index>(
      static_cast<Eigen::Index>(k) * (max_dim + 2), 2 * static_cast<Eigen::Index>(k));
  if (n < min_rows)
    throw Error(Errc::NoUsableRows, "need >= " + std::to_string(min_rows) + " rows, have " +
                                        std::to_string(n));

  CausalModel model;
  model.n_clusters = k;
  model.lag_hours = design.universe.lag_hours;
  model.clusters.resize(k);
  for (int c = 0; c < k; ++c)
    model.clusters[c].parents =
        cluster_parents.size() == 1 ? cluster_parents[0]
                                    : cluster_parents[static_cast<std::size_t>(c)];
  model.n_neighbors = static_cast<int>(model.clusters[0].parents.neighbors.size());

  // Hard k-means labels on the environment seed gamma.
  std::vector<int> labels = kmeans_init(design.rows.e, k, opts.seed);
  model.gamma = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) model.gamma(i, labels[i]) = 1.0;
  model.pi = model.gamma;

  Eigen::VectorXd row_ll = Eigen::VectorXd::Zero(n);
  bool reseeded = false;
  double prev_ll = 0.0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    m_step(design, model.gamma, model.clusters, model.pi, model.tag, opts, row_ll,
           &reseeded);
    double ll = e_step(design, model.clusters, model.pi, model.gamma,
                       &model.underflow_rows, &row_ll);
    model.ll_trace.push_back(ll);
    if (iter > 0 && std::abs(ll - prev_ll) < opts.rel_tol * std::abs(ll)) break;
    prev_ll = ll;
  }

  model.cluster_weight = Eigen::VectorXd::Zero(k);
  for (int t : model.tag) model.cluster_weight(t) += 1.0;
  model.cluster_weight /= static_cast<double>(model.tag.size());
  return model;
}

bool structure_reconstruction(const CausalModel& model, const MixtureDesign& design,
                              const DiffTable& diffs, const PatternIndex& patterns,
                              const CandidateSet& candidates, int n_neighbors,
                              double min_score, long match_override,
                              std::vector<ParentSpec>& cluster_parents) {
  bool changed = false;
  for (int k = 0; k < model.n_clusters; ++k) {
    std::vector<Timestamp> tagged;
    for (std::size_t i = 0; i < model.tag.size(); ++i)
      if (model.tag[i] == k) tagged.push_back(design.rows.t[i]);

    const ParentSpec& current = cluster_parents[static_cast<std::size_t>(k)];
    if (static_cast<int>(tagged.size()) < 2 * current.dim())
      continue;  // too few tagged rows: keep the previous structure

    ParentSpec next = init_structure(design.universe.target_sensor,
                                     design.universe.target_category, candidates, diffs,
                                     patterns, n_neighbors, design.universe.lag_hours,
                                     tagged, min_score, match_override);
    if (!(next == current)) {
      cluster_parents[static_cast<std::size_t>(k)] = next;
      changed = true;
    }
  }
  return changed;
}

CausalModel refine(const DiffTable& diffs, const PatternIndex& patterns,
                   const MeteoSeries* meteo, int target_sensor, int target_category,
                   const CandidateSet& candidates, std::span<const Timestamp> windows,
                   const RefineOptions& opts) {
  ParentSpec base = init_structure(target_sensor, target_category, candidates, diffs,
                                   patterns, opts.n_neighbors, opts.lag_hours, windows,
                                   opts.min_gc_score, opts.match_override);
  MixtureDesign design = build_mixture_design(diffs, target_sensor, target_category,
                                              candidates, opts.lag_hours, meteo, windows);

  std::vector<ParentSpec> cluster_parents(static_cast<std::size_t>(opts.n_clusters), base);
  CausalModel model;
  double prev_ll = 0.0;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    model = em_learn(design, cluster_parents, opts.n_clusters, opts.em);
    model.outer_iters = outer + 1;
    double ll = model.ll_trace.back();
    if (outer > 0 && std::abs(ll - prev_ll) < opts.outer_rel_tol * std::abs(ll)) break;
    prev_ll = ll;
    if (opts.n_neighbors > 0)
      structure_reconstruction(model, design, diffs, patterns, candidates,
                               opts.n_neighbors, opts.min_gc_score, opts.match_override,
                               cluster_parents);
  }
  return model;
}

double predict_diff(const CausalModel& model,
                    const std::vector<Eigen::VectorXd>& q_per_cluster,
                    const Eigen::VectorXd& e) {
  const int k = model.n_clusters;
  Eigen::VectorXd pr(k);
  bool any = false;
  for (int c = 0; c < k; ++c) {
    double w = model.cluster_weight(c);
    if (e.size() > 0 && model.clusters[c].env_cov.rows() > 0) {
      ClusterDensity cd = make_cluster_density(Eigen::VectorXd::Zero(0), 0.0, 1.0,
                                               model.clusters[c].env_mean,
                                               model.clusters[c].env_cov);
      Eigen::VectorXd z = e - cd.env_mean;
      cd.env_chol.triangularView<Eigen::Lower>().solveInPlace(z);
      double logn = -0.5 * (e.size() * std::log(2.0 * M_PI) + cd.env_logdet +
                            z.squaredNorm());
      w *= std::exp(logn);
    }
    pr(c) = w;
    if (w > 0.0) any = true;
  }
  if (!any)
    pr = model.cluster_weight;  // environment density underflow: prior only
  pr /= pr.sum();

  double est = 0.0;
  for (int c = 0; c < k; ++c)
    est += pr(c) * (model.clusters[c].mu0 + q_per_cluster[c].dot(model.clusters[c].coef));
  return est;
}

double predict_diff(const CausalModel& model, const MixtureDesign& design,
                    Eigen::Index row) {
  std::vector<Eigen::VectorXd> q(model.n_clusters);
  for (int c = 0; c < model.n_clusters; ++c) {
    std::vector<int> cols = design.cols_for(model.clusters[c].parents);
    Eigen::VectorXd sub(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) sub(j) = design.rows.q(row, cols[j]);
    q[c] = sub;
  }
  Eigen::VectorXd e = design.rows.e.cols() > 0
                          ? Eigen::VectorXd(design.rows.e.row(row).transpose())
                          : Eigen::VectorXd();
  return predict_diff(model, q, e);
}

double accuracy_eval(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size() || estimates.empty())
    throw Error(Errc::BadConfig, "estimate/truth size mismatch");
  constexpr double kFloor = 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i)
    sum += std::abs(estimates[i] - truths[i]) / std::max(truths[i], kFloor);
  return 1.0 - sum / static_cast<double>(estimates.size());
}

}  // namespace stcausal
