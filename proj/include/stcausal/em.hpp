#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "stcausal/design.hpp"
#include "stcausal/gc.hpp"
#include "stcausal/match.hpp"

namespace stcausal {

struct GbnCluster {
  Eigen::VectorXd coef;  // A_k in the cluster's ParentSpec layout
  double mu0 = 0.0;
  double sigma2 = 1e-12;
  Eigen::VectorXd env_mean;  // B_k
  Eigen::MatrixXd env_cov;
  ParentSpec parents;
};

struct CausalModel {
  int n_clusters = 1;
  int n_neighbors = 0;
  int lag_hours = 0;
  std::vector<GbnCluster> clusters;
  Eigen::MatrixXd pi;               // T x K
  Eigen::MatrixXd gamma;            // T x K, rows sum to 1
  std::vector<int> tag;             // argmax_k pi
  Eigen::VectorXd cluster_weight;   // fraction of tagged timestamps per cluster
  std::vector<double> ll_trace;     // mixture log likelihood per EM iteration
  int underflow_rows = 0;           // rows rescued by the uniform fallback
  int outer_iters = 0;              // refine loop count (0 when em_learn only)
};

struct EmOptions {
  int max_iters = 10;
  double rel_tol = 1e-6;
  bool paper_exact_pi = false;  // keep pi_tk = gamma_tk / T_k without row normalization
  bool hard_assign = false;     // hard-partition regression refits
  std::uint64_t seed = 0;
};

// Design rows whose regressor columns span the local block plus every
// candidate (sensor, category) with data, so per-cluster structures are
// column subsets over one shared row set.
struct MixtureDesign {
  DesignRows rows;
  ParentSpec universe;

  int slot_of(int sensor, int category) const;
  // Column indices of `spec` inside `rows.q` (local block first).
  std::vector<int> cols_for(const ParentSpec& spec) const;
  Eigen::MatrixXd submatrix(const ParentSpec& spec) const;
};

MixtureDesign build_mixture_design(const DiffTable& diffs, int target_sensor,
                                   int target_category, const CandidateSet& candidates,
                                   int lag_hours, const MeteoSeries* meteo,
                                   std::span<const Timestamp> windows);

// E-step: gamma_tk from pi and the cluster densities; returns the mixture log
// likelihood. Rows where every cluster underflows fall back to a uniform row.
// row_ll, when given, receives each row's log likelihood.
double e_step(const MixtureDesign& design, const std::vector<GbnCluster>& clusters,
              const Eigen::MatrixXd& pi, Eigen::MatrixXd& gamma, int* underflow_rows,
              Eigen::VectorXd* row_ll_out = nullptr);

// M-step: refit A_k/mu0/sigma2 (gamma-weighted or hard), B_k by weighted
// moments, then pi and the assignment tags. An emptied cluster is re-seeded
// from the lowest-likelihood rows once; a second failure throws.
void m_step(const MixtureDesign& design, Eigen::MatrixXd& gamma,
            std::vector<GbnCluster>& clusters, Eigen::MatrixXd& pi,
            std::vector<int>& tag, const EmOptions& opts,
            const Eigen::VectorXd& row_ll, bool* reseeded);

CausalModel em_learn(const MixtureDesign& design,
                     const std::vector<ParentSpec>& cluster_parents, int n_clusters,
                     const EmOptions& opts);

// Per-cluster re-selection of the top-N neighbors on the rows tagged to the
// cluster; clusters with fewer than 2*dim tagged rows keep their structure.
// Returns true when any cluster's parents changed.
bool structure_reconstruction(const CausalModel& model, const MixtureDesign& design,
                              const DiffTable& diffs, const PatternIndex& patterns,
                              const CandidateSet& candidates, int n_neighbors,
                              double min_score, long match_override,
                              std::vector<ParentSpec>& cluster_parents);

struct RefineOptions {
  int n_clusters = 1;
  int n_neighbors = 0;
  int lag_hours = 3;
  int max_outer = 10;
  double outer_rel_tol = 1e-4;
  double min_gc_score = -std::numeric_limits<double>::infinity();
  long match_override = -1;  // no-patterns mode passes the window count
  EmOptions em;
};

// Alternate EM learning and structure reconstruction until the outer log
// likelihood settles.
CausalModel refine(const DiffTable& diffs, const PatternIndex& patterns,
                   const MeteoSeries* meteo, int target_sensor, int target_category,
                   const CandidateSet& candidates, std::span<const Timestamp> windows,
                   const RefineOptions& opts);

// Cluster membership of a test row from the environment alone, then the
// mixture of per-cluster regression means, in diff space.
double predict_diff(const CausalModel& model, const MixtureDesign& design,
                    Eigen::Index row);
double predict_diff(const CausalModel& model,
                    const std::vector<Eigen::VectorXd>& q_per_cluster,
                    const Eigen::VectorXd& e);

// accuracy = 1 - mean(|est - truth| / max(truth, 1.0))
double accuracy_eval(std::span<const double> estimates, std::span<const double> truths);

}  // namespace stcausal
