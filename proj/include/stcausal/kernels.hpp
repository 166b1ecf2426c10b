#pragma once

#include <vector>

#include <Eigen/Dense>

namespace stcausal {

// Hot inner loops, each with an OpenMP-parallel implementation and a plain
// serial reference. The parallel versions accumulate over fixed index blocks
// merged in order, so results do not depend on the worker count; the *_ref
// versions are the straightforward loops kept for testing and benchmarking.

// Weighted normal equations for the intercept-augmented design [1 X]:
//   G = sum_i w_i [1 x_i][1 x_i]^T,  b = sum_i w_i y_i [1 x_i].
void accumulate_normal_eq(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w, Eigen::MatrixXd& g,
                          Eigen::VectorXd& b);
void accumulate_normal_eq_ref(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& w, Eigen::MatrixXd& g,
                              Eigen::VectorXd& b);

// Weighted mean and covariance of the rows of E (two-pass).
void weighted_mean_cov(const Eigen::MatrixXd& e, const Eigen::VectorXd& w,
                       Eigen::VectorXd& mean, Eigen::MatrixXd& cov);
void weighted_mean_cov_ref(const Eigen::MatrixXd& e, const Eigen::VectorXd& w,
                           Eigen::VectorXd& mean, Eigen::MatrixXd& cov);

// Nearest-center assignment; ties go to the lowest center index.
void kmeans_assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers,
                   std::vector<int>& labels, Eigen::VectorXd& dist2);
void kmeans_assign_ref(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers,
                       std::vector<int>& labels, Eigen::VectorXd& dist2);

// Per-cluster pieces of the joint log density
//   ln N(p_t | mu0 + q_t A, sigma2) + ln N(e_t | env_mean, env_cov).
struct ClusterDensity {
  Eigen::VectorXd coef;
  double mu0 = 0.0;
  double sigma2 = 1.0;
  Eigen::VectorXd env_mean;
  Eigen::MatrixXd env_chol;  // lower Cholesky factor of env_cov
  double env_logdet = 0.0;
  bool has_env = false;
};

ClusterDensity make_cluster_density(const Eigen::VectorXd& coef, double mu0,
                                    double sigma2, const Eigen::VectorXd& env_mean,
                                    const Eigen::MatrixXd& env_cov);

// logd(t, k) = joint log density of row t under cluster k.
void mixture_log_densities(const Eigen::VectorXd& p, const Eigen::MatrixXd& q,
                           const Eigen::MatrixXd& e,
                           const std::vector<ClusterDensity>& clusters,
                           Eigen::MatrixXd& logd);
void mixture_log_densities_ref(const Eigen::VectorXd& p, const Eigen::MatrixXd& q,
                               const Eigen::MatrixXd& e,
                               const std::vector<ClusterDensity>& clusters,
                               Eigen::MatrixXd& logd);

}  // namespace stcausal
