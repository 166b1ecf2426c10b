#include "stcausal/kernels.hpp"

#include <cmath>
#include <cstdlib>

#include <Eigen/Cholesky>

#include "stcausal/error.hpp"
#include "stcausal/parallel.hpp"

namespace stcausal {

namespace {

int g_max_threads = 0;  // 0 = not resolved yet

int resolve_threads() {
  if (const char* env = std::getenv("STCAUSAL_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int max_threads() {
  if (g_max_threads == 0) g_max_threads = resolve_threads();
  return g_max_threads;
}

void set_max_threads(int n) { g_max_threads = n >= 1 ? n : 1; }

void accumulate_normal_eq_ref(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& w, Eigen::MatrixXd& g,
                              Eigen::VectorXd& b) {
  const Eigen::Index n = x.rows(), d = x.cols();
  g = Eigen::MatrixXd::Zero(d + 1, d + 1);
  b = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd row(d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    row(0) = 1.0;
    row.tail(d) = x.row(i);
    g.noalias() += w(i) * row * row.transpose();
    b.noalias() += w(i) * y(i) * row;
  }
}

void accumulate_normal_eq(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w, Eigen::MatrixXd& g,
                          Eigen::VectorXd& b) {
  const Eigen::Index n = x.rows(), d = x.cols();
  struct Acc {
    Eigen::MatrixXd g;
    Eigen::VectorXd b;
  };
  Acc init{Eigen::MatrixXd::Zero(d + 1, d + 1), Eigen::VectorXd::Zero(d + 1)};
  Acc total = blocked_reduce<Acc>(
      n, init,
      [&](std::int64_t lo, std::int64_t hi, Acc& acc) {
        Eigen::VectorXd row(d + 1);
        for (std::int64_t i = lo; i < hi; ++i) {
          row(0) = 1.0;
          row.tail(d) = x.row(i);
          acc.g.noalias() += w(i) * row * row.transpose();
          acc.b.noalias() += w(i) * y(i) * row;
        }
      },
      [](Acc& acc, const Acc& part) {
        acc.g += part.g;
        acc.b += part.b;
      });
  g = std::move(total.g);
  b = std::move(total.b);
}

void weighted_mean_cov_ref(const Eigen::MatrixXd& e, const Eigen::VectorXd& w,
                           Eigen::VectorXd& mean, Eigen::MatrixXd& cov) {
  const Eigen::Index n = e.rows(), d = e.cols();
  double wsum = 0.0;
  mean = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    wsum += w(i);
    mean.noalias() += w(i) * e.row(i).transpose();
  }
  if (wsum <= 0.0) throw Error(Errc::DegenerateCluster, "zero total weight");
  mean /= wsum;
  cov = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd c = e.row(i).transpose() - mean;
    cov.noalias() += w(i) * c * c.transpose();
  }
  cov /= wsum;
}

void weighted_mean_cov(const Eigen::MatrixXd& e, const Eigen::VectorXd& w,
                       Eigen::VectorXd& mean, Eigen::MatrixXd& cov) {
  const Eigen::Index n = e.rows(), d = e.cols();
  struct MeanAcc {
    double wsum = 0.0;
    Eigen::VectorXd sum;
  };
  MeanAcc m0{0.0, Eigen::VectorXd::Zero(d)};
  MeanAcc m = blocked_reduce<MeanAcc>(
      n, m0,
      [&](std::int64_t lo, std::int64_t hi, MeanAcc& acc) {
        for (std::int64_t i = lo; i < hi; ++i) {
          acc.wsum += w(i);
          acc.sum.noalias() += w(i) * e.row(i).transpose();
        }
      },
      [](MeanAcc& acc, const MeanAcc& part) {
        acc.wsum += part.wsum;
        acc.sum += part.sum;
      });
  if (m.wsum <= 0.0) throw Error(Errc::DegenerateCluster, "zero total weight");
  mean = m.sum / m.wsum;

  Eigen::MatrixXd c0 = Eigen::MatrixXd::Zero(d, d);
  cov = blocked_reduce<Eigen::MatrixXd>(
      n, c0,
      [&](std::int64_t lo, std::int64_t hi, Eigen::MatrixXd& acc) {
        Eigen::VectorXd c(d);
        for (std::int64_t i = lo; i < hi; ++i) {
          c = e.row(i).transpose() - mean;
          acc.noalias() += w(i) * c * c.transpose();
        }
      },
      [](Eigen::MatrixXd& acc, const Eigen::MatrixXd& part) { acc += part; });
  cov /= m.wsum;
}

void kmeans_assign_ref(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers,
                       std::vector<int>& labels, Eigen::VectorXd& dist2) {
  const Eigen::Index n = x.rows(), k = centers.rows();
  labels.assign(n, 0);
  dist2.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double bd = (x.row(i) - centers.row(0)).squaredNorm();
    for (Eigen::Index c = 1; c < k; ++c) {
      double d = (x.row(i) - centers.row(c)).squaredNorm();
      if (d < bd) {
        bd = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    dist2(i) = bd;
  }
}

void kmeans_assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers,
                   std::vector<int>& labels, Eigen::VectorXd& dist2) {
  const Eigen::Index n = x.rows(), k = centers.rows();
  labels.assign(n, 0);
  dist2.resize(n);
  parallel_for(n, [&](std::int64_t i) {
    int best = 0;
    double bd = (x.row(i) - centers.row(0)).squaredNorm();
    for (Eigen::Index c = 1; c < k; ++c) {
      double d = (x.row(i) - centers.row(c)).squaredNorm();
      if (d < bd) {
        bd = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    dist2(i) = bd;
  });
}

ClusterDensity make_cluster_density(const Eigen::VectorXd& coef, double mu0,
                                    double sigma2, const Eigen::VectorXd& env_mean,
                                    const Eigen::MatrixXd& env_cov) {
  ClusterDensity cd;
  cd.coef = coef;
  cd.mu0 = mu0;
  cd.sigma2 = sigma2;
  cd.has_env = env_cov.rows() > 0;
  if (cd.has_env) {
    Eigen::LLT<Eigen::MatrixXd> llt(env_cov);
    if (llt.info() != Eigen::Success)
      throw Error(Errc::SingularSystem, "environment covariance not positive definite");
    cd.env_mean = env_mean;
    cd.env_chol = llt.matrixL();
    cd.env_logdet = 2.0 * cd.env_chol.diagonal().array().log().sum();
  }
  return cd;
}

namespace {

const double kLog2Pi = std::log(2.0 * M_PI);

inline double row_log_density(const Eigen::VectorXd& p, const Eigen::MatrixXd& q,
                              const Eigen::MatrixXd& e, const ClusterDensity& cd,
                              Eigen::Index i) {
  double r = p(i) - cd.mu0 - q.row(i).dot(cd.coef);
  double ld = -0.5 * (kLog2Pi + std::log(cd.sigma2) + r * r / cd.sigma2);
  if (cd.has_env) {
    Eigen::VectorXd z = e.row(i).transpose() - cd.env_mean;
    cd.env_chol.triangularView<Eigen::Lower>().solveInPlace(z);
    ld += -0.5 * (e.cols() * kLog2Pi + cd.env_logdet + z.squaredNorm());
  }
  return ld;
}

}  // namespace

void mixture_log_densities_ref(const Eigen::VectorXd& p, const Eigen::MatrixXd& q,
                               const Eigen::MatrixXd& e,
                               const std::vector<ClusterDensity>& clusters,
                               Eigen::MatrixXd& logd) {
  const Eigen::Index n = p.size();
  const Eigen::Index k = static_cast<Eigen::Index>(clusters.size());
  logd.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index c = 0; c < k; ++c)
      logd(i, c) = row_log_density(p, q, e, clusters[c], i);
}

void mixture_log_densities(const Eigen::VectorXd& p, const Eigen::MatrixXd& q,
                           const Eigen::MatrixXd& e,
                           const std::vector<ClusterDensity>& clusters,
                           Eigen::MatrixXd& logd) {
  const Eigen::Index n = p.size();
  const Eigen::Index k = static_cast<Eigen::Index>(clusters.size());
  logd.resize(n, k);
  parallel_for(n, [&](std::int64_t i) {
    for (Eigen::Index c = 0; c < k; ++c)
      logd(i, c) = row_log_density(p, q, e, clusters[c], i);
  });
}

}  // namespace stcausal
