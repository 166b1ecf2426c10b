// Times the OpenMP kernels against their serial reference implementations.

#include <chrono>
#include <cstdio>

#include "stcausal/kernels.hpp"
#include "stcausal/parallel.hpp"
#include "stcausal/rng.hpp"

using namespace stcausal;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& fn, int reps) {
  // One warmup, then best of reps.
  fn();
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto start = Clock::now();
    fn();
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (ms < best) best = ms;
  }
  return best;
}

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index n, Eigen::Index d) {
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.normal();
  return m;
}

void report(const char* name, double ref_ms, double par1_ms, double parN_ms,
            int threads) {
  std::printf("%-22s ref %8.2f ms   blocked(1) %8.2f ms   blocked(%d) %8.2f ms   speedup %.2f\n",
              name, ref_ms, par1_ms, threads, parN_ms, 2, ref_ms / parN_ms);
}

}  // namespace

int main() {
  const int threads = max_threads();
  std::printf("worker pool: %d threads (STCAUSAL_THREADS to change)\n\n", threads);

  Rng rng(1);
  const Eigen::Index n = 200000, d = 24, de = 45;
  Eigen::MatrixXd x = random_matrix(rng, n, d);
  Eigen::MatrixXd e = random_matrix(rng, n, de);
  Eigen::VectorXd y = random_matrix(rng, n, 1);
  Eigen::VectorXd w = random_matrix(rng, n, 1).cwiseAbs();
  const int reps = 5;

  {
    Eigen::MatrixXd g;
    Eigen::VectorXd b;
    double ref = time_ms([&] { accumulate_normal_eq_ref(x, y, w, g, b); }, reps);
    set_max_threads(1);
    double par1 = time_ms([&] { accumulate_normal_eq(x, y, w, g, b); }, reps);
    set_max_threads(threads);
    double parn = time_ms([&] { accumulate_normal_eq(x, y, w, g, b); }, reps);
    report("normal equations", ref, par1, parn, threads);
  }
  {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double ref = time_ms([&] { weighted_mean_cov_ref(e, w, mean, cov); }, reps);
    set_max_threads(1);
    double par1 = time_ms([&] { weighted_mean_cov(e, w, mean, cov); }, reps);
    set_max_threads(threads);
    double parn = time_ms([&] { weighted_mean_cov(e, w, mean, cov); }, reps);
    report("weighted moments", ref, par1, parn, threads);
  }
  {
    Eigen::MatrixXd centers = random_matrix(rng, 6, de);
    std::vector<int> labels;
    Eigen::VectorXd dist2;
    double ref = time_ms([&] { kmeans_assign_ref(e, centers, labels, dist2); }, reps);
    set_max_threads(1);
    double par1 = time_ms([&] { kmeans_assign(e, centers, labels, dist2); }, reps);
    set_max_threads(threads);
    double parn = time_ms([&] { kmeans_assign(e, centers, labels, dist2); }, reps);
    report("kmeans assignment", ref, par1, parn, threads);
  }
  {
    std::vector<ClusterDensity> clusters;
    for (int c = 0; c < 4; ++c) {
      Eigen::MatrixXd a = random_matrix(rng, de, de);
      clusters.push_back(make_cluster_density(
          random_matrix(rng, d, 1), 0.0, 1.0, random_matrix(rng, de, 1),
          a * a.transpose() + Eigen::MatrixXd::Identity(de, de)));
    }
    Eigen::MatrixXd logd;
    Eigen::VectorXd p = y;
    double ref = time_ms([&] { mixture_log_densities_ref(p, x, e, clusters, logd); }, reps);
    set_max_threads(1);
    double par1 = time_ms([&] { mixture_log_densities(p, x, e, clusters, logd); }, reps);
    set_max_threads(threads);
    double parn = time_ms([&] { mixture_log_densities(p, x, e, clusters, logd); }, reps);
    report("mixture densities", ref, par1, parn, threads);
  }
  return 0;
}
