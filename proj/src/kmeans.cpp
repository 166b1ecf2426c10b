#include "stcausal/kmeans.hpp"

#include "stcausal/error.hpp"
#include "stcausal/kernels.hpp"
#include "stcausal/rng.hpp"

namespace stcausal {

std::vector<int> kmeans_init(const Eigen::MatrixXd& rows, int k, std::uint64_t seed) {
  const Eigen::Index n = rows.rows();
  if (k < 1) throw Error(Errc::BadConfig, "k must be >= 1");
  if (n < k) throw Error(Errc::InsufficientData, "fewer rows than clusters");
  if (k == 1 || rows.cols() == 0) return std::vector<int>(n, 0);

  Rng rng(seed);
  Eigen::MatrixXd centers(k, rows.cols());

  // k-means++ seeding.
  centers.row(0) = rows.row(static_cast<Eigen::Index>(rng.below(n)));
  Eigen::VectorXd d2 = (rows.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double run = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        run += d2(i);
        if (run >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(n));
    }
    centers.row(c) = rows.row(pick);
    d2 = d2.cwiseMin((rows.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> labels(n, -1), prev(n, -2);
  Eigen::VectorXd dist2(n);
  for (int iter = 0; iter < 100; ++iter) {
    kmeans_assign(rows, centers, labels, dist2);
    if (labels == prev) break;
    prev = labels;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, rows.cols());
    std::vector<std::int64_t> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[i]) += rows.row(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
      } else {
        // Re-seed an emptied center at the farthest point.
        Eigen::Index far;
        dist2.maxCoeff(&far);
        centers.row(c) = rows.row(far);
        dist2(far) = 0.0;
      }
    }
  }
  return labels;
}

}  // namespace stcausal
