#include "stcausal/pca.hpp"

#include <cmath>

#include "stcausal/error.hpp"
#include "stcausal/rng.hpp"

namespace stcausal {

PcaResult pca_project(const Eigen::MatrixXd& rows, int dims) {
  const Eigen::Index n = rows.rows(), d = rows.cols();
  if (n < dims) throw Error(Errc::InsufficientData, "need at least `dims` rows");
  dims = std::min<int>(dims, static_cast<int>(d));

  Eigen::MatrixXd centered = rows.rowwise() - rows.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);

  PcaResult out;
  out.components.resize(dims, d);
  out.explained_variance.resize(dims);

  Rng rng(0x9cad5ull);
  for (int c = 0; c < dims; ++c) {
    Eigen::VectorXd v(d);
    for (Eigen::Index j = 0; j < d; ++j) v(j) = rng.normal();
    v.normalize();
    double lambda = 0.0;
    for (int iter = 0; iter < 5000; ++iter) {
      Eigen::VectorXd w = cov * v;
      double norm = w.norm();
      if (norm <= 0.0) break;  // rank-deficient remainder
      w /= norm;
      double delta = (w - v).norm();
      v = w;
      lambda = norm;
      if (delta < 1e-8) break;
    }
    out.components.row(c) = v.transpose();
    out.explained_variance(c) = lambda;
    cov -= lambda * v * v.transpose();  // deflate
  }

  out.projected = centered * out.components.transpose();
  return out;
}

}  // namespace stcausal
