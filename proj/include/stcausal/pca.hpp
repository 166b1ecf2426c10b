#pragma once

#include <Eigen/Dense>

namespace stcausal {

struct PcaResult {
  Eigen::MatrixXd projected;   // rows x dims
  Eigen::MatrixXd components;  // dims x original-dim, orthonormal rows
  Eigen::VectorXd explained_variance;
};

// Projection onto the top principal components of the centered data, by
// power iteration with deflation (tolerance 1e-8).
PcaResult pca_project(const Eigen::MatrixXd& rows, int dims = 2);

}  // namespace stcausal
