#pragma once

#include <Eigen/Dense>

namespace stcausal {

inline constexpr double kRidge = 1e-6;
inline constexpr double kVarianceFloor = 1e-12;

struct WlsFit {
  Eigen::VectorXd coef;
  double intercept = 0.0;
  double sigma2 = kVarianceFloor;  // weighted mean squared residual, floored
};

// Weighted least squares of y on [1 x] with ridge on the normal system.
// Throws Errc::SingularSystem only when the regularized solve still fails.
WlsFit fit_wls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
               const Eigen::VectorXd& w, double ridge = kRidge);

// Residual variance of y given the stated parent columns of x; an empty
// subset gives the marginal (intercept-only) variance.
double conditional_variance(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w, const std::vector<int>& cols);

}  // namespace stcausal
