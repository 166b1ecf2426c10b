#pragma once

#include "stcausal/synth.hpp"

namespace stcausal {

// Pairwise Granger test: edge i -> j when the chi2-form statistic
// T * ln(RSS_restricted / RSS_unrestricted) over lags 1..max_lag rejects
// at level alpha.
Digraph pairwise_granger_graph(const Eigen::MatrixXd& series, int max_lag,
                               double alpha = 0.05);

// L1-penalized lagged regression per target by coordinate descent; edge
// i -> j when any of i's lag coefficients is nonzero. lambda < 0 selects
// lambda by 5-fold cross validation over a log grid.
Digraph lasso_granger_graph(const Eigen::MatrixXd& series, int max_lag, double lambda);

// Coordinate-descent lasso on standardized columns (exposed for tests);
// returns coefficients on the original scale, intercept excluded by centering.
Eigen::VectorXd lasso_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          double lambda, double tol = 1e-8, int max_sweeps = 10000);

double lasso_cv_lambda(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       int folds = 5, int grid = 20);

}  // namespace stcausal
