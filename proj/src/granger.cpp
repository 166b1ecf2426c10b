#include "stcausal/granger.hpp"

#include <cmath>

#include "stcausal/error.hpp"
#include "stcausal/parallel.hpp"
#include "stcausal/stats.hpp"

namespace stcausal {

namespace {

// Lagged design for target j over rows t = max_lag..T-1: columns are lags
// 1..max_lag of each series in `cols` order.
Eigen::MatrixXd lag_design(const Eigen::MatrixXd& series, const std::vector<int>& cols,
                           int max_lag) {
  const Eigen::Index t_total = series.rows();
  const Eigen::Index n = t_total - max_lag;
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(cols.size()) * max_lag);
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (int l = 1; l <= max_lag; ++l)
      x.col(c * max_lag + (l - 1)) = series.col(cols[c]).segment(max_lag - l, n);
  return x;
}

double ols_rss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd xa(x.rows(), x.cols() + 1);
  xa.col(0).setOnes();
  xa.rightCols(x.cols()) = x;
  Eigen::MatrixXd g = xa.transpose() * xa;
  g.diagonal().array() += 1e-10;
  Eigen::VectorXd beta = g.ldlt().solve(xa.transpose() * y);
  return (y - xa * beta).squaredNorm();
}

}  // namespace

Digraph pairwise_granger_graph(const Eigen::MatrixXd& series, int max_lag, double alpha) {
  const int n_series = static_cast<int>(series.cols());
  Digraph out;
  out.n = n_series;
  if (n_series < 2 || series.rows() <= 2 * max_lag + 2) return out;

  const double crit = chi2_quantile(max_lag, alpha);
  const Eigen::Index n = series.rows() - max_lag;

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n_series; ++i)
    for (int j = 0; j < n_series; ++j)
      if (i != j) pairs.emplace_back(i, j);

  std::vector<char> reject(pairs.size(), 0);
  parallel_for(static_cast<std::int64_t>(pairs.size()), [&](std::int64_t idx) {
    auto [i, j] = pairs[static_cast<std::size_t>(idx)];
    Eigen::VectorXd y = series.col(j).tail(n);
    Eigen::MatrixXd xr = lag_design(series, {j}, max_lag);
    Eigen::MatrixXd xu = lag_design(series, {j, i}, max_lag);
    double rss_r = ols_rss(xr, y);
    double rss_u = ols_rss(xu, y);
    if (rss_u <= 0.0) rss_u = 1e-300;
    double stat = static_cast<double>(n) * std::log(std::max(rss_r / rss_u, 1.0));
    reject[static_cast<std::size_t>(idx)] = stat > crit ? 1 : 0;
  });
  for (std::size_t idx = 0; idx < pairs.size(); ++idx)
    if (reject[idx]) out.edges.insert(pairs[idx]);
  return out;
}

Eigen::VectorXd lasso_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          double lambda, double tol, int max_sweeps) {
  const Eigen::Index n = x.rows(), d = x.cols();
  if (lambda < 0.0) throw Error(Errc::BadConfig, "lambda must be >= 0");

  // Standardize columns and center the response.
  Eigen::VectorXd mean = x.colwise().mean();
  Eigen::MatrixXd xs = x.rowwise() - mean.transpose();
  Eigen::VectorXd scale(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    scale(j) = std::sqrt(xs.col(j).squaredNorm() / n);
    if (scale(j) < 1e-12) scale(j) = 1.0;
    xs.col(j) /= scale(j);
  }
  double ymean = y.mean();
  Eigen::VectorXd yc = y.array() - ymean;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd resid = yc;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      double old = beta(j);
      double z = xs.col(j).dot(resid) / n + old;  // X_j'X_j/n == 1
      double nb = 0.0;
      if (z > lambda)
        nb = z - lambda;
      else if (z < -lambda)
        nb = z + lambda;
      if (nb != old) {
        resid -= (nb - old) * xs.col(j);
        beta(j) = nb;
        max_delta = std::max(max_delta, std::abs(nb - old));
      }
    }
    if (max_delta < tol) break;
  }
  if (sweep >= max_sweeps)
    throw Error(Errc::NonConvergence, "lasso exceeded max coordinate sweeps");

  // Back to the original column scale.
  for (Eigen::Index j = 0; j < d; ++j) beta(j) /= scale(j);
  return beta;
}

double lasso_cv_lambda(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int folds,
                       int grid) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd mean = x.colwise().mean();
  Eigen::MatrixXd xc = x.rowwise() - mean.transpose();
  double lambda_max = (xc.transpose() * (y.array() - y.mean()).matrix())
                          .cwiseAbs()
                          .maxCoeff() /
                      static_cast<double>(n);
  if (!(lambda_max > 0.0)) return 0.0;

  double best_lambda = lambda_max;
  double best_mse = std::numeric_limits<double>::infinity();
  for (int g = 0; g < grid; ++g) {
    double frac = static_cast<double>(g) / (grid - 1);
    double lambda = lambda_max * std::pow(1e-3, frac);
    double mse = 0.0;
    for (int f = 0; f < folds; ++f) {
      Eigen::Index lo = n * f / folds, hi = n * (f + 1) / folds;
      Eigen::Index nt = n - (hi - lo);
      Eigen::MatrixXd xt(nt, x.cols());
      Eigen::VectorXd yt(nt);
      xt.topRows(lo) = x.topRows(lo);
      yt.head(lo) = y.head(lo);
      xt.bottomRows(n - hi) = x.bottomRows(n - hi);
      yt.tail(n - hi) = y.tail(n - hi);

      Eigen::VectorXd beta = lasso_fit(xt, yt, lambda);
      double b0 = yt.mean() - xt.colwise().mean().dot(beta);
      Eigen::VectorXd pred =
          (x.middleRows(lo, hi - lo) * beta).array() + b0;
      mse += (pred - y.segment(lo, hi - lo)).squaredNorm();
    }
    mse /= static_cast<double>(n);
    if (mse < best_mse) {
      best_mse = mse;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

Digraph lasso_granger_graph(const Eigen::MatrixXd& series, int max_lag, double lambda) {
  const int n_series = static_cast<int>(series.cols());
  Digraph out;
  out.n = n_series;
  if (series.rows() <= max_lag + 2) return out;

  const Eigen::Index n = series.rows() - max_lag;
  std::vector<int> all(n_series);
  for (int i = 0; i < n_series; ++i) all[i] = i;

  std::vector<std::set<int>> parents(n_series);
  parallel_for(n_series, [&](std::int64_t j) {
    Eigen::MatrixXd x = lag_design(series, all, max_lag);
    Eigen::VectorXd y = series.col(j).tail(n);
    double lam = lambda >= 0.0 ? lambda : lasso_cv_lambda(x, y);
    Eigen::VectorXd beta = lasso_fit(x, y, lam);
    for (int i = 0; i < n_series; ++i) {
      if (i == j) continue;
      for (int l = 0; l < max_lag; ++l)
        if (beta(i * max_lag + l) != 0.0) {
          parents[static_cast<std::size_t>(j)].insert(i);
          break;
        }
    }
  });
  for (int j = 0; j < n_series; ++j)
    for (int i : parents[j]) out.edges.insert({i, j});
  return out;
}

}  // namespace stcausal
