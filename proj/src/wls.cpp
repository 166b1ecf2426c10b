#include "stcausal/wls.hpp"

#include <cmath>

#include "stcausal/error.hpp"
#include "stcausal/kernels.hpp"
#include "stcausal/parallel.hpp"

namespace stcausal {

WlsFit fit_wls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
               const Eigen::VectorXd& w, double ridge) {
  const Eigen::Index n = x.rows(), d = x.cols();
  if (n == 0) throw Error(Errc::NoUsableRows, "regression on zero rows");
  double wsum = w.sum();
  if (!(wsum > 0.0)) throw Error(Errc::DegenerateCluster, "zero total regression weight");

  Eigen::MatrixXd g;
  Eigen::VectorXd b;
  accumulate_normal_eq(x, y, w, g, b);
  g.diagonal().array() += ridge;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  Eigen::VectorXd beta = ldlt.solve(b);
  if (ldlt.info() != Eigen::Success || !beta.allFinite())
    throw Error(Errc::SingularSystem, "normal equations not solvable");

  WlsFit fit;
  fit.intercept = beta(0);
  fit.coef = beta.tail(d);

  struct RssAcc {
    double rss = 0.0;
  };
  RssAcc rss = blocked_reduce<RssAcc>(
      n, RssAcc{},
      [&](std::int64_t lo, std::int64_t hi, RssAcc& acc) {
        for (std::int64_t i = lo; i < hi; ++i) {
          double r = y(i) - fit.intercept - x.row(i).dot(fit.coef);
          acc.rss += w(i) * r * r;
        }
      },
      [](RssAcc& a, const RssAcc& p) { a.rss += p.rss; });
  fit.sigma2 = std::max(kVarianceFloor, rss.rss / wsum);
  return fit;
}

double conditional_variance(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w, const std::vector<int>& cols) {
  if (y.size() < 2) throw Error(Errc::NoUsableRows, "conditional variance needs >= 2 rows");
  Eigen::MatrixXd sub(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) sub.col(j) = x.col(cols[j]);
  return fit_wls(sub, y, w).sigma2;
}

}  // namespace stcausal
