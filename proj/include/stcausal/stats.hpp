#pragma once

#include <span>
#include <vector>

namespace stcausal {

double normal_cdf(double x);

// Inverse standard normal CDF, |error| < 1e-12 after Newton polish.
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

double chi2_cdf(double x, double df);

// Upper-alpha critical value c with Pr(X > c) = alpha, X ~ chi2(df).
// Wilson-Hilferty start refined by bisection, relative error <= 1e-6.
double chi2_quantile(double df, double alpha);

// Gaussian equiprobable breakpoints for an alphabet of size a:
// quantiles at j/a for j = 1..a-1.
std::vector<double> sax_breakpoints(int alphabet);

struct NormalityResult {
  double k2 = 0.0;       // omnibus statistic
  double p_value = 1.0;  // chi2(2) tail
  double z_skew = 0.0;
  double z_kurt = 0.0;
};

// D'Agostino-Pearson omnibus test; requires n >= 20 (Errc::TooFewSamples).
NormalityResult dagostino_pearson(std::span<const double> sample);

}  // namespace stcausal
