#include "stcausal/stats.hpp"

#include <cmath>
#include <limits>

#include "stcausal/error.hpp"

namespace stcausal {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation, |relative error| < 1.15e-9.
double normal_quantile_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  double x = normal_quantile_approx(p);
  // Two Newton steps against the exact CDF.
  for (int i = 0; i < 2; ++i) {
    double err = normal_cdf(x) - p;
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    x -= err / pdf;
  }
  return x;
}

namespace {

double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), Lentz's method.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chi2_cdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(df / 2.0, x / 2.0);
}

double chi2_quantile(double df, double alpha) {
  if (alpha >= 1.0) return 0.0;
  if (alpha <= 0.0) return std::numeric_limits<double>::infinity();
  const double target = 1.0 - alpha;
  // Wilson-Hilferty starting point.
  double z = normal_quantile(target);
  double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  double guess = df * t * t * t;
  if (!(guess > 0.0)) guess = df;

  double lo = guess, hi = guess;
  while (chi2_cdf(lo, df) > target && lo > 1e-300) lo *= 0.5;
  while (chi2_cdf(hi, df) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (chi2_cdf(mid, df) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-7 * hi) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> sax_breakpoints(int alphabet) {
  std::vector<double> beta;
  beta.reserve(alphabet - 1);
  for (int j = 1; j < alphabet; ++j)
    beta.push_back(normal_quantile(static_cast<double>(j) / alphabet));
  return beta;
}

NormalityResult dagostino_pearson(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 20) throw Error(Errc::TooFewSamples, "normality test needs >= 20 samples");
  const double dn = static_cast<double>(n);

  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : sample) {
    double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (m2 <= 0.0) throw Error(Errc::DegenerateSeries, "zero variance sample");

  double g1 = m3 / std::pow(m2, 1.5);
  double g2 = m4 / (m2 * m2) - 3.0;

  // Skewness transform (D'Agostino 1970).
  double y = g1 * std::sqrt((dn + 1.0) * (dn + 3.0) / (6.0 * (dn - 2.0)));
  double beta2 = 3.0 * (dn * dn + 27.0 * dn - 70.0) * (dn + 1.0) * (dn + 3.0) /
                 ((dn - 2.0) * (dn + 5.0) * (dn + 7.0) * (dn + 9.0));
  double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
  double delta = 1.0 / std::sqrt(std::log(std::sqrt(w2)));
  double alpha = std::sqrt(2.0 / (w2 - 1.0));
  double z1 = delta * std::log(y / alpha + std::sqrt((y / alpha) * (y / alpha) + 1.0));

  // Kurtosis transform (Anscombe & Glynn 1983).
  double eg2 = -6.0 / (dn + 1.0);
  double vg2 = 24.0 * dn * (dn - 2.0) * (dn - 3.0) /
               ((dn + 1.0) * (dn + 1.0) * (dn + 3.0) * (dn + 5.0));
  double x = (g2 - eg2) / std::sqrt(vg2);
  double sqb1 = 6.0 * (dn * dn - 5.0 * dn + 2.0) / ((dn + 7.0) * (dn + 9.0)) *
                std::sqrt(6.0 * (dn + 3.0) * (dn + 5.0) / (dn * (dn - 2.0) * (dn - 3.0)));
  double a = 6.0 + 8.0 / sqb1 * (2.0 / sqb1 + std::sqrt(1.0 + 4.0 / (sqb1 * sqb1)));
  double z2 = ((1.0 - 2.0 / (9.0 * a)) -
               std::cbrt((1.0 - 2.0 / a) / (1.0 + x * std::sqrt(2.0 / (a - 4.0))))) /
              std::sqrt(2.0 / (9.0 * a));

  NormalityResult r;
  r.z_skew = z1;
  r.z_kurt = z2;
  r.k2 = z1 * z1 + z2 * z2;
  r.p_value = std::exp(-r.k2 / 2.0);  // chi2(2) survival
  return r;
}

}  // namespace stcausal
