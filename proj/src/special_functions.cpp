#include "fieldsim/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fieldsim {
namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction at x.
double incomplete_beta_cf(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kTol = 1e-16;
  constexpr int kMaxTerms = 400;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kTol) break;
  }
  return h;
}

}  // namespace

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("regularized_incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("regularized_incomplete_beta: x out of [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * incomplete_beta_cf(x, a, b) / a;
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                   incomplete_beta_cf(1.0 - x, b, a) / b;
}

double student_t_sf(double t, int df) {
  if (df < 1) throw std::invalid_argument("student_t_sf: df must be >= 1");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (t < 0.0) return 1.0 - student_t_sf(-t, df);
  const double x = df / (df + t * t);
  return 0.5 * regularized_incomplete_beta(x, 0.5 * df, 0.5);
}

double f_sf(double f, int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("f_sf: degrees of freedom must be >= 1");
  if (!(f >= 0.0)) throw std::invalid_argument("f_sf: statistic must be non-negative");
  if (f == 0.0) return 1.0;
  const double x = d2 / (d2 + static_cast<double>(d1) * f);
  return regularized_incomplete_beta(x, 0.5 * d2, 0.5 * d1);
}

}  // namespace fieldsim
