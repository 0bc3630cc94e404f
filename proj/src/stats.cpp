#include "courtloc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "courtloc/errors.hpp"

namespace courtloc::stats {

namespace {

constexpr double kBetaTolerance = 1e-10;
constexpr int kMaxLentzIterations = 500;

// Continued fraction for the regularized incomplete beta function,
// modified Lentz algorithm.
double beta_continued_fraction(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double result = d;
  for (int m = 1; m <= kMaxLentzIterations; ++m) {
    const double md = static_cast<double>(m);
    // Even term.
    double numer = md * (b - md) * x / ((a + 2.0 * md - 1.0) * (a + 2.0 * md));
    d = 1.0 + numer * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + numer / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    result *= d * c;
    // Odd term.
    numer = -(a + md) * (a + b + md) * x /
            ((a + 2.0 * md) * (a + 2.0 * md + 1.0));
    d = 1.0 + numer * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + numer / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    result *= delta;
    if (std::abs(delta - 1.0) < kBetaTolerance) return result;
  }
  throw NumericError("incomplete beta continued fraction failed to converge");
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw NumericError("incomplete beta requires a, b > 0");
  if (x < 0.0 || x > 1.0)
    throw NumericError("incomplete beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_prefactor = a * std::log(x) + b * std::log1p(-x) -
                               (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  // Symmetry switch keeps the continued fraction in its fast-converging region.
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(log_prefactor) * beta_continued_fraction(x, a, b) / a;
  return 1.0 - std::exp(log_prefactor) * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_cdf(double x, double df) {
  if (!(df > 0.0)) throw NumericError("t CDF requires df > 0");
  if (x == 0.0) return 0.5;
  const double tail =
      0.5 * regularized_incomplete_beta(df / (df + x * x), df / 2.0, 0.5);
  return x > 0.0 ? 1.0 - tail : tail;
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw ShapeError("pearson_r: series lengths differ");
  const std::size_t n = xs.size();
  if (n < 3) throw ShapeError("pearson_r: need at least 3 pairs");
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw NumericError("pearson_r: correlation undefined for a constant series");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double t_statistic(double r, std::size_t n) {
  if (n < 3) throw ShapeError("t_statistic: need n >= 3");
  if (std::abs(r) >= 1.0)
    throw NumericError("t_statistic: infinite statistic at |r| = 1");
  return r * std::sqrt(static_cast<double>(n - 2)) / std::sqrt(1.0 - r * r);
}

double p_two_tailed(double t, double df) {
  if (!(df >= 1.0)) throw NumericError("p_two_tailed: df must be >= 1");
  return 2.0 * (1.0 - student_t_cdf(std::abs(t), df));
}

CorrelationResult correlation_test(std::span<const double> xs,
                                   std::span<const double> ys) {
  CorrelationResult result;
  result.r = pearson_r(xs, ys);
  result.n = xs.size();
  result.df = static_cast<double>(result.n - 2);
  result.t = t_statistic(result.r, result.n);
  result.p = p_two_tailed(result.t, result.df);
  result.reject_h0_at_0_05 = result.p < 0.05;
  return result;
}

}  // namespace courtloc::stats
