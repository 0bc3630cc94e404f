#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace courtloc::stats {

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double df = 0.0;  // n - 2
  double t = 0.0;
  double p = 1.0;  // two-tailed
  bool reject_h0_at_0_05 = false;
};

// Product-moment correlation; throws NumericError on a constant series,
// ShapeError on mismatched or too-short inputs (n >= 3).
double pearson_r(std::span<const double> xs, std::span<const double> ys);

// t = r * sqrt(n-2) / sqrt(1 - r^2); |r| = 1 raises NumericError.
double t_statistic(double r, std::size_t n);

// p = 2 * (1 - CDF_t(|t|; df)) via the regularized incomplete beta function.
double p_two_tailed(double t, double df);

CorrelationResult correlation_test(std::span<const double> xs,
                                   std::span<const double> ys);

// Continued-fraction evaluation (Lentz), absolute tolerance 1e-10. Exposed
// for the numerical cross-checks.
double regularized_incomplete_beta(double x, double a, double b);
double student_t_cdf(double x, double df);

// Prediction-loss table fixture: per-run test iteration counts and the
// per-axis losses reported for them, plus the correlation coefficients the
// source reports for these columns (which differ slightly from the values
// recomputed from the printed rows; both are kept).
namespace table2 {
inline constexpr std::array<double, 9> iterations = {15,  25,  35,  100, 200,
                                                     300, 400, 500, 600};
inline constexpr std::array<double, 9> x_loss = {
    0.1375, 0.1639, 0.1498, 0.1611, 0.1464, 0.1412, 0.1394, 0.1376, 0.1401};
inline constexpr std::array<double, 9> y_loss = {
    0.1950, 0.1861, 0.1717, 0.1691, 0.1519, 0.1579, 0.1605, 0.1588, 0.1628};
inline constexpr double reported_mean_x = 0.1463;
inline constexpr double reported_mean_y = 0.1506;
inline constexpr double reported_r_x = -0.32;
inline constexpr double reported_r_y = -0.67;
inline constexpr double reported_p_x = 0.40;
inline constexpr double reported_p_y = 0.01;
}  // namespace table2

}  // namespace courtloc::stats
