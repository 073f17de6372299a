#pragma once

// Small statistics toolkit: Student-t tail probabilities via the regularized
// incomplete beta function, Pearson correlation and paired t-tests.

#include <span>
#include <stdexcept>

namespace progrd {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);
double student_t_two_sided(double t, double df);  // P(|T| >= |t|)
double student_t_upper(double t, double df);      // P(T >= t)

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-sided, t-transform with n - 2 degrees of freedom
  double df = 0.0;
};

// Throws StatsError for fewer than 3 pairs, unequal lengths or zero variance.
Correlation pearson_r(std::span<const double> xs, std::span<const double> ys);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;          // two-sided
  double p_greater = 1.0;  // H1: mean(xs - ys) > 0
  double p_less = 1.0;     // H1: mean(xs - ys) < 0
};

// Throws StatsError for fewer than 2 pairs, unequal lengths or zero-variance
// differences.
TTest paired_t(std::span<const double> xs, std::span<const double> ys);

double mean(std::span<const double> xs);
// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> xs);
double std_error(std::span<const double> xs);

}  // namespace progrd
