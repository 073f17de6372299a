#include "progrd/stats.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace progrd {

namespace {

double beta_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

void check_pairs(std::span<const double> xs, std::span<const double> ys, std::size_t min_n) {
  if (xs.size() != ys.size()) throw StatsError("samples differ in length");
  if (xs.size() < min_n) throw StatsError("need at least " + std::to_string(min_n) + " pairs");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw StatsError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw StatsError("incomplete beta needs x in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw StatsError("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_sided(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_upper(double t, double df) {
  const double tail = 0.5 * student_t_two_sided(t, df);
  return t >= 0.0 ? tail : 1.0 - tail;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double std_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

Correlation pearson_r(std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys, 3);
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw StatsError("correlation undefined for zero variance");
  Correlation c;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  c.df = static_cast<double>(xs.size()) - 2.0;
  if (std::abs(c.r) == 1.0) {
    c.p = 0.0;
  } else {
    const double t = c.r * std::sqrt(c.df / (1.0 - c.r * c.r));
    c.p = student_t_two_sided(t, c.df);
  }
  return c;
}

TTest paired_t(std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys, 2);
  std::vector<double> diff(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) diff[i] = xs[i] - ys[i];
  const double v = variance(diff);
  if (v == 0.0) throw StatsError("paired t undefined for zero-variance differences");
  TTest r;
  r.df = static_cast<double>(diff.size()) - 1.0;
  r.t = mean(diff) / std::sqrt(v / static_cast<double>(diff.size()));
  r.p = student_t_two_sided(r.t, r.df);
  r.p_greater = student_t_upper(r.t, r.df);
  r.p_less = student_t_upper(-r.t, r.df);
  return r;
}

}  // namespace progrd
