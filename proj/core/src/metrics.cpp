#include "coop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coop {

CellStats summarize(const std::vector<EpisodeMetrics>& records) {
  if (records.empty()) throw MetricsError("summarize: empty episode list");
  CellStats stats;
  stats.n = static_cast<int>(records.size());
  stats.raw = records;
  for (const auto& r : records) {
    stats.mean_steps += r.step_count;
    stats.mean_turns += r.turn_count;
  }
  stats.mean_steps /= stats.n;
  stats.mean_turns /= stats.n;
  return stats;
}

double efficiency_1(double single_steps, double collab_steps) {
  if (single_steps <= 0) throw MetricsError("efficiency_1: non-positive single_steps");
  return (single_steps - collab_steps) / single_steps;
}

double efficiency_2(double base_steps, double new_steps) {
  if (base_steps <= 0) throw MetricsError("efficiency_2: non-positive base_steps");
  return (base_steps - new_steps) / base_steps;
}

namespace {

struct SampleStats {
  double mean = 0.0;
  double var = 0.0;  // unbiased
  std::size_t n = 0;
};

SampleStats sample_stats(std::span<const double> xs) {
  SampleStats s;
  s.n = xs.size();
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(s.n);
  for (double x : xs) s.var += (x - s.mean) * (x - s.mean);
  s.var /= static_cast<double>(s.n - 1);
  return s;
}

// Continued fraction for the incomplete beta function (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEpsilon = 1e-15;
  constexpr double kTiny = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0 || b <= 0) throw MetricsError("incomplete beta: parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  // The continued fraction converges fast only for x < (a+1)/(a+b+2);
  // otherwise use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double df) {
  if (df <= 0) throw MetricsError("student t: df must be positive");
  double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw MetricsError("welch_t: each sample needs at least 2 values");

  SampleStats sa = sample_stats(a);
  SampleStats sb = sample_stats(b);
  if (sa.var == 0.0 && sb.var == 0.0)
    throw MetricsError("welch_t: both samples have zero variance, t undefined");

  double se_a = sa.var / static_cast<double>(sa.n);
  double se_b = sb.var / static_cast<double>(sb.n);
  double se = se_a + se_b;

  WelchResult r;
  r.t = (sa.mean - sb.mean) / std::sqrt(se);
  r.df = se * se /
         (se_a * se_a / (static_cast<double>(sa.n) - 1.0) +
          se_b * se_b / (static_cast<double>(sb.n) - 1.0));
  r.p = student_t_two_tailed_p(r.t, r.df);
  return r;
}

}  // namespace coop
