#pragma once

#include <span>
#include <vector>

#include "coop/errors.hpp"

namespace coop {

struct EpisodeMetrics {
  int step_count = 0;      // ticks consumed
  int turn_count = 0;      // messages sent by both agents
  int fuzzy_count = 0;
  int fallback_count = 0;
  bool completed = false;
};

struct CellStats {
  double mean_steps = 0.0;
  double mean_turns = 0.0;
  int n = 0;
  std::vector<EpisodeMetrics> raw;  // kept for significance testing
};

CellStats summarize(const std::vector<EpisodeMetrics>& records);  // throws on empty

// Relative step reduction of collaborative vs single-agent execution.
double efficiency_1(double single_steps, double collab_steps);

// Relative step reduction of a prompt combo vs the Base combo.
double efficiency_2(double base_steps, double new_steps);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-tailed
};

// Welch's unequal-variance t statistic with Welch-Satterthwaite degrees of
// freedom. Throws MetricsError for samples smaller than 2 or when both
// variances are zero.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

// I_x(a, b), continued-fraction evaluation, absolute error <= 1e-9.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_tailed_p(double t, double df);

}  // namespace coop
