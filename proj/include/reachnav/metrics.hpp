#pragma once

#include <string>
#include <vector>

#include "reachnav/episode.hpp"

namespace reachnav {

enum class Difficulty { kHard, kMedium, kEasy };

// Hard: d_min < 0.2 m, Medium: 0.2 <= d_min <= 0.3 m, Easy: d_min > 0.3 m.
Difficulty classify_difficulty(double d_min);
const char* difficulty_name(Difficulty d);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // population
  int n = 0;
};
Stat summarize(const std::vector<double>& xs);

struct BandMetrics {
  int count = 0;
  int successes = 0;
  double success_rate = 0.0;  // percent, 0 when empty
};

struct Metrics {
  int tasks = 0;
  int successes = 0;
  double success_rate = 0.0;  // percent
  // Over successful episodes: time to goal, and per-episode mean |a| and
  // mean |jerk| from the applied controls.
  Stat time;
  Stat accel;
  Stat jerk;
  BandMetrics hard, medium, easy;
};

// Mean |a| and mean |da/dt| of one trace.
double mean_abs_accel(const EpisodeResult& r);
double mean_abs_jerk(const EpisodeResult& r);

// Throws ValidationError on an empty list.
Metrics compute_metrics(const std::vector<EpisodeResult>& results);

}  // namespace reachnav
