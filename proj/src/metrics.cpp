#include "reachnav/metrics.hpp"

#include <cmath>

#include "reachnav/errors.hpp"

namespace reachnav {

Difficulty classify_difficulty(double d_min) {
  if (d_min < 0.2) return Difficulty::kHard;
  if (d_min <= 0.3) return Difficulty::kMedium;
  return Difficulty::kEasy;
}

const char* difficulty_name(Difficulty d) {
  switch (d) {
    case Difficulty::kHard: return "Hard";
    case Difficulty::kMedium: return "Medium";
    case Difficulty::kEasy: return "Easy";
  }
  return "?";
}

Stat summarize(const std::vector<double>& xs) {
  Stat s;
  s.n = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= s.n;
  for (double x : xs) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / s.n);
  return s;
}

double mean_abs_accel(const EpisodeResult& r) {
  if (r.controls.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& u : r.controls) sum += std::abs(u.a);
  return sum / r.controls.size();
}

double mean_abs_jerk(const EpisodeResult& r) {
  if (r.controls.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 1; k < r.controls.size(); ++k)
    sum += std::abs(r.controls[k].a - r.controls[k - 1].a) / r.dt;
  return sum / (r.controls.size() - 1);
}

Metrics compute_metrics(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw ValidationError("compute_metrics: no results");
  Metrics m;
  m.tasks = static_cast<int>(results.size());
  std::vector<double> times, accels, jerks;
  for (const auto& r : results) {
    const bool ok = r.outcome == Outcome::kSuccess;
    BandMetrics* band = nullptr;
    switch (classify_difficulty(r.d_min)) {
      case Difficulty::kHard: band = &m.hard; break;
      case Difficulty::kMedium: band = &m.medium; break;
      case Difficulty::kEasy: band = &m.easy; break;
    }
    ++band->count;
    if (!ok) continue;
    ++band->successes;
    ++m.successes;
    times.push_back(r.time);
    accels.push_back(mean_abs_accel(r));
    jerks.push_back(mean_abs_jerk(r));
  }
  m.success_rate = 100.0 * m.successes / m.tasks;
  for (BandMetrics* b : {&m.hard, &m.medium, &m.easy})
    b->success_rate = b->count ? 100.0 * b->successes / b->count : 0.0;
  m.time = summarize(times);
  m.accel = summarize(accels);
  m.jerk = summarize(jerks);
  return m;
}

}  // namespace reachnav
