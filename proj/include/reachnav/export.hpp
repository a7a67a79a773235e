#pragma once

#include <string>
#include <vector>

#include "reachnav/episode.hpp"
#include "reachnav/planner.hpp"

namespace reachnav {

struct Polyline {
  std::string label;
  std::string color;  // any SVG color
  std::vector<VehicleState> points;
};

// Map cells as rectangles, the goal disk, and one polyline per trace. y points
// up in world coordinates; the SVG is flipped accordingly.
std::string overlay_svg(const OccupancyMap& map, const GoalSpec& goal,
                        const std::vector<Polyline>& lines, double px_per_m = 100.0);

// "label,index,t,x,y,v,phi" rows.
std::string overlay_csv(const std::vector<Polyline>& lines, double dt);

// "index,x,y,theta,feasible,cost" rows.
std::string candidates_csv(const std::vector<Candidate>& cands);

// "t,x,y,v,phi,a,omega" rows of a sampled trajectory.
std::string trajectory_csv(const SplineTrajectory& traj);

// "step,t,x,y,v,phi,a,omega" rows of an episode trace; the last state has no
// control and repeats zeros.
std::string trace_csv(const EpisodeResult& r);

}  // namespace reachnav
