#include "reachnav/export.hpp"

#include <cmath>
#include <cstdio>

namespace reachnav {

namespace {
std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}
}  // namespace

std::string overlay_svg(const OccupancyMap& map, const GoalSpec& goal,
                        const std::vector<Polyline>& lines, double s) {
  const double w = map.extent_x() * s, h = map.extent_y() * s;
  auto sx = [&](double x) { return (x - map.origin_x()) * s; };
  auto sy = [&](double y) { return h - (y - map.origin_y()) * s; };
  std::string out = fmt(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "viewBox=\"0 0 %.2f %.2f\">\n",
      w, h, w, h);
  out += fmt("<rect x=\"0\" y=\"0\" width=\"%.2f\" height=\"%.2f\" fill=\"white\"/>\n", w, h);
  const double c = map.cell_size() * s;
  for (int j = 0; j < map.height(); ++j)
    for (int i = 0; i < map.width(); ++i)
      if (map.occupied(i, j))
        out += fmt("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#444\"/>\n",
                   i * c, h - (j + 1) * c, c, c);
  out += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" stroke=\"green\" stroke-width=\"2\"/>\n",
             sx(goal.x), sy(goal.y), goal.radius * s);
  for (const Polyline& l : lines) {
    if (l.points.empty()) continue;
    out += "<polyline fill=\"none\" stroke=\"" + l.color +
           "\" stroke-width=\"2\" points=\"";
    for (const auto& p : l.points) out += fmt("%.2f,%.2f ", sx(p.x), sy(p.y));
    out += "\"><title>" + l.label + "</title></polyline>\n";
    out += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"/>\n",
               sx(l.points.front().x), sy(l.points.front().y), l.color.c_str());
  }
  double ly = 16.0;
  for (const Polyline& l : lines) {
    out += fmt("<text x=\"8\" y=\"%.0f\" font-size=\"14\" fill=\"%s\">%s</text>\n", ly,
               l.color.c_str(), l.label.c_str());
    ly += 16.0;
  }
  out += "</svg>\n";
  return out;
}

std::string overlay_csv(const std::vector<Polyline>& lines, double dt) {
  std::string out = "label,index,t,x,y,v,phi\n";
  for (const Polyline& l : lines)
    for (std::size_t k = 0; k < l.points.size(); ++k) {
      const auto& p = l.points[k];
      out += l.label + fmt(",%zu,%.4f,%.6f,%.6f,%.6f,%.6f\n", k, k * dt, p.x, p.y, p.v, p.phi);
    }
  return out;
}

std::string candidates_csv(const std::vector<Candidate>& cands) {
  std::string out = "index,x,y,theta,feasible,cost\n";
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const auto& c = cands[k];
    out += fmt("%zu,%.6f,%.6f,%.6f,%d,", k, c.waypoint.x, c.waypoint.y,
               c.waypoint.theta, c.feasible ? 1 : 0);
    out += std::isfinite(c.cost) ? fmt("%.9g", c.cost) : std::string("inf");
    out += "\n";
  }
  return out;
}

std::string trajectory_csv(const SplineTrajectory& t) {
  std::string out = "t,x,y,v,phi,a,omega\n";
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const auto& z = t.states[i];
    const auto& u = t.controls[i];
    out += fmt("%.4f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", i * t.dt, z.x, z.y, z.v,
               z.phi, u.a, u.omega);
  }
  return out;
}

std::string trace_csv(const EpisodeResult& r) {
  std::string out = "step,t,x,y,v,phi,a,omega\n";
  for (std::size_t k = 0; k < r.states.size(); ++k) {
    const auto& z = r.states[k];
    const ControlInput u = k < r.controls.size() ? r.controls[k] : ControlInput{};
    out += fmt("%zu,%.4f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", k, k * r.dt, z.x, z.y,
               z.v, z.phi, u.a, u.omega);
  }
  return out;
}

}  // namespace reachnav
