#pragma once

#include <vector>

#include "vlpslam/costmap.hpp"

namespace vlpslam {

struct PlannerConfig {
  // Edge weight = step_length * (1 + cost_weight * cost(dest) / 254).
  double cost_weight = 3.0;
};

struct PlanResult {
  bool success = false;
  std::vector<Vec2> path;  // cell centers, start to goal inclusive
  double cost = 0.0;       // accumulated edge weight
  int expanded = 0;
};

// 8-connected A* over the costmap with an octile-distance heuristic. Diagonal
// moves are disallowed when either adjacent axis cell is blocked (no corner
// cutting). Cells at or above the inscribed cost are impassable.
PlanResult plan_path(const Costmap& costmap, const Vec2& start,
                     const Vec2& goal, const PlannerConfig& cfg = {});

double path_length(const std::vector<Vec2>& path);

}  // namespace vlpslam
