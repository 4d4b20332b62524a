#include "vlpslam/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace vlpslam {

double path_length(const std::vector<Vec2>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    len += (path[i] - path[i - 1]).norm();
  }
  return len;
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double octile(const GridIndex& a, const GridIndex& b, double res) {
  const double dx = std::abs(a.ix - b.ix);
  const double dy = std::abs(a.iy - b.iy);
  const double lo = std::min(dx, dy);
  const double hi = std::max(dx, dy);
  return res * (hi - lo + kSqrt2 * lo);
}

}  // namespace

PlanResult plan_path(const Costmap& costmap, const Vec2& start,
                     const Vec2& goal, const PlannerConfig& cfg) {
  PlanResult result;
  const GridGeometry& geom = costmap.geometry();
  const GridIndex sc = geom.world_to_cell(start);
  const GridIndex gc = geom.world_to_cell(goal);
  if (!geom.contains(sc) || !geom.contains(gc) || !costmap.traversable(sc) ||
      !costmap.traversable(gc)) {
    return result;
  }
  const double res = geom.resolution();
  const int w = geom.width(), h = geom.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  std::vector<bool> closed(n, false);

  // Min-heap on (f, h, flat): the h and flat components make pop order, and
  // therefore the returned path, independent of heap internals.
  using Entry = std::tuple<double, double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;

  const std::size_t sf = geom.flat(sc);
  const std::size_t gf = geom.flat(gc);
  g[sf] = 0.0;
  open.emplace(octile(sc, gc, res), octile(sc, gc, res), sf);

  const int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const auto [f, hh, flat] = open.top();
    open.pop();
    if (closed[flat]) continue;
    closed[flat] = true;
    ++result.expanded;
    if (flat == gf) break;
    const GridIndex cur{static_cast<int>(flat % w), static_cast<int>(flat / w)};
    for (int k = 0; k < 8; ++k) {
      const GridIndex nb{cur.ix + dxs[k], cur.iy + dys[k]};
      if (!geom.contains(nb) || !costmap.traversable(nb)) continue;
      const bool diagonal = k >= 4;
      if (diagonal) {
        if (!costmap.traversable({cur.ix + dxs[k], cur.iy}) ||
            !costmap.traversable({cur.ix, cur.iy + dys[k]})) {
          continue;
        }
      }
      const std::size_t nf = geom.flat(nb);
      if (closed[nf]) continue;
      const double step = diagonal ? res * kSqrt2 : res;
      const double weight =
          step * (1.0 + cfg.cost_weight * costmap.at(nb) / 254.0);
      const double cand = g[flat] + weight;
      if (cand < g[nf]) {
        g[nf] = cand;
        parent[nf] = static_cast<int>(flat);
        const double hn = octile(nb, gc, res);
        open.emplace(cand + hn, hn, nf);
      }
    }
  }

  if (!closed[gf]) {
    return result;
  }
  result.success = true;
  result.cost = g[gf];
  std::vector<Vec2> rev;
  for (int f = static_cast<int>(gf); f != -1; f = parent[f]) {
    rev.push_back(geom.cell_center({f % w, f / w}));
  }
  result.path.assign(rev.rbegin(), rev.rend());
  return result;
}

}  // namespace vlpslam
