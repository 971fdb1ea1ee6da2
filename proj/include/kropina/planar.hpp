#pragma once

/// Planar point-set helpers: winding-number containment, nearest-neighbour
/// spacing and alpha-shape boundaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kropina::planar {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

/// Winding number of the closed polygon around p (last vertex joins the first).
inline int winding_number(const std::vector<Point>& poly, Point p) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i], b = poly[(i + 1) % n];
    const double cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    if (a.y <= p.y) {
      if (b.y > p.y && cross > 0.0) ++wn;
    } else if (b.y <= p.y && cross < 0.0) {
      --wn;
    }
  }
  return wn;
}

inline double boundary_distance(const std::vector<Point>& poly, Point p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) d = std::min(d, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return d;
}

/// Inside the closed polygon, or within `tol` of its boundary.
inline bool contains(const std::vector<Point>& poly, Point p, double tol = 0.0) {
  if (poly.size() < 3) return false;
  if (winding_number(poly, p) != 0) return true;
  return boundary_distance(poly, p) <= tol;
}

namespace detail {

struct Grid {
  double cell;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;

  static std::int64_t key(std::int64_t i, std::int64_t j) { return (i << 32) ^ (j & 0xffffffff); }
  std::pair<std::int64_t, std::int64_t> index(Point p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell)), static_cast<std::int64_t>(std::floor(p.y / cell))};
  }

  Grid(const std::vector<Point>& pts, double c) : cell(c) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto [i, j] = index(pts[k]);
      buckets[key(i, j)].push_back(k);
    }
  }

  template <class Fn>
  void for_each_near(Point p, double radius, Fn&& fn) const {
    const auto [ci, cj] = index(p);
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell));
    for (std::int64_t i = ci - reach; i <= ci + reach; ++i)
      for (std::int64_t j = cj - reach; j <= cj + reach; ++j) {
        const auto it = buckets.find(key(i, j));
        if (it == buckets.end()) continue;
        for (std::size_t k : it->second) fn(k);
      }
  }

  /// True as soon as pred(k) holds for a point k in the cells covering the disc.
  template <class Pred>
  bool any_near(Point p, double radius, Pred&& pred) const {
    const auto [ci, cj] = index(p);
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell));
    for (std::int64_t i = ci - reach; i <= ci + reach; ++i)
      for (std::int64_t j = cj - reach; j <= cj + reach; ++j) {
        const auto it = buckets.find(key(i, j));
        if (it == buckets.end()) continue;
        for (std::size_t k : it->second)
          if (pred(k)) return true;
      }
    return false;
  }
};

}  // namespace detail

/// Median distance from each point to its nearest distinct neighbour.
inline double median_nearest_spacing(const std::vector<Point>& pts) {
  if (pts.size() < 2) return 0.0;
  std::vector<double> nn(pts.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j) {
        const double d = distance(pts[i], pts[j]);
        if (d > 0.0) nn[i] = std::min(nn[i], d);
      }
  std::vector<double> finite;
  for (double d : nn)
    if (std::isfinite(d)) finite.push_back(d);
  if (finite.empty()) return 0.0;
  std::nth_element(finite.begin(), finite.begin() + finite.size() / 2, finite.end());
  return finite[finite.size() / 2];
}

/// Boundary of the alpha shape of `pts` with disc radius `radius`: an edge
/// (p, q) belongs to it when some disc of that radius with p and q on its
/// circle contains no other point. Edges are chained into polylines; closed
/// loops repeat their first vertex at the end. Input closer than r / 4 is
/// thinned first, so every input point lies within r / 2 of the region.
inline std::vector<std::vector<Point>> alpha_shape_boundary(const std::vector<Point>& input, double radius) {
  std::vector<std::vector<Point>> out;
  if (input.size() < 2 || !(radius > 0.0)) return out;

  // Thin to one point per cell of side r / 4 (first in input order). The
  // boundary moves by at most r / (2 sqrt 2); dense clusters where many rays
  // converge no longer blow up the pair search.
  std::vector<Point> pts;
  {
    const double thin = radius / 4.0;
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& p : input) {
      const auto i = static_cast<std::int64_t>(std::floor(p.x / thin));
      const auto j = static_cast<std::int64_t>(std::floor(p.y / thin));
      if (seen.insert({i, j}).second) pts.push_back(p);
    }
  }
  const double r2 = radius * radius;
  const double inside = r2 * (1.0 - 1e-9);

  // An empty disc of radius r contains a whole grid cell of side r / 2.5, and
  // that cell lies within 2r of both points on its circle. Points without an
  // empty cell that close can be skipped exactly.
  const double cell = radius / 2.5;
  const detail::Grid fine(pts, cell);
  std::vector<char> candidate(pts.size(), 0);
  {
    const auto reach = static_cast<std::int64_t>(std::ceil((2.0 * radius) / cell)) + 1;
    for (const auto& [key, members] : fine.buckets) {
      const auto [ci, cj] = fine.index(pts[members.front()]);
      bool open = false;
      for (std::int64_t i = ci - reach; i <= ci + reach && !open; ++i)
        for (std::int64_t j = cj - reach; j <= cj + reach && !open; ++j)
          open = !fine.buckets.contains(detail::Grid::key(i, j));
      if (open)
        for (std::size_t k : members) candidate[k] = 1;
    }
  }
  const detail::Grid cand_grid = [&] {
    std::vector<Point> none;
    detail::Grid g(none, 2.0 * radius);
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (candidate[k]) {
        const auto [i, j] = g.index(pts[k]);
        g.buckets[detail::Grid::key(i, j)].push_back(k);
      }
    return g;
  }();

  std::map<std::size_t, std::vector<std::size_t>> adj;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    if (!candidate[a]) continue;
    cand_grid.for_each_near(pts[a], 2.0 * radius, [&](std::size_t b) {
      if (b <= a) return;
      const Point p = pts[a], q = pts[b];
      const double d = distance(p, q);
      if (d > 2.0 * radius || d == 0.0) return;
      const Point mid{0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
      const double off = std::sqrt(std::max(r2 - 0.25 * d * d, 0.0));
      const double nx = -(q.y - p.y) / d, ny = (q.x - p.x) / d;
      for (double sgn : {1.0, -1.0}) {
        const Point c{mid.x + sgn * off * nx, mid.y + sgn * off * ny};
        const bool occupied = fine.any_near(c, radius, [&](std::size_t k) {
          if (k == a || k == b) return false;
          const double dx = pts[k].x - c.x, dy = pts[k].y - c.y;
          return dx * dx + dy * dy < inside;
        });
        if (!occupied) {
          if (edges.insert({a, b}).second) {
            adj[a].push_back(b);
            adj[b].push_back(a);
          }
          break;
        }
      }
    });
  }

  // Chain edges into polylines.
  std::set<std::pair<std::size_t, std::size_t>> used;
  auto take = [&](std::size_t a, std::size_t b) { return used.insert({std::min(a, b), std::max(a, b)}).second; };
  auto walk = [&](std::size_t start) {
    std::vector<Point> line{pts[start]};
    std::size_t cur = start;
    for (;;) {
      bool moved = false;
      for (std::size_t nxt : adj[cur]) {
        if (take(cur, nxt)) {
          line.push_back(pts[nxt]);
          cur = nxt;
          moved = true;
          break;
        }
      }
      if (!moved || cur == start) break;
    }
    return line;
  };
  // Open chains start at odd-degree vertices; the rest are loops.
  for (const auto& [v, nb] : adj)
    if (nb.size() % 2 == 1) {
      auto line = walk(v);
      if (line.size() > 1) out.push_back(std::move(line));
    }
  for (const auto& [v, nb] : adj) {
    (void)nb;
    auto line = walk(v);
    if (line.size() > 1) out.push_back(std::move(line));
  }
  return out;
}

}  // namespace kropina::planar
