#include "geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cellscape {

double dist2(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double dist(Vec2 a, Vec2 b) { return std::sqrt(dist2(a, b)); }

double polygon_area(const Polygon& p) {
  const size_t n = p.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (size_t i = 0, j = n - 1; i < n; j = i++) s += cross(p[j], p[i]);
  return 0.5 * s;
}

Vec2 polygon_centroid(const Polygon& p) {
  const size_t n = p.size();
  if (n == 0) return {};
  if (n < 3) {
    Vec2 c{};
    for (const Vec2& v : p) { c.x += v.x; c.y += v.y; }
    return {c.x / double(n), c.y / double(n)};
  }
  // Accumulate relative to the first vertex to keep the cross products small.
  double a = 0.0, cx = 0.0, cy = 0.0;
  const Vec2 o = p[0];
  for (size_t i = 1; i + 1 < n; ++i) {
    const Vec2 u = p[i] - o, v = p[i + 1] - o;
    const double w = cross(u, v);
    a += w;
    cx += w * (u.x + v.x);
    cy += w * (u.y + v.y);
  }
  if (a == 0.0) return o;
  return {o.x + cx / (3.0 * a), o.y + cy / (3.0 * a)};
}

Polygon regular_ngon(Vec2 center, double radius, int n_vertices) {
  Polygon out;
  out.reserve(size_t(n_vertices));
  for (int i = 0; i < n_vertices; ++i) {
    const double t = 2.0 * M_PI * double(i) / double(n_vertices);
    out.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
  }
  return out;
}

Polygon clip_halfplane(const Polygon& poly, Vec2 p, Vec2 n) {
  Polygon out;
  const size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 2);
  double d_prev = dot(n, poly[m - 1] - p);
  for (size_t i = 0; i < m; ++i) {
    const double d_cur = dot(n, poly[i] - p);
    const Vec2& prev = poly[i == 0 ? m - 1 : i - 1];
    if (d_prev <= 0.0) {
      out.push_back(prev);
      if (d_cur > 0.0) {
        const double t = d_prev / (d_prev - d_cur);
        out.push_back(prev + t * (poly[i] - prev));
      }
    } else if (d_cur <= 0.0) {
      const double t = d_prev / (d_prev - d_cur);
      out.push_back(prev + t * (poly[i] - prev));
    }
    d_prev = d_cur;
  }
  if (out.size() < 3) out.clear();
  return out;
}

double polygon_boundary_dist(const Polygon& poly, Vec2 q) {
  const size_t n = poly.size();
  if (n == 0) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j], b = poly[i];
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(q - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, dist(q, a + t * ab));
  }
  return best;
}

bool point_in_polygon(const Polygon& poly, Vec2 q, double tol) {
  const size_t n = poly.size();
  if (n < 3) return false;
  if (tol > 0.0 && polygon_boundary_dist(poly, q) <= tol) return true;
  int winding = 0;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j], b = poly[i];
    if (a.y <= q.y) {
      if (b.y > q.y && cross(b - a, q - a) > 0.0) ++winding;
    } else {
      if (b.y <= q.y && cross(b - a, q - a) < 0.0) --winding;
    }
  }
  if (winding != 0) return true;
  // Boundary points have winding 0 half the time; count them as inside.
  return polygon_boundary_dist(poly, q) == 0.0;
}

}  // namespace cellscape
