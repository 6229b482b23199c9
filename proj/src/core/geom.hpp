#pragma once

#include <cstddef>
#include <vector>

namespace cellscape {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double dist(Vec2 a, Vec2 b);
double dist2(Vec2 a, Vec2 b);

// Closed ring, counter-clockwise, last vertex != first.
using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& p);  // signed; > 0 for CCW rings
Vec2 polygon_centroid(const Polygon& p);

// Regular n-gon inscribed in the circle of the given radius, CCW.
Polygon regular_ngon(Vec2 center, double radius, int n_vertices);

// Part of `poly` with dot(n, x - p) <= 0 (Sutherland-Hodgman for one plane).
Polygon clip_halfplane(const Polygon& poly, Vec2 p, Vec2 n);

// Winding-number test; points within `tol` of an edge count as inside.
bool point_in_polygon(const Polygon& poly, Vec2 q, double tol = 0.0);

// Distance from q to the polygon boundary.
double polygon_boundary_dist(const Polygon& poly, Vec2 q);

}  // namespace cellscape
