#pragma once

#include <array>
#include <vector>

#include "geom.hpp"

namespace cellscape {

struct Triangle {
  std::array<int, 3> v;         // CCW vertex indices into the point list
  std::array<int, 3> neighbor;  // triangle across edge (v[i], v[i+1]), -1 = hull
};

// Bowyer-Watson Delaunay triangulation with a walk-based point locator.
class Delaunay {
public:
  // Throws input_error for fewer than 3 distinct points or an all-collinear set.
  explicit Delaunay(const std::vector<Vec2>& points);

  const std::vector<Triangle>& triangles() const { return tris_; }
  const std::vector<Vec2>& points() const { return pts_; }

  // Triangle containing q (-1 outside the hull) and its barycentric weights.
  // `hint` is a starting triangle for the walk; callers scanning nearby
  // points should feed back the previous result.
  int locate(Vec2 q, std::array<double, 3>& bary, int hint = 0) const;

  // Linear interpolation of per-point values at q; false outside the hull.
  bool interpolate(Vec2 q, const std::vector<double>& values, double& out, int hint = 0) const;

private:
  std::vector<Vec2> pts_;
  std::vector<Triangle> tris_;

  bool barycentric(int tri, Vec2 q, std::array<double, 3>& bary) const;
};

}  // namespace cellscape
