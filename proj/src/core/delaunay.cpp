#include "delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "error.hpp"

namespace cellscape {

namespace {

struct WorkTri {
  int a, b, c;
  bool alive = true;
};

double incircle(Vec2 pa, Vec2 pb, Vec2 pc, Vec2 pd) {
  // > 0 when pd lies inside the circumcircle of CCW triangle (pa, pb, pc).
  const double adx = pa.x - pd.x, ady = pa.y - pd.y;
  const double bdx = pb.x - pd.x, bdy = pb.y - pd.y;
  const double cdx = pc.x - pd.x, cdy = pc.y - pd.y;
  const double ad2 = adx * adx + ady * ady;
  const double bd2 = bdx * bdx + bdy * bdy;
  const double cd2 = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd2 - cdy * bd2) - ady * (bdx * cd2 - cdx * bd2) +
         ad2 * (bdx * cdy - cdx * bdy);
}

}  // namespace

Delaunay::Delaunay(const std::vector<Vec2>& points) : pts_(points) {
  require_input(pts_.size() >= 3, "triangulation needs at least 3 points");

  // Normalize into the unit box; improves predicate conditioning for UTM-scale
  // coordinates without changing the topology.
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{-lo.x, -lo.y};
  for (const Vec2& p : pts_) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
  std::vector<Vec2> np(pts_.size());
  for (size_t i = 0; i < pts_.size(); ++i)
    np[i] = {(pts_[i].x - lo.x) / span, (pts_[i].y - lo.y) / span};

  const int n = int(np.size());
  // Super-triangle comfortably containing the unit box.
  np.push_back({-10.0, -10.0});
  np.push_back({11.0, -10.0});
  np.push_back({0.5, 15.0});

  std::vector<WorkTri> tris;
  tris.push_back({n, n + 1, n + 2});

  for (int ip = 0; ip < n; ++ip) {
    const Vec2 q = np[size_t(ip)];
    // Collect triangles whose circumcircle contains the new point.
    std::vector<int> bad;
    for (int t = 0; t < int(tris.size()); ++t) {
      const WorkTri& w = tris[size_t(t)];
      if (!w.alive) continue;
      if (incircle(np[size_t(w.a)], np[size_t(w.b)], np[size_t(w.c)], q) > 0.0) bad.push_back(t);
    }
    // Boundary of the cavity: edges appearing exactly once.
    std::map<std::pair<int, int>, int> edge_count;
    for (int t : bad) {
      const WorkTri& w = tris[size_t(t)];
      const int e[3][2] = {{w.a, w.b}, {w.b, w.c}, {w.c, w.a}};
      for (auto& ed : e) {
        auto key = std::minmax(ed[0], ed[1]);
        edge_count[{key.first, key.second}]++;
      }
    }
    for (int t : bad) tris[size_t(t)].alive = false;
    for (int t : bad) {
      const WorkTri& w = tris[size_t(t)];
      const int e[3][2] = {{w.a, w.b}, {w.b, w.c}, {w.c, w.a}};
      for (auto& ed : e) {
        auto key = std::minmax(ed[0], ed[1]);
        if (edge_count[{key.first, key.second}] == 1) tris.push_back({ed[0], ed[1], ip});
      }
    }
  }

  // Strip super-triangle incidence and re-index.
  std::vector<std::array<int, 3>> final_tris;
  for (const WorkTri& w : tris) {
    if (!w.alive) continue;
    if (w.a >= n || w.b >= n || w.c >= n) continue;
    std::array<int, 3> tv = {w.a, w.b, w.c};
    const Vec2 &A = np[size_t(tv[0])], &B = np[size_t(tv[1])], &C = np[size_t(tv[2])];
    if (cross(B - A, C - A) < 0.0) std::swap(tv[1], tv[2]);
    final_tris.push_back(tv);
  }
  require_input(!final_tris.empty(), "triangulation degenerate (collinear points?)");

  tris_.resize(final_tris.size());
  std::map<std::pair<int, int>, std::pair<int, int>> edge_owner;  // edge -> (tri, side)
  for (int t = 0; t < int(final_tris.size()); ++t) {
    tris_[size_t(t)].v = final_tris[size_t(t)];
    tris_[size_t(t)].neighbor = {-1, -1, -1};
  }
  for (int t = 0; t < int(tris_.size()); ++t) {
    for (int s = 0; s < 3; ++s) {
      const int u = tris_[size_t(t)].v[size_t(s)];
      const int v = tris_[size_t(t)].v[size_t((s + 1) % 3)];
      const auto key = std::minmax(u, v);
      auto it = edge_owner.find({key.first, key.second});
      if (it == edge_owner.end()) {
        edge_owner[{key.first, key.second}] = {t, s};
      } else {
        tris_[size_t(t)].neighbor[size_t(s)] = it->second.first;
        tris_[size_t(it->second.first)].neighbor[size_t(it->second.second)] = t;
      }
    }
  }
}

bool Delaunay::barycentric(int tri, Vec2 q, std::array<double, 3>& bary) const {
  const Triangle& t = tris_[size_t(tri)];
  const Vec2 a = pts_[size_t(t.v[0])], b = pts_[size_t(t.v[1])], c = pts_[size_t(t.v[2])];
  const double area = cross(b - a, c - a);
  if (area == 0.0) return false;
  bary[0] = cross(b - q, c - q) / area;
  bary[1] = cross(c - q, a - q) / area;
  bary[2] = cross(a - q, b - q) / area;
  return true;
}

int Delaunay::locate(Vec2 q, std::array<double, 3>& bary, int hint) const {
  if (tris_.empty()) return -1;
  int cur = hint;
  if (cur < 0 || cur >= int(tris_.size())) cur = 0;
  const double eps = -1e-12;
  for (int step = 0; step < int(tris_.size()) + 8; ++step) {
    if (!barycentric(cur, q, bary)) break;
    int worst = -1;
    double worst_w = eps;
    for (int s = 0; s < 3; ++s) {
      if (bary[size_t(s)] < worst_w) {
        worst_w = bary[size_t(s)];
        worst = s;
      }
    }
    if (worst < 0) return cur;
    // bary[s] corresponds to vertex v[s]; the opposite edge is side (s+1).
    const int next = tris_[size_t(cur)].neighbor[size_t((worst + 1) % 3)];
    if (next < 0) return -1;
    cur = next;
  }
  // Walk failed to settle (degenerate geometry): brute-force scan.
  for (int t = 0; t < int(tris_.size()); ++t) {
    if (!barycentric(t, q, bary)) continue;
    if (bary[0] >= eps && bary[1] >= eps && bary[2] >= eps) return t;
  }
  return -1;
}

bool Delaunay::interpolate(Vec2 q, const std::vector<double>& values, double& out, int hint) const {
  std::array<double, 3> bary;
  const int t = locate(q, bary, hint);
  if (t < 0) return false;
  const Triangle& tr = tris_[size_t(t)];
  out = bary[0] * values[size_t(tr.v[0])] + bary[1] * values[size_t(tr.v[1])] +
        bary[2] * values[size_t(tr.v[2])];
  return true;
}

}  // namespace cellscape
