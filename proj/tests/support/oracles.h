#ifndef MDL_TESTS_ORACLES_H_
#define MDL_TESTS_ORACLES_H_

// Independent reference computations for tests. Nothing here calls the
// clipping, covariance or loss code it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mdl/geometry.h"

namespace mdl::testing {

// Corner i of a w x h rectangle centered at (cx, cy) rotated by theta,
// built from an explicit 2x2 rotation matrix.
inline std::array<Point2, 4> brute_corners(double cx, double cy, double w, double h,
                                           double theta) {
  const double r[2][2] = {{std::cos(theta), -std::sin(theta)},
                          {std::sin(theta), std::cos(theta)}};
  const double local[4][2] = {{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}};
  std::array<Point2, 4> out{};
  for (int i = 0; i < 4; ++i) {
    out[i].x = cx + r[0][0] * local[i][0] + r[0][1] * local[i][1];
    out[i].y = cy + r[1][0] * local[i][0] + r[1][1] * local[i][1];
  }
  return out;
}

// Axis-aligned rectangle IoU from interval overlap.
inline double rect_iou(double ax0, double ay0, double ax1, double ay1, double bx0, double by0,
                       double bx1, double by1) {
  const double iw = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
  const double ih = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
  const double inter = iw * ih;
  const double uni = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

// Half-plane test against every edge; works for either winding.
inline bool inside_convex_quad(const ObbVertices& box, Point2 p) {
  bool pos = false;
  bool neg = false;
  for (int i = 0; i < 4; ++i) {
    const Point2 a = box.v[i];
    const Point2 b = box.v[(i + 1) % 4];
    const double c = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (c > 0) pos = true;
    if (c < 0) neg = true;
  }
  return !(pos && neg);
}

// Stratified (jittered grid) rasterization of IoU over the joint bounding
// box, grid x grid samples.
inline double raster_iou(const ObbVertices& p, const ObbVertices& q, int grid,
                         std::uint64_t seed) {
  double x0 = p.v[0].x, x1 = p.v[0].x, y0 = p.v[0].y, y1 = p.v[0].y;
  for (const auto* box : {&p, &q}) {
    for (const Point2& v : box->v) {
      x0 = std::min(x0, v.x);
      x1 = std::max(x1, v.x);
      y0 = std::min(y0, v.y);
      y1 = std::max(y1, v.y);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double dx = (x1 - x0) / grid;
  const double dy = (y1 - y0) / grid;
  std::int64_t both = 0;
  std::int64_t either = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Point2 s{x0 + (i + u(rng)) * dx, y0 + (j + u(rng)) * dy};
      const bool in_p = inside_convex_quad(p, s);
      const bool in_q = inside_convex_quad(q, s);
      both += in_p && in_q;
      either += in_p || in_q;
    }
  }
  return either > 0 ? static_cast<double>(both) / static_cast<double>(either) : 0.0;
}

// Plain 11-point VOC interpolation written out longhand.
inline double eleven_point_ap(const std::vector<bool>& is_tp, int n_gt) {
  std::vector<double> prec;
  std::vector<double> rec;
  int tp = 0;
  for (std::size_t i = 0; i < is_tp.size(); ++i) {
    tp += is_tp[i] ? 1 : 0;
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    rec.push_back(static_cast<double>(tp) / n_gt);
  }
  double ap = 0.0;
  for (int k = 0; k <= 10; ++k) {
    double p = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (rec[i] >= k / 10.0 && prec[i] > p) p = prec[i];
    }
    ap += p / 11.0;
  }
  return ap;
}

}  // namespace mdl::testing

#endif  // MDL_TESTS_ORACLES_H_
