#include "mdl/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mdl/errors.h"

namespace mdl {
namespace {

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double shoelace(std::span<const Point2> pts) {
  double twice = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    twice += cross(pts[i], pts[(i + 1) % pts.size()]);
  }
  return 0.5 * twice;
}

// Convexity of a closed vertex loop: all turns share a sign (zero turns
// allowed) and the loop winds exactly once.
bool loop_is_convex(std::span<const Point2> pts) {
  std::vector<Point2> loop;
  for (const Point2& p : pts) {
    if (loop.empty() || !(loop.back() == p)) loop.push_back(p);
  }
  while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
  if (loop.size() < 3) return true;

  const std::size_t n = loop.size();
  bool has_pos = false;
  bool has_neg = false;
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e0 = loop[(i + 1) % n] - loop[i];
    const Point2 e1 = loop[(i + 2) % n] - loop[(i + 1) % n];
    const double c = cross(e0, e1);
    const double tol = 1e-12 * std::hypot(e0.x, e0.y) * std::hypot(e1.x, e1.y);
    if (c > tol) has_pos = true;
    if (c < -tol) has_neg = true;
    turning += std::atan2(c, dot(e0, e1));
  }
  if (has_pos && has_neg) return false;
  if (!has_pos && !has_neg) return true;  // collinear, zero area
  return std::abs(std::abs(turning) - 2.0 * std::numbers::pi) < 1e-6;
}

// One Sutherland-Hodgman pass against the directed line a->b, keeping the
// left side.
std::vector<Point2> clip_half_plane(const std::vector<Point2>& subject, Point2 a, Point2 b) {
  std::vector<Point2> out;
  if (subject.empty()) return out;
  const Point2 edge = b - a;
  const double len = std::hypot(edge.x, edge.y);
  std::vector<double> dist(subject.size());
  for (std::size_t i = 0; i < subject.size(); ++i) {
    double d = cross(edge, subject[i] - a) / len;
    if (std::abs(d) < kClipTolerance) d = 0.0;
    dist[i] = d;
  }
  out.reserve(subject.size() + 1);
  for (std::size_t i = 0; i < subject.size(); ++i) {
    const std::size_t j = (i + 1) % subject.size();
    const Point2 cur = subject[i];
    const Point2 next = subject[j];
    const double dc = dist[i];
    const double dn = dist[j];
    if (dc >= 0.0) out.push_back(cur);
    if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
      const double t = dc / (dc - dn);
      out.push_back(cur + t * (next - cur));
    }
  }
  return out;
}

std::vector<Point2> dedupe_loop(std::vector<Point2> pts) {
  std::vector<Point2> out;
  auto close = [](Point2 p, Point2 q) {
    return std::abs(p.x - q.x) < kClipTolerance && std::abs(p.y - q.y) < kClipTolerance;
  };
  for (const Point2& p : pts) {
    if (out.empty() || !close(out.back(), p)) out.push_back(p);
  }
  while (out.size() > 1 && close(out.front(), out.back())) out.pop_back();
  return out;
}

std::vector<Point2> ccw(std::span<const Point2> pts) {
  std::vector<Point2> out(pts.begin(), pts.end());
  if (shoelace(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::array<double, 8> ObbVertices::flat() const {
  return {v[0].x, v[0].y, v[1].x, v[1].y, v[2].x, v[2].y, v[3].x, v[3].y};
}

ObbVertices ObbVertices::from_flat(std::span<const double, 8> xs) {
  return ObbVertices{{Point2{xs[0], xs[1]}, Point2{xs[2], xs[3]}, Point2{xs[4], xs[5]},
                      Point2{xs[6], xs[7]}}};
}

ObbVertices vertices_from_cwha(const ObbCenterWHAngle& box) {
  if (!std::isfinite(box.cx) || !std::isfinite(box.cy) || !std::isfinite(box.w) ||
      !std::isfinite(box.h) || !std::isfinite(box.theta)) {
    throw InvalidInputError("vertices_from_cwha: non-finite box parameter");
  }
  if (box.w < 0.0 || box.h < 0.0) {
    throw InvalidInputError("vertices_from_cwha: negative width or height");
  }
  const double c = std::cos(box.theta);
  const double s = std::sin(box.theta);
  const double hw = 0.5 * box.w;
  const double hh = 0.5 * box.h;
  const std::array<Point2, 4> local = {Point2{-hw, -hh}, Point2{hw, -hh}, Point2{hw, hh},
                                       Point2{-hw, hh}};
  ObbVertices out;
  for (std::size_t i = 0; i < 4; ++i) {
    out.v[i] = {box.cx + local[i].x * c - local[i].y * s,
                box.cy + local[i].x * s + local[i].y * c};
  }
  return out;
}

ConvexPolygon ConvexPolygon::from_points(std::span<const Point2> points) {
  if (points.size() < 3 || points.size() > kMaxVertices) {
    throw InvalidInputError("ConvexPolygon: need 3.." + std::to_string(kMaxVertices) +
                            " vertices, got " + std::to_string(points.size()));
  }
  for (const Point2& p : points) {
    if (!finite(p)) throw InvalidInputError("ConvexPolygon: non-finite vertex");
  }
  if (!loop_is_convex(points)) throw InvalidInputError("ConvexPolygon: vertices are not convex");
  return ConvexPolygon(std::vector<Point2>(points.begin(), points.end()));
}

ConvexPolygon ConvexPolygon::from_box(const ObbVertices& box) { return from_points(box.v); }

double ConvexPolygon::signed_area() const { return shoelace(vertices_); }

double polygon_area(const ConvexPolygon& p) { return std::abs(p.signed_area()); }

std::optional<ConvexPolygon> intersect_convex(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<Point2> subject = ccw(p.vertices());
  const std::vector<Point2> clip = ccw(q.vertices());
  for (std::size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
    const Point2 a = clip[i];
    const Point2 b = clip[(i + 1) % clip.size()];
    if (a == b) continue;
    subject = clip_half_plane(subject, a, b);
  }
  subject = dedupe_loop(std::move(subject));
  if (subject.size() < 3) return std::nullopt;
  return ConvexPolygon(std::move(subject));
}

bool is_convex(const ObbVertices& box) {
  for (const Point2& p : box.v) {
    if (!finite(p)) return false;
  }
  return loop_is_convex(box.v);
}

double skew_iou(const ObbVertices& p, const ObbVertices& q) {
  const ConvexPolygon pp = ConvexPolygon::from_box(p);
  const ConvexPolygon qq = ConvexPolygon::from_box(q);
  const double area_p = polygon_area(pp);
  const double area_q = polygon_area(qq);
  const auto inter = intersect_convex(pp, qq);
  const double area_i = inter ? polygon_area(*inter) : 0.0;
  const double uni = area_p + area_q - area_i;
  if (uni < 1e-12) return 0.0;
  return std::clamp(area_i / uni, 0.0, 1.0);
}

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](Point2 p, Point2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double simple_polygon_area(std::span<const Point2> points) {
  return std::abs(shoelace(points));
}

std::vector<Point2> clip_to_rect(std::span<const Point2> polygon, double x0, double y0,
                                 double x1, double y1) {
  std::vector<Point2> out = ccw(polygon);
  const std::array<Point2, 4> rect = {Point2{x0, y0}, Point2{x1, y0}, Point2{x1, y1},
                                      Point2{x0, y1}};
  for (std::size_t i = 0; i < 4 && !out.empty(); ++i) {
    out = clip_half_plane(out, rect[i], rect[(i + 1) % 4]);
  }
  return out;
}

std::vector<std::size_t> rotated_nms_indices(std::span<const Detection> dets,
                                             double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw InvalidInputError("rotated_nms: iou_threshold must lie in [0, 1]");
  }
  for (const Detection& d : dets) {
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      throw InvalidInputError("rotated_nms: detection score outside [0, 1]");
    }
  }
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return dets[i].score > dets[j].score; });

  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const Detection& cand = dets[idx];
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return dets[k].class_id == cand.class_id && skew_iou(dets[k].box, cand.box) > iou_threshold;
    });
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<Detection> rotated_nms(std::span<const Detection> dets, double iou_threshold) {
  std::vector<Detection> out;
  for (std::size_t i : rotated_nms_indices(dets, iou_threshold)) out.push_back(dets[i]);
  return out;
}

ObbVertices translated(const ObbVertices& box, Point2 t) {
  ObbVertices out = box;
  for (Point2& p : out.v) p = p + t;
  return out;
}

ObbVertices scaled(const ObbVertices& box, double s, Point2 origin) {
  ObbVertices out = box;
  for (Point2& p : out.v) p = origin + s * (p - origin);
  return out;
}

ObbVertices rotated(const ObbVertices& box, double angle, Point2 origin) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  ObbVertices out = box;
  for (Point2& p : out.v) {
    const Point2 r = p - origin;
    p = origin + Point2{r.x * c - r.y * s, r.x * s + r.y * c};
  }
  return out;
}

Point2 centroid(const ObbVertices& box) {
  Point2 sum{};
  for (const Point2& p : box.v) sum = sum + p;
  return 0.25 * sum;
}

ObbVertices cyclic_shift(const ObbVertices& box, int shift) {
  const int k = ((shift % 4) + 4) % 4;
  ObbVertices out;
  for (int i = 0; i < 4; ++i) out.v[i] = box.v[(i + k) % 4];
  return out;
}

}  // namespace mdl
