#ifndef MDL_GEOMETRY_H_
#define MDL_GEOMETRY_H_

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace mdl {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 p, Point2 q) { return {p.x + q.x, p.y + q.y}; }
  friend constexpr Point2 operator-(Point2 p, Point2 q) { return {p.x - q.x, p.y - q.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr double cross(Point2 u, Point2 v) { return u.x * v.y - u.y * v.x; }
constexpr double dot(Point2 u, Point2 v) { return u.x * v.x + u.y * v.y; }

// Eight-parameter oriented box: four ordered vertices. Boxes built from
// ObbCenterWHAngle are ordered top-left, top-right, bottom-right,
// bottom-left in the box's own frame.
struct ObbVertices {
  std::array<Point2, 4> v{};

  Point2& a() { return v[0]; }
  Point2& b() { return v[1]; }
  Point2& c() { return v[2]; }
  Point2& d() { return v[3]; }
  const Point2& a() const { return v[0]; }
  const Point2& b() const { return v[1]; }
  const Point2& c() const { return v[2]; }
  const Point2& d() const { return v[3]; }

  // Flattened as (a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y).
  std::array<double, 8> flat() const;
  static ObbVertices from_flat(std::span<const double, 8> xs);

  friend bool operator==(const ObbVertices&, const ObbVertices&) = default;
};

// Five-parameter box. theta is in radians and stored as given.
struct ObbCenterWHAngle {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double theta = 0.0;
};

// Corners of the rotated rectangle. Rotation is x' = x cos t - y sin t,
// y' = x sin t + y cos t applied in image coordinates (y pointing down).
ObbVertices vertices_from_cwha(const ObbCenterWHAngle& box);

// Convex polygon with 3..8 vertices and consistent winding. Only the
// checked factory creates one; zero-area (collinear) polygons are allowed.
class ConvexPolygon {
 public:
  static constexpr std::size_t kMaxVertices = 8;

  // Throws InvalidInputError on wrong size, non-finite or non-convex input.
  static ConvexPolygon from_points(std::span<const Point2> points);
  static ConvexPolygon from_box(const ObbVertices& box);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  // Shoelace area, positive for counter-clockwise (in the x-right, y-up
  // sense) vertex order.
  double signed_area() const;

 private:
  explicit ConvexPolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {}
  friend std::optional<ConvexPolygon> intersect_convex(const ConvexPolygon&, const ConvexPolygon&);

  std::vector<Point2> vertices_;
};

double polygon_area(const ConvexPolygon& p);

// Convex intersection by successive half-plane clipping. Points within
// kClipTolerance of a clip line count as on the line. Returns nullopt when
// the overlap has fewer than three distinct vertices.
std::optional<ConvexPolygon> intersect_convex(const ConvexPolygon& p, const ConvexPolygon& q);

inline constexpr double kClipTolerance = 1e-9;

// Rotated IoU. Returns 0 when the union area is below 1e-12.
double skew_iou(const ObbVertices& p, const ObbVertices& q);

bool is_convex(const ObbVertices& box);

// Convex hull (Andrew's monotone chain), counter-clockwise, collinear
// points dropped.
std::vector<Point2> convex_hull(std::span<const Point2> points);

// Shoelace area of an arbitrary simple polygon (absolute value).
double simple_polygon_area(std::span<const Point2> points);

// Clips any simple polygon to an axis-aligned rectangle.
std::vector<Point2> clip_to_rect(std::span<const Point2> polygon, double x0, double y0,
                                 double x1, double y1);

struct Detection {
  ObbVertices box;
  double score = 0.0;
  int class_id = 0;
};

// Greedy per-class suppression in descending score order (ties keep input
// order). Output is sorted the same way.
std::vector<Detection> rotated_nms(std::span<const Detection> dets, double iou_threshold);
// Same selection, as indices into dets.
std::vector<std::size_t> rotated_nms_indices(std::span<const Detection> dets,
                                             double iou_threshold);

// Similarity transforms applied vertex-wise.
ObbVertices translated(const ObbVertices& box, Point2 t);
ObbVertices scaled(const ObbVertices& box, double s, Point2 origin = {});
ObbVertices rotated(const ObbVertices& box, double angle, Point2 origin = {});
Point2 centroid(const ObbVertices& box);

// Relabels so that vertex i of the result is vertex (i + shift) % 4 of box.
ObbVertices cyclic_shift(const ObbVertices& box, int shift);

}  // namespace mdl

#endif  // MDL_GEOMETRY_H_
