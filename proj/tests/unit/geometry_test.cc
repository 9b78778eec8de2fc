#include "mdl/geometry.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mdl/errors.h"
#include "support/oracles.h"

namespace mdl {
namespace {

constexpr double kPi = std::numbers::pi;

ObbVertices unit_square(double x = 0.0, double y = 0.0) {
  return {{Point2{x, y}, Point2{x + 1, y}, Point2{x + 1, y + 1}, Point2{x, y + 1}}};
}

void expect_point(Point2 p, double x, double y, double tol = 1e-12) {
  EXPECT_NEAR(p.x, x, tol);
  EXPECT_NEAR(p.y, y, tol);
}

TEST(VerticesFromCwha, AxisAlignedSquare) {
  const ObbVertices v = vertices_from_cwha({0, 0, 2, 2, 0});
  expect_point(v.a(), -1, -1);
  expect_point(v.b(), 1, -1);
  expect_point(v.c(), 1, 1);
  expect_point(v.d(), -1, 1);
}

TEST(VerticesFromCwha, QuarterTurnCyclesLabels) {
  const ObbVertices v0 = vertices_from_cwha({0, 0, 2, 2, 0});
  const ObbVertices v90 = vertices_from_cwha({0, 0, 2, 2, kPi / 2});
  for (int i = 0; i < 4; ++i) {
    expect_point(v90.v[i], v0.v[(i + 1) % 4].x, v0.v[(i + 1) % 4].y, 1e-12);
  }
}

TEST(VerticesFromCwha, MatchesBruteRotation) {
  const ObbVertices v = vertices_from_cwha({3, 4, 4, 2, kPi / 6});
  const auto brute = testing::brute_corners(3, 4, 4, 2, kPi / 6);
  for (int i = 0; i < 4; ++i) expect_point(v.v[i], brute[i].x, brute[i].y, 1e-12);
}

TEST(VerticesFromCwha, RejectsBadInput) {
  EXPECT_THROW(vertices_from_cwha({std::nan(""), 0, 1, 1, 0}), InvalidInputError);
  EXPECT_THROW(vertices_from_cwha({0, 0, 1, 1, std::numeric_limits<double>::infinity()}),
               InvalidInputError);
  EXPECT_THROW(vertices_from_cwha({0, 0, -1, 1, 0}), InvalidInputError);
}

TEST(PolygonArea, Basics) {
  EXPECT_DOUBLE_EQ(polygon_area(ConvexPolygon::from_box(unit_square())), 1.0);
  const std::array<Point2, 3> tri = {Point2{0, 0}, Point2{1, 0}, Point2{0, 1}};
  EXPECT_DOUBLE_EQ(polygon_area(ConvexPolygon::from_points(tri)), 0.5);
  const std::array<Point2, 3> tri_cw = {Point2{0, 0}, Point2{0, 1}, Point2{1, 0}};
  EXPECT_DOUBLE_EQ(polygon_area(ConvexPolygon::from_points(tri_cw)), 0.5);
  const ObbVertices big = scaled(vertices_from_cwha({1, 2, 3, 1.5, 0.4}), 2.0);
  EXPECT_NEAR(polygon_area(ConvexPolygon::from_box(big)), 4.0 * 4.5, 1e-12);
}

TEST(ConvexPolygon, CheckedConstruction) {
  const std::array<Point2, 2> two = {Point2{0, 0}, Point2{1, 0}};
  EXPECT_THROW(ConvexPolygon::from_points(two), InvalidInputError);
  const std::array<Point2, 4> bowtie = {Point2{0, 0}, Point2{1, 1}, Point2{1, 0}, Point2{0, 1}};
  EXPECT_THROW(ConvexPolygon::from_points(bowtie), InvalidInputError);
  const std::array<Point2, 4> dart = {Point2{0, 0}, Point2{2, 0}, Point2{0.5, 0.5},
                                      Point2{0, 2}};
  EXPECT_THROW(ConvexPolygon::from_points(dart), InvalidInputError);
  const std::array<Point2, 3> nan_pt = {Point2{0, 0}, Point2{std::nan(""), 0}, Point2{0, 1}};
  EXPECT_THROW(ConvexPolygon::from_points(nan_pt), InvalidInputError);
  // Zero-width boxes are convex, just empty.
  EXPECT_NO_THROW(ConvexPolygon::from_box(vertices_from_cwha({0, 0, 0, 3, 0.3})));
}

TEST(IntersectConvex, SelfIntersection) {
  const auto p = ConvexPolygon::from_box(vertices_from_cwha({5, 5, 3, 2, 0.7}));
  const auto inter = intersect_convex(p, p);
  ASSERT_TRUE(inter.has_value());
  EXPECT_NEAR(polygon_area(*inter), polygon_area(p), 1e-9);
}

TEST(IntersectConvex, ShiftedSquareMatchesRectangleOverlap) {
  const auto inter = intersect_convex(ConvexPolygon::from_box(unit_square()),
                                      ConvexPolygon::from_box(unit_square(0.5, 0)));
  ASSERT_TRUE(inter.has_value());
  // Overlap [0.5, 1] x [0, 1].
  EXPECT_NEAR(polygon_area(*inter), 0.5 * 1.0, 1e-12);
}

TEST(IntersectConvex, DisjointAndTouching) {
  EXPECT_FALSE(intersect_convex(ConvexPolygon::from_box(unit_square()),
                                ConvexPolygon::from_box(unit_square(3, 3)))
                   .has_value());
  // Shared edge only.
  const auto touching = intersect_convex(ConvexPolygon::from_box(unit_square()),
                                         ConvexPolygon::from_box(unit_square(1, 0)));
  EXPECT_TRUE(!touching.has_value() || polygon_area(*touching) < 1e-12);
}

TEST(IntersectConvex, MixedWinding) {
  ObbVertices cw = unit_square();
  std::swap(cw.v[1], cw.v[3]);
  const auto inter = intersect_convex(ConvexPolygon::from_box(cw),
                                      ConvexPolygon::from_box(unit_square(0.5, 0.5)));
  ASSERT_TRUE(inter.has_value());
  EXPECT_NEAR(polygon_area(*inter), 0.25, 1e-12);
}

TEST(SkewIou, Examples) {
  const ObbVertices p = vertices_from_cwha({10, 10, 6, 2, 0.3});
  EXPECT_DOUBLE_EQ(skew_iou(p, p), 1.0);
  EXPECT_NEAR(skew_iou(unit_square(), unit_square(0.5, 0)), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(skew_iou(unit_square(), unit_square(0.5, 0)),
              testing::raster_iou(unit_square(), unit_square(0.5, 0), 1000, 7), 2e-3);
  EXPECT_EQ(skew_iou(unit_square(), unit_square(5, 5)), 0.0);
}

TEST(SkewIou, ScaleInvariant) {
  const ObbVertices p = vertices_from_cwha({3, 1, 4, 2, 0.2});
  const ObbVertices q = vertices_from_cwha({3.5, 1.2, 3, 2.5, -0.4});
  EXPECT_NEAR(skew_iou(scaled(p, 2.0), scaled(q, 2.0)), skew_iou(p, q), 1e-12);
}

TEST(SkewIou, ZeroAreaBoxes) {
  const ObbVertices line = vertices_from_cwha({0, 0, 0, 2, 0});
  EXPECT_EQ(skew_iou(line, line), 0.0);
  EXPECT_EQ(skew_iou(line, vertices_from_cwha({0, 0, 2, 2, 0})), 0.0);
}

TEST(SkewIou, RejectsNonConvex) {
  const ObbVertices bowtie{{Point2{0, 0}, Point2{1, 1}, Point2{1, 0}, Point2{0, 1}}};
  EXPECT_THROW(skew_iou(bowtie, unit_square()), InvalidInputError);
}

class SkewIouProperties : public ::testing::Test {
 protected:
  ObbVertices random_box() {
    std::uniform_real_distribution<double> pos(0, 100), side(1, 30), ang(0, 2 * kPi);
    return vertices_from_cwha({pos(rng_), pos(rng_), side(rng_), side(rng_), ang(rng_)});
  }
  ObbVertices nearby(const ObbVertices& b) {
    std::uniform_real_distribution<double> jitter(-8, 8), side(1, 30), ang(0, 2 * kPi);
    const Point2 c = centroid(b);
    return vertices_from_cwha({c.x + jitter(rng_), c.y + jitter(rng_), side(rng_), side(rng_),
                               ang(rng_)});
  }
  std::mt19937_64 rng_{20240611};
};

TEST_F(SkewIouProperties, SymmetricBoundedAndSelfOne) {
  for (int i = 0; i < 500; ++i) {
    const ObbVertices p = random_box();
    const ObbVertices q = i % 2 ? nearby(p) : random_box();
    const double pq = skew_iou(p, q);
    EXPECT_NEAR(pq, skew_iou(q, p), 1e-12);
    EXPECT_GE(pq, 0.0);
    EXPECT_LE(pq, 1.0);
    EXPECT_NEAR(skew_iou(p, p), 1.0, 1e-12);
  }
}

TEST_F(SkewIouProperties, IntersectionNoLargerThanEitherBox) {
  for (int i = 0; i < 500; ++i) {
    const ObbVertices p = random_box();
    const ObbVertices q = nearby(p);
    const auto pp = ConvexPolygon::from_box(p);
    const auto qq = ConvexPolygon::from_box(q);
    const auto inter = intersect_convex(pp, qq);
    const double a = inter ? polygon_area(*inter) : 0.0;
    EXPECT_LE(a, std::min(polygon_area(pp), polygon_area(qq)) + 1e-12);
  }
}

TEST_F(SkewIouProperties, SimilarityInvariant) {
  std::uniform_real_distribution<double> t(-500, 500), ang(0, 2 * kPi), s(0.01, 100);
  for (int i = 0; i < 500; ++i) {
    const ObbVertices p = random_box();
    const ObbVertices q = nearby(p);
    const double angle = ang(rng_);
    const double scale = s(rng_);
    const Point2 shift{t(rng_), t(rng_)};
    auto T = [&](const ObbVertices& b) { return translated(scaled(rotated(b, angle), scale), shift); };
    EXPECT_NEAR(skew_iou(T(p), T(q)), skew_iou(p, q), 1e-9);
  }
}

TEST(RotatedNms, Examples) {
  const ObbVertices box = vertices_from_cwha({10, 10, 4, 4, 0.1});
  {
    const std::vector<Detection> dets = {{box, 0.8, 0}, {box, 0.9, 0}};
    const auto kept = rotated_nms(dets, 0.1);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0].score, 0.9);
  }
  {
    const std::vector<Detection> dets = {{box, 0.9, 0},
                                         {translated(box, {50, 0}), 0.8, 0}};
    EXPECT_EQ(rotated_nms(dets, 0.1).size(), 2u);
  }
  {
    const std::vector<Detection> dets = {{unit_square(), 0.9, 0}, {unit_square(0.5, 0), 0.7, 0}};
    const auto kept = rotated_nms(dets, 0.1);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0].score, 0.9);
  }
}

TEST(RotatedNms, PerClassAndTieOrder) {
  const ObbVertices box = vertices_from_cwha({0, 0, 2, 2, 0});
  const std::vector<Detection> dets = {{box, 0.5, 1}, {box, 0.5, 0}, {box, 0.5, 1}};
  const auto idx = rotated_nms_indices(dets, 0.1);
  ASSERT_EQ(idx.size(), 2u);
  EXPECT_EQ(idx[0], 0u);
  EXPECT_EQ(idx[1], 1u);
}

TEST(RotatedNms, RejectsBadThreshold) {
  EXPECT_THROW(rotated_nms({}, 1.5), InvalidInputError);
  EXPECT_THROW(rotated_nms({}, -0.1), InvalidInputError);
}

TEST(RotatedNms, KeptSetRespectsThreshold) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pos(0, 40), side(2, 12), ang(0, kPi), score(0, 1);
  std::vector<Detection> dets;
  for (int i = 0; i < 200; ++i) {
    dets.push_back({vertices_from_cwha({pos(rng), pos(rng), side(rng), side(rng), ang(rng)}),
                    score(rng), i % 3});
  }
  for (double thr : {0.0, 0.1, 0.5}) {
    const auto kept = rotated_nms(dets, thr);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (i > 0) EXPECT_GE(kept[i - 1].score, kept[i].score);
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        if (kept[i].class_id == kept[j].class_id) {
          EXPECT_LE(skew_iou(kept[i].box, kept[j].box), thr);
        }
      }
    }
  }
}

TEST(ConvexHull, DropsInteriorPoint) {
  const std::array<Point2, 5> pts = {Point2{0, 0}, Point2{2, 0}, Point2{1, 0.5}, Point2{2, 2},
                                     Point2{0, 2}};
  EXPECT_EQ(convex_hull(pts).size(), 4u);
}

TEST(ClipToRect, ClipsSimplePolygon) {
  const auto clipped = clip_to_rect(unit_square(0.5, 0.5).v, 0, 0, 1, 1);
  EXPECT_NEAR(simple_polygon_area(clipped), 0.25, 1e-12);
}

}  // namespace
}  // namespace mdl
