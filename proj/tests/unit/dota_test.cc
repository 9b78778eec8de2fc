#include "mdl/dota.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mdl/errors.h"

namespace mdl {
namespace {

TEST(ParseAnnotation, PlaneLine) {
  const DotaAnnotation a = parse_annotation("0 0 10 0 10 5 0 5 plane 0\n", "P0001");
  ASSERT_EQ(a.instances.size(), 1u);
  const DotaInstance& i = a.instances[0];
  EXPECT_EQ(i.category, 0);
  EXPECT_FALSE(i.difficult);
  EXPECT_EQ(i.box.c(), (Point2{10, 5}));
  EXPECT_DOUBLE_EQ(polygon_area(ConvexPolygon::from_box(i.box)), 50.0);
  EXPECT_EQ(a.image_id, "P0001");
}

TEST(ParseAnnotation, HeadersOnly) {
  EXPECT_TRUE(parse_annotation("imagesource:GoogleEarth\ngsd:0.146\n").instances.empty());
  EXPECT_TRUE(parse_annotation("").instances.empty());
}

TEST(ParseAnnotation, HeadersThenInstances) {
  const auto a = parse_annotation(
      "imagesource:GoogleEarth\r\ngsd:null\r\n"
      "1.5 2 11 2 11 7.25 1.5 7.25 small-vehicle 1\r\n"
      "\r\n"
      "3 3 4 3 4 4 3 4 swimming-pool 0\r\n");
  ASSERT_EQ(a.instances.size(), 2u);
  EXPECT_EQ(a.instances[0].category, 10);
  EXPECT_TRUE(a.instances[0].difficult);
  EXPECT_EQ(a.instances[1].category, 14);
}

TEST(ParseAnnotation, BadLineIsNamed) {
  const std::string good = "0 0 10 0 10 5 0 5 plane 0\n";
  for (const char* bad : {"0 0 10 0 1O 5 0 5 plane 0\n", "0 0 10 0 10 5 0 plane 0\n",
                          "0 0 10 0 10 5 0 5 airship 0\n", "0 0 10 0 10 5 0 5 plane 2\n"}) {
    try {
      parse_annotation("gsd:1\n" + good + bad + good);
      FAIL() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 3) << bad;
      EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
  }
}

TEST(Categories, FifteenInOrder) {
  EXPECT_EQ(kDotaCategories.size(), 15u);
  EXPECT_EQ(category_id("plane"), 0);
  EXPECT_EQ(category_id("swimming-pool"), 14);
  EXPECT_FALSE(category_id("Plane"));
}

TEST(Task1, ParsesPredictions) {
  const auto p = parse_task1_predictions("P0003 0.87 0 0 4 0 4 2 0 2\nP0004 0.1 1 1 2 1 2 2 1 2\n", 3);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].image_id, "P0003");
  EXPECT_DOUBLE_EQ(p[0].detection.score, 0.87);
  EXPECT_EQ(p[1].detection.class_id, 3);
  EXPECT_THROW(parse_task1_predictions("P0003 0.8 0 0 4 0 4 2 0\n", 0), ParseError);
}

TEST(LoadDirs, ReadsAndNamesFiles) {
  const auto root = std::filesystem::temp_directory_path() / "mdl_dota_test";
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root / "gt");
  std::filesystem::create_directories(root / "pred");
  std::ofstream(root / "gt" / "b.txt") << "0 0 2 0 2 2 0 2 ship 0\n";
  std::ofstream(root / "gt" / "a.txt") << "gsd:1\n";
  std::ofstream(root / "pred" / "Task1_ship.txt") << "b 0.5 0 0 2 0 2 2 0 2\n";
  const auto gts = load_annotation_dir(root / "gt");
  ASSERT_EQ(gts.size(), 2u);
  EXPECT_EQ(gts[0].image_id, "a");
  EXPECT_EQ(gts[1].instances.size(), 1u);
  const auto preds = load_prediction_dir(root / "pred");
  ASSERT_EQ(preds.size(), 1u);
  EXPECT_EQ(preds[0].detection.class_id, 1);

  std::ofstream(root / "gt" / "c.txt") << "0 0 2 0 2 2 0 2 ship 0\n0 0 x 0 2 2 0 2 ship 0\n";
  try {
    load_annotation_dir(root / "gt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("c.txt"), std::string::npos);
  }
  std::ofstream(root / "pred" / "Task1_zeppelin.txt") << "";
  EXPECT_THROW(load_prediction_dir(root / "pred"), InvalidInputError);
  EXPECT_THROW(load_annotation_dir(root / "nope"), IoError);
  std::filesystem::remove_all(root);
}

TEST(Convexified, KeepsConvexAndHullsBowtie) {
  const ObbVertices sq = vertices_from_cwha({1, 1, 2, 2, 0.3});
  EXPECT_EQ(convexified(sq), sq);
  const ObbVertices bowtie{{Point2{0, 0}, Point2{2, 2}, Point2{2, 0}, Point2{0, 2}}};
  const ObbVertices fixed = convexified(bowtie);
  EXPECT_TRUE(is_convex(fixed));
  EXPECT_DOUBLE_EQ(polygon_area(ConvexPolygon::from_box(fixed)), 4.0);
  const ObbVertices dart{{Point2{0, 0}, Point2{4, 0}, Point2{1, 1}, Point2{0, 4}}};
  const ObbVertices tri = convexified(dart);
  EXPECT_TRUE(is_convex(tri));
  EXPECT_DOUBLE_EQ(polygon_area(ConvexPolygon::from_box(tri)), 8.0);
}

}  // namespace
}  // namespace mdl
