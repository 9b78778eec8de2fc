#ifndef MDL_DOTA_H_
#define MDL_DOTA_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdl/geometry.h"

namespace mdl {

inline constexpr int kNumDotaCategories = 15;

// DOTA-v1.0 category names; the index is the class id used throughout.
inline constexpr std::array<std::string_view, kNumDotaCategories> kDotaCategories = {
    "plane",           "ship",         "storage-tank",      "baseball-diamond",
    "tennis-court",    "basketball-court", "ground-track-field", "harbor",
    "bridge",          "large-vehicle", "small-vehicle",    "helicopter",
    "roundabout",      "soccer-ball-field", "swimming-pool"};

std::optional<int> category_id(std::string_view name);

struct DotaInstance {
  ObbVertices box;
  int category = 0;
  bool difficult = false;
};

struct DotaAnnotation {
  std::string image_id;
  std::vector<DotaInstance> instances;
};

// DOTA v1.0 label text: optional "imagesource:" / "gsd:" lines, then
// "x1 y1 x2 y2 x3 y3 x4 y4 category difficult" per instance. Throws
// ParseError naming the 1-based line.
DotaAnnotation parse_annotation(std::string_view text, std::string image_id = {});

// Every *.txt under dir, sorted by file name; the image id is the stem.
std::vector<DotaAnnotation> load_annotation_dir(const std::filesystem::path& dir);

struct ImageDetection {
  std::string image_id;
  Detection detection;
};

// Task-1 submission lines "image_id score x1 y1 ... x4 y4" for one class.
std::vector<ImageDetection> parse_task1_predictions(std::string_view text, int class_id);

// One file per class named "Task1_<category>.txt" or "<category>.txt".
std::vector<ImageDetection> load_prediction_dir(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);

// Box usable by the convex geometry routines: the box itself when convex,
// otherwise its convex hull padded to four vertices by repetition.
ObbVertices convexified(const ObbVertices& box);

}  // namespace mdl

#endif  // MDL_DOTA_H_
