#ifndef MDL_DECODE_H_
#define MDL_DECODE_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mdl/geometry.h"
#include "mdl/heatmap.h"
#include "mdl/patches.h"

namespace mdl {

struct DecodeConfig {
  int top_k = 500;
  double score_min = 0.1;
  double downsample = 4.0;
  int class_id = 0;
};

// Per-cell vectors from the center to vertices a, b, c, d in feature-map
// units: (a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y).
using VertexVectors = std::array<double, 8>;
using CellOffset = std::array<double, 2>;

// Peak cells (maximum of their 3x3 neighbourhood) scoring above
// score_min, best top_k by score with ties in cell order. Each vertex is
// (cell + offset + vector) * downsample.
std::vector<Detection> decode_predictions(const HeatmapGrid& heatmap,
                                          std::span<const VertexVectors> box_field,
                                          std::span<const CellOffset> offset_field,
                                          const DecodeConfig& config = {});

// Detection in original-image coordinates with its source window.
struct DecodedDetection {
  Detection detection;
  std::string image_id;
  double scale = 1.0;
  int x0 = 0;
  int y0 = 0;
};

DecodedDetection to_original_frame(const Detection& local, const PatchWindow& window);

// Per-image, per-class rotated NMS across all windows and scales.
// Non-convex boxes are replaced by their convex hull first. Output groups
// images in order of first appearance, each sorted by score.
std::vector<DecodedDetection> merge_multiscale(std::span<const DecodedDetection> dets,
                                               double nms_threshold = 0.1);

}  // namespace mdl

#endif  // MDL_DECODE_H_
