#include "mdl/decode.h"

#include <algorithm>
#include <map>

#include "mdl/dota.h"
#include "mdl/errors.h"

namespace mdl {
namespace {

bool is_peak(const HeatmapGrid& grid, int x, int y) {
  const double v = grid.at(x, y);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const int nx = x + dx;
      const int ny = y + dy;
      if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= grid.width() || ny >= grid.height()) {
        continue;
      }
      if (grid.at(nx, ny) > v) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<Detection> decode_predictions(const HeatmapGrid& heatmap,
                                          std::span<const VertexVectors> box_field,
                                          std::span<const CellOffset> offset_field,
                                          const DecodeConfig& config) {
  if (box_field.size() != heatmap.size() || offset_field.size() != heatmap.size()) {
    throw InvalidInputError("decode_predictions: field sizes must match the heatmap");
  }
  if (config.top_k < 0 || !(config.downsample > 0.0)) {
    throw InvalidInputError("decode_predictions: invalid configuration");
  }
  std::vector<std::size_t> candidates;
  for (int y = 0; y < heatmap.height(); ++y) {
    for (int x = 0; x < heatmap.width(); ++x) {
      if (heatmap.at(x, y) > config.score_min && is_peak(heatmap, x, y)) {
        candidates.push_back(heatmap.index(x, y));
      }
    }
  }
  const auto scores = heatmap.values();
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t i, std::size_t j) { return scores[i] > scores[j]; });
  if (candidates.size() > static_cast<std::size_t>(config.top_k)) {
    candidates.resize(static_cast<std::size_t>(config.top_k));
  }

  std::vector<Detection> out;
  out.reserve(candidates.size());
  for (std::size_t idx : candidates) {
    const double cell_x = static_cast<double>(idx % static_cast<std::size_t>(heatmap.width()));
    const double cell_y = static_cast<double>(idx / static_cast<std::size_t>(heatmap.width()));
    // Add cell, offset and vertex vector first, then scale up.
    const double center_x = cell_x + offset_field[idx][0];
    const double center_y = cell_y + offset_field[idx][1];
    Detection det;
    det.score = scores[idx];
    det.class_id = config.class_id;
    for (std::size_t k = 0; k < 4; ++k) {
      det.box.v[k] = {(center_x + box_field[idx][2 * k]) * config.downsample,
                      (center_y + box_field[idx][2 * k + 1]) * config.downsample};
    }
    out.push_back(det);
  }
  return out;
}

DecodedDetection to_original_frame(const Detection& local, const PatchWindow& window) {
  DecodedDetection out;
  out.detection = local;
  out.detection.box = to_original(local.box, window);
  out.image_id = window.image_id;
  out.scale = window.scale;
  out.x0 = window.x0;
  out.y0 = window.y0;
  return out;
}

std::vector<DecodedDetection> merge_multiscale(std::span<const DecodedDetection> dets,
                                               double nms_threshold) {
  std::vector<std::string> image_order;
  std::map<std::string, std::vector<std::size_t>> by_image;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    auto [it, inserted] = by_image.try_emplace(dets[i].image_id);
    if (inserted) image_order.push_back(dets[i].image_id);
    it->second.push_back(i);
  }

  std::vector<DecodedDetection> out;
  for (const std::string& image : image_order) {
    const auto& members = by_image[image];
    std::vector<Detection> boxes;
    boxes.reserve(members.size());
    for (std::size_t i : members) {
      Detection d = dets[i].detection;
      d.box = convexified(d.box);
      boxes.push_back(d);
    }
    for (std::size_t pos : rotated_nms_indices(boxes, nms_threshold)) {
      DecodedDetection d = dets[members[pos]];
      d.detection.box = boxes[pos].box;
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace mdl
