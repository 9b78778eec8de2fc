#include "mdl/evaluate.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "mdl/errors.h"

namespace mdl {
namespace {

struct GtEntry {
  ObbVertices box;
  bool difficult = false;
  bool claimed = false;
};

// Returns nullopt when the class has no non-difficult ground truth.
std::optional<double> class_ap(int cls, std::span<const DotaAnnotation> gts,
                               std::span<const ImageDetection> preds, const EvalConfig& config) {
  std::map<std::string, std::vector<GtEntry>> by_image;
  std::size_t positives = 0;
  for (const DotaAnnotation& ann : gts) {
    for (const DotaInstance& inst : ann.instances) {
      if (inst.category != cls) continue;
      by_image[ann.image_id].push_back({convexified(inst.box), inst.difficult, false});
      if (!inst.difficult) ++positives;
    }
  }
  if (positives == 0) return std::nullopt;

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].detection.class_id == cls) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].detection.score > preds[b].detection.score;
  });

  std::vector<double> precision;
  std::vector<double> recall;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t idx : order) {
    const ImageDetection& pred = preds[idx];
    const ObbVertices box = convexified(pred.detection.box);
    GtEntry* best = nullptr;
    double best_iou = -1.0;
    if (auto it = by_image.find(pred.image_id); it != by_image.end()) {
      for (GtEntry& gt : it->second) {
        const double iou = skew_iou(box, gt.box);
        if (iou > best_iou) {
          best_iou = iou;
          best = &gt;
        }
      }
    }
    if (best != nullptr && best_iou >= config.iou_threshold) {
      if (best->difficult) continue;
      if (!best->claimed) {
        best->claimed = true;
        ++tp;
      } else {
        ++fp;
      }
    } else {
      ++fp;
    }
    recall.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
  }
  return average_precision(precision, recall, config.interpolation);
}

}  // namespace

double average_precision(std::span<const double> precision, std::span<const double> recall,
                         ApInterpolation interpolation) {
  if (precision.size() != recall.size()) {
    throw InvalidInputError("average_precision: precision/recall length mismatch");
  }
  if (interpolation == ApInterpolation::kElevenPoint) {
    double sum = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double t = i / 10.0;
      double best = 0.0;
      for (std::size_t k = 0; k < recall.size(); ++k) {
        if (recall[k] >= t) best = std::max(best, precision[k]);
      }
      sum += best;
    }
    return sum / 11.0;
  }
  // All-point: area under the monotone precision envelope.
  std::vector<double> mrec{0.0};
  std::vector<double> mpre{0.0};
  mrec.insert(mrec.end(), recall.begin(), recall.end());
  mpre.insert(mpre.end(), precision.begin(), precision.end());
  mrec.push_back(1.0);
  mpre.push_back(0.0);
  for (std::size_t i = mpre.size() - 1; i > 0; --i) mpre[i - 1] = std::max(mpre[i - 1], mpre[i]);
  double ap = 0.0;
  for (std::size_t i = 1; i < mrec.size(); ++i) {
    if (mrec[i] != mrec[i - 1]) ap += (mrec[i] - mrec[i - 1]) * mpre[i];
  }
  return ap;
}

EvalResult evaluate_map(std::span<const DotaAnnotation> gts,
                        std::span<const ImageDetection> preds, const EvalConfig& config) {
  if (!(config.iou_threshold >= 0.0 && config.iou_threshold <= 1.0)) {
    throw InvalidInputError("evaluate_map: iou threshold must lie in [0, 1]");
  }
  EvalResult result;
  double sum = 0.0;
  int present = 0;
  for (int cls = 0; cls < kNumDotaCategories; ++cls) {
    result.per_class_ap[cls] = class_ap(cls, gts, preds, config);
    if (result.per_class_ap[cls]) {
      sum += *result.per_class_ap[cls];
      ++present;
    }
  }
  result.map_score = present > 0 ? sum / present : 0.0;
  return result;
}

std::string eval_to_csv(const EvalResult& result) {
  std::string out = "class,ap\n";
  char buf[64];
  for (int cls = 0; cls < kNumDotaCategories; ++cls) {
    out += kDotaCategories[cls];
    if (result.per_class_ap[cls]) {
      std::snprintf(buf, sizeof buf, ",%.4f\n", *result.per_class_ap[cls]);
      out += buf;
    } else {
      out += ",NaN\n";
    }
  }
  std::snprintf(buf, sizeof buf, "mAP,%.4f\n", result.map_score);
  out += buf;
  return out;
}

void write_eval_csv(const EvalResult& result, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file << eval_to_csv(result);
  if (!file) throw IoError("write to " + path.string() + " failed");
}

}  // namespace mdl
