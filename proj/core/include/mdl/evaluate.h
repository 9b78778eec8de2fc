#ifndef MDL_EVALUATE_H_
#define MDL_EVALUATE_H_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "mdl/dota.h"

namespace mdl {

enum class ApInterpolation { kElevenPoint, kAllPoint };

struct EvalConfig {
  double iou_threshold = 0.5;
  ApInterpolation interpolation = ApInterpolation::kElevenPoint;
};

struct EvalResult {
  // Empty for categories with no non-difficult ground truth.
  std::array<std::optional<double>, kNumDotaCategories> per_class_ap{};
  // Mean over categories that have ground truth; 0 when none do.
  double map_score = 0.0;
};

// Area under a precision/recall sequence ordered by descending score.
double average_precision(std::span<const double> precision, std::span<const double> recall,
                         ApInterpolation interpolation);

// Each prediction is matched to the ground truth of its image and class
// with the highest SkewIoU. At or above the threshold it is a true
// positive if that ground truth is unclaimed, ignored if it is difficult,
// and a false positive otherwise.
EvalResult evaluate_map(std::span<const DotaAnnotation> gts,
                        std::span<const ImageDetection> preds, const EvalConfig& config = {});

// "class,ap" header, one row per category, then "mAP". Four decimals;
// categories without ground truth print NaN.
std::string eval_to_csv(const EvalResult& result);
void write_eval_csv(const EvalResult& result, const std::filesystem::path& path);

}  // namespace mdl

#endif  // MDL_EVALUATE_H_
