#ifndef MDL_HEATMAP_H_
#define MDL_HEATMAP_H_

#include <span>
#include <vector>

#include "mdl/geometry.h"

namespace mdl {

// Row-major grid of scores in [0, 1].
class HeatmapGrid {
 public:
  HeatmapGrid(int width, int height, double fill = 0.0);
  HeatmapGrid(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double at(int x, int y) const { return values_[index(x, y)]; }
  void set(int x, int y, double value);
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  std::span<const double> values() const { return values_; }

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

// Largest radius r such that a box whose corners are displaced by r still
// reaches min_overlap IoU with the original (CornerNet construction).
double gaussian_radius(double height, double width, double min_overlap = 0.7);

// max(1, r / 3) for r = gaussian_radius(h, w, 0.7) of the axis-aligned
// bounding box.
double gaussian_sigma_for_box(double width, double height);
double gaussian_sigma_for_box(const ObbVertices& box);

// Per-cell maximum of exp(-r^2 / 2 sigma^2) around each rounded center.
// Centers whose rounded cell falls outside the grid are rejected.
HeatmapGrid gaussian_heatmap_target(int width, int height, std::span<const Point2> centers,
                                    std::span<const double> sigmas);

inline constexpr double kFocalClamp = 1e-6;

// Penalty-reduced focal loss, summed over cells without normalization.
// Cells with target exactly 1 are positives. Predictions are clamped to
// [kFocalClamp, 1 - kFocalClamp].
double focal_heatmap_loss(const HeatmapGrid& pred, const HeatmapGrid& target,
                          double alpha = 2.0, double beta = 4.0);

struct FocalLossGrad {
  double value = 0.0;
  std::vector<double> grad;  // d loss / d pred, zero where the clamp is active
};

FocalLossGrad focal_heatmap_loss_with_grad(const HeatmapGrid& pred, const HeatmapGrid& target,
                                           double alpha = 2.0, double beta = 4.0);

}  // namespace mdl

#endif  // MDL_HEATMAP_H_
