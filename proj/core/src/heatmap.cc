#include "mdl/heatmap.h"

#include <algorithm>
#include <cmath>

#include "mdl/errors.h"

namespace mdl {
namespace {

void require_in_unit_interval(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidInputError("HeatmapGrid: value outside [0, 1]");
}

void require_same_shape(const HeatmapGrid& a, const HeatmapGrid& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidInputError("focal_heatmap_loss: prediction and target dimensions differ");
  }
}

}  // namespace

HeatmapGrid::HeatmapGrid(int width, int height, double fill)
    : HeatmapGrid(width, height,
                  std::vector<double>(width > 0 && height > 0
                                          ? static_cast<std::size_t>(width) * height
                                          : 0,
                                      fill)) {}

HeatmapGrid::HeatmapGrid(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1) throw InvalidInputError("HeatmapGrid: dimensions must be >= 1");
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidInputError("HeatmapGrid: value count does not match dimensions");
  }
  std::for_each(values_.begin(), values_.end(), require_in_unit_interval);
}

void HeatmapGrid::set(int x, int y, double value) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) {
    throw InvalidInputError("HeatmapGrid::set: cell outside grid");
  }
  require_in_unit_interval(value);
  values_[index(x, y)] = value;
}

double gaussian_radius(double height, double width, double min_overlap) {
  const double a1 = 1.0;
  const double b1 = height + width;
  const double c1 = width * height * (1.0 - min_overlap) / (1.0 + min_overlap);
  const double r1 = (b1 + std::sqrt(b1 * b1 - 4.0 * a1 * c1)) / 2.0;

  const double a2 = 4.0;
  const double b2 = 2.0 * (height + width);
  const double c2 = (1.0 - min_overlap) * width * height;
  const double r2 = (b2 + std::sqrt(b2 * b2 - 4.0 * a2 * c2)) / 2.0;

  const double a3 = 4.0 * min_overlap;
  const double b3 = -2.0 * min_overlap * (height + width);
  const double c3 = (min_overlap - 1.0) * width * height;
  const double r3 = (b3 + std::sqrt(b3 * b3 - 4.0 * a3 * c3)) / 2.0;

  return std::min({r1, r2, r3});
}

double gaussian_sigma_for_box(double width, double height) {
  return std::max(1.0, gaussian_radius(height, width, 0.7) / 3.0);
}

double gaussian_sigma_for_box(const ObbVertices& box) {
  double x0 = box.v[0].x, x1 = box.v[0].x, y0 = box.v[0].y, y1 = box.v[0].y;
  for (const Point2& p : box.v) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return gaussian_sigma_for_box(x1 - x0, y1 - y0);
}

HeatmapGrid gaussian_heatmap_target(int width, int height, std::span<const Point2> centers,
                                    std::span<const double> sigmas) {
  if (centers.size() != sigmas.size()) {
    throw InvalidInputError("gaussian_heatmap_target: one sigma per center required");
  }
  HeatmapGrid grid(width, height);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double sigma = sigmas[k];
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw InvalidInputError("gaussian_heatmap_target: sigma must be positive");
    }
    if (!std::isfinite(centers[k].x) || !std::isfinite(centers[k].y)) {
      throw InvalidInputError("gaussian_heatmap_target: non-finite center");
    }
    const double cx = std::floor(centers[k].x + 0.5);
    const double cy = std::floor(centers[k].y + 0.5);
    if (cx < 0.0 || cy < 0.0 || cx >= width || cy >= height) {
      throw InvalidInputError("gaussian_heatmap_target: center outside grid");
    }
    const double denom = 2.0 * sigma * sigma;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double dx = x - cx;
        const double dy = y - cy;
        const double v = std::exp(-(dx * dx + dy * dy) / denom);
        if (v > grid.at(x, y)) grid.set(x, y, v);
      }
    }
  }
  return grid;
}

double focal_heatmap_loss(const HeatmapGrid& pred, const HeatmapGrid& target, double alpha,
                          double beta) {
  return focal_heatmap_loss_with_grad(pred, target, alpha, beta).value;
}

FocalLossGrad focal_heatmap_loss_with_grad(const HeatmapGrid& pred, const HeatmapGrid& target,
                                           double alpha, double beta) {
  require_same_shape(pred, target);
  const auto yhat_all = pred.values();
  const auto y_all = target.values();
  FocalLossGrad out;
  out.grad.assign(pred.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double raw = yhat_all[i];
    const double p = std::clamp(raw, kFocalClamp, 1.0 - kFocalClamp);
    const bool clamped = p != raw;
    const double y = y_all[i];
    if (y == 1.0) {
      // -(1 - p)^a log p
      const double w = std::pow(1.0 - p, alpha);
      out.value -= w * std::log(p);
      if (!clamped) {
        out.grad[i] = alpha * std::pow(1.0 - p, alpha - 1.0) * std::log(p) - w / p;
      }
    } else {
      // -(1 - y)^b p^a log(1 - p)
      const double neg = std::pow(1.0 - y, beta);
      const double pa = std::pow(p, alpha);
      const double log1m = std::log1p(-p);
      out.value -= neg * pa * log1m;
      if (!clamped) {
        out.grad[i] = -neg * (alpha * std::pow(p, alpha - 1.0) * log1m - pa / (1.0 - p));
      }
    }
  }
  return out;
}

}  // namespace mdl
