#include "mdl/box_losses.h"

#include <algorithm>
#include <cmath>

#include "mdl/errors.h"

namespace mdl {
namespace {

void require_finite(const ObbVertices& box, const char* what) {
  for (const Point2& p : box.v) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidInputError(std::string(what) + ": non-finite vertex");
    }
  }
}

const ObbVertices& covariance_box(const ObbVertices& pred, const ObbVertices& target,
                                  CovarianceSource source) {
  return source == CovarianceSource::kFromTarget ? target : pred;
}

// Value and detached-sigma gradient of the mean Mahalanobis distance.
// Also returns d value / d sigma_regularized for callers that need it.
struct MdlParts {
  BoxLossGrad out;
  Covariance2 dvalue_dsigma;
};

MdlParts mdl_parts(const ObbVertices& pred, const ObbVertices& target,
                   const Covariance2& sigma) {
  const Covariance2 precision = inverse(sigma);
  MdlParts parts;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 d = pred.v[i] - target.v[i];
    const double md = std::sqrt(std::max(precision.quad(d), 0.0));
    parts.out.value += 0.25 * md;
    if (md > 0.0) {
      const Point2 pd = precision.apply(d);
      parts.out.grad[2 * i] = pd.x / (4.0 * md);
      parts.out.grad[2 * i + 1] = pd.y / (4.0 * md);
      // d sqrt(d^T P d) / d Sigma = -P d d^T P / (2 md)
      const double w = -1.0 / (8.0 * md);
      parts.dvalue_dsigma.sxx += w * pd.x * pd.x;
      parts.dvalue_dsigma.sxy += w * pd.x * pd.y;
      parts.dvalue_dsigma.syy += w * pd.y * pd.y;
    }
  }
  return parts;
}

template <typename Scorer>
BoxLossGrad boundary_min_with_grad(const ObbVertices& pred, Scorer&& score) {
  BoxLossGrad best;
  int best_shift = -1;
  for (int k = 0; k < 4; ++k) {
    BoxLossGrad cand = score(cyclic_shift(pred, k));
    if (best_shift < 0 || cand.value < best.value) {
      best = cand;
      best_shift = k;
    }
  }
  BoxLossGrad out;
  out.value = best.value;
  for (int i = 0; i < 4; ++i) {
    const int src = (i + best_shift) % 4;
    out.grad[2 * src] = best.grad[2 * i];
    out.grad[2 * src + 1] = best.grad[2 * i + 1];
  }
  return out;
}

double norm_element(double x, NormKind kind) {
  switch (kind) {
    case NormKind::kL1:
      return std::abs(x);
    case NormKind::kL2:
      return x * x;
    case NormKind::kSmoothL1:
      return std::abs(x) < 1.0 ? 0.5 * x * x : std::abs(x) - 0.5;
  }
  return 0.0;
}

double norm_element_grad(double x, NormKind kind) {
  const double sign = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  switch (kind) {
    case NormKind::kL1:
      return sign;
    case NormKind::kL2:
      return 2.0 * x;
    case NormKind::kSmoothL1:
      return std::abs(x) < 1.0 ? x : sign;
  }
  return 0.0;
}

}  // namespace

double mdl_with_covariance(const ObbVertices& pred, const ObbVertices& target,
                           const Covariance2& sigma) {
  require_finite(pred, "mdl");
  require_finite(target, "mdl");
  return mdl_parts(pred, target, sigma).out.value;
}

double mdl(const ObbVertices& pred, const ObbVertices& target, CovarianceSource source) {
  require_finite(pred, "mdl");
  require_finite(target, "mdl");
  return mdl_parts(pred, target, sample_covariance(covariance_box(pred, target, source)))
      .out.value;
}

BoxLossGrad mdl_with_grad(const ObbVertices& pred, const ObbVertices& target,
                          CovarianceSource source, SigmaGradient mode) {
  require_finite(pred, "mdl");
  require_finite(target, "mdl");
  const Covariance2 raw = sample_covariance(covariance_box(pred, target, source));
  MdlParts parts = mdl_parts(pred, target, raw);
  if (source == CovarianceSource::kFromTarget || mode == SigmaGradient::kDetached) {
    return parts.out;
  }

  // Chain through the regularization shift when it scales with the trace.
  Covariance2 g = parts.dvalue_dsigma;
  if (needs_regularization(raw) && 1e-7 * raw.trace() > 1e-12) {
    const double extra = 1e-7 * g.trace();
    g.sxx += extra;
    g.syy += extra;
  }
  // Sigma = (1/3) sum_j u_j u_j^T with u_j = v_j - mean, so
  // d value / d v_j = (2/3) G u_j (the mean terms cancel).
  const Point2 mean = centroid(pred);
  for (std::size_t j = 0; j < 4; ++j) {
    const Point2 gu = g.apply(pred.v[j] - mean);
    parts.out.grad[2 * j] += (2.0 / 3.0) * gu.x;
    parts.out.grad[2 * j + 1] += (2.0 / 3.0) * gu.y;
  }
  return parts.out;
}

std::array<double, 4> mdl_cyclic_losses(const ObbVertices& pred, const ObbVertices& target,
                                        CovarianceSource source) {
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = mdl(cyclic_shift(pred, k), target, source);
  return out;
}

double mdl_boundary_min(const ObbVertices& pred, const ObbVertices& target,
                        CovarianceSource source) {
  const auto losses = mdl_cyclic_losses(pred, target, source);
  return *std::min_element(losses.begin(), losses.end());
}

BoxLossGrad mdl_boundary_min_with_grad(const ObbVertices& pred, const ObbVertices& target,
                                       CovarianceSource source, SigmaGradient mode) {
  return boundary_min_with_grad(pred, [&](const ObbVertices& p) {
    return mdl_with_grad(p, target, source, mode);
  });
}

double ln_norm_loss(const ObbVertices& pred, const ObbVertices& target, NormKind kind) {
  return ln_norm_loss_with_grad(pred, target, kind).value;
}

BoxLossGrad ln_norm_loss_with_grad(const ObbVertices& pred, const ObbVertices& target,
                                   NormKind kind) {
  require_finite(pred, "ln_norm_loss");
  require_finite(target, "ln_norm_loss");
  const auto p = pred.flat();
  const auto t = target.flat();
  BoxLossGrad out;
  for (std::size_t i = 0; i < 8; ++i) {
    const double x = p[i] - t[i];
    out.value += norm_element(x, kind) / 8.0;
    out.grad[i] = norm_element_grad(x, kind) / 8.0;
  }
  return out;
}

std::array<double, 4> ln_norm_cyclic_losses(const ObbVertices& pred, const ObbVertices& target,
                                            NormKind kind) {
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = ln_norm_loss(cyclic_shift(pred, k), target, kind);
  return out;
}

double ln_norm_boundary_min(const ObbVertices& pred, const ObbVertices& target, NormKind kind) {
  const auto losses = ln_norm_cyclic_losses(pred, target, kind);
  return *std::min_element(losses.begin(), losses.end());
}

BoxLossGrad ln_norm_boundary_min_with_grad(const ObbVertices& pred, const ObbVertices& target,
                                           NormKind kind) {
  return boundary_min_with_grad(
      pred, [&](const ObbVertices& p) { return ln_norm_loss_with_grad(p, target, kind); });
}

double offset_loss(Offset2 pred, Offset2 target, const Covariance2& sigma) {
  return offset_loss_with_grad(pred, target, sigma).value;
}

OffsetLossGrad offset_loss_with_grad(Offset2 pred, Offset2 target, const Covariance2& sigma) {
  if (!std::isfinite(pred.dx) || !std::isfinite(pred.dy) || !std::isfinite(target.dx) ||
      !std::isfinite(target.dy)) {
    throw InvalidInputError("offset_loss: non-finite offset");
  }
  const Covariance2 precision = inverse(sigma);
  const Point2 d{pred.dx - target.dx, pred.dy - target.dy};
  OffsetLossGrad out;
  out.value = std::sqrt(std::max(precision.quad(d), 0.0));
  if (out.value > 0.0) {
    const Point2 pd = precision.apply(d);
    out.grad = {pd.x / out.value, pd.y / out.value};
  }
  return out;
}

LossBreakdown total_loss(double heatmap_loss, std::span<const double> box_losses,
                         std::span<const double> offset_losses, int n_objects) {
  if (n_objects < 0 || box_losses.size() != static_cast<std::size_t>(n_objects) ||
      offset_losses.size() != static_cast<std::size_t>(n_objects)) {
    throw InvalidInputError("total_loss: n_objects must match the per-object loss counts");
  }
  if (n_objects == 0) return {};
  LossBreakdown out;
  out.heatmap = heatmap_loss;
  for (double b : box_losses) out.box += b;
  for (double o : offset_losses) out.offset += o;
  out.total = (out.heatmap + out.box + out.offset) / static_cast<double>(n_objects);
  return out;
}

}  // namespace mdl
