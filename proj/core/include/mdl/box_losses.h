#ifndef MDL_BOX_LOSSES_H_
#define MDL_BOX_LOSSES_H_

#include <array>
#include <span>

#include "mdl/covariance.h"
#include "mdl/geometry.h"

namespace mdl {

// Which box supplies the covariance in the Mahalanobis distance loss:
// the target (MDL-t) or the prediction (MDL-p).
enum class CovarianceSource { kFromTarget, kFromPrediction };

// How gradients treat a prediction-derived covariance. kDetached holds it
// constant; kFull differentiates through it. Ignored for kFromTarget.
enum class SigmaGradient { kDetached, kFull };

enum class NormKind { kL1, kL2, kSmoothL1 };

// Loss value and its gradient with respect to the flattened predicted
// vertices (a.x, a.y, ..., d.x, d.y).
struct BoxLossGrad {
  double value = 0.0;
  std::array<double, 8> grad{};
};

// Mean Mahalanobis distance over positionally paired vertices.
double mdl(const ObbVertices& pred, const ObbVertices& target, CovarianceSource source);
double mdl_with_covariance(const ObbVertices& pred, const ObbVertices& target,
                           const Covariance2& sigma);
BoxLossGrad mdl_with_grad(const ObbVertices& pred, const ObbVertices& target,
                          CovarianceSource source,
                          SigmaGradient mode = SigmaGradient::kDetached);

// mdl of the four cyclic relabelings of pred, identity first.
std::array<double, 4> mdl_cyclic_losses(const ObbVertices& pred, const ObbVertices& target,
                                        CovarianceSource source);

// Minimum over the four cyclic relabelings of the predicted vertices.
// Ties resolve to the earliest relabeling.
double mdl_boundary_min(const ObbVertices& pred, const ObbVertices& target,
                        CovarianceSource source);
BoxLossGrad mdl_boundary_min_with_grad(const ObbVertices& pred, const ObbVertices& target,
                                       CovarianceSource source,
                                       SigmaGradient mode = SigmaGradient::kDetached);

// Element-wise loss over the eight coordinates, averaged over eight.
// L2 is the plain squared difference; smooth L1 is 0.5 x^2 below |x| = 1
// and |x| - 0.5 above.
double ln_norm_loss(const ObbVertices& pred, const ObbVertices& target, NormKind kind);
BoxLossGrad ln_norm_loss_with_grad(const ObbVertices& pred, const ObbVertices& target,
                                   NormKind kind);
std::array<double, 4> ln_norm_cyclic_losses(const ObbVertices& pred, const ObbVertices& target,
                                            NormKind kind);
double ln_norm_boundary_min(const ObbVertices& pred, const ObbVertices& target, NormKind kind);
BoxLossGrad ln_norm_boundary_min_with_grad(const ObbVertices& pred, const ObbVertices& target,
                                           NormKind kind);

// Sub-cell center offset. Ground truth lies in [0, 1)^2.
struct Offset2 {
  double dx = 0.0;
  double dy = 0.0;
};

struct OffsetLossGrad {
  double value = 0.0;
  std::array<double, 2> grad{};
};

double offset_loss(Offset2 pred, Offset2 target, const Covariance2& sigma);
OffsetLossGrad offset_loss_with_grad(Offset2 pred, Offset2 target, const Covariance2& sigma);

struct LossBreakdown {
  double heatmap = 0.0;
  double box = 0.0;     // sum over objects
  double offset = 0.0;  // sum over objects
  double total = 0.0;   // (heatmap + box + offset) / N
};

// n_objects must equal both list lengths. An image with no objects yields
// an all-zero breakdown.
LossBreakdown total_loss(double heatmap_loss, std::span<const double> box_losses,
                         std::span<const double> offset_losses, int n_objects);

}  // namespace mdl

#endif  // MDL_BOX_LOSSES_H_
