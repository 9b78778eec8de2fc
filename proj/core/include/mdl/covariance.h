#ifndef MDL_COVARIANCE_H_
#define MDL_COVARIANCE_H_

#include "mdl/geometry.h"

namespace mdl {

// Symmetric 2x2 matrix [[sxx, sxy], [sxy, syy]].
struct Covariance2 {
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;

  double trace() const { return sxx + syy; }
  double det() const { return sxx * syy - sxy * sxy; }
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  // Quadratic form u^T M u.
  double quad(Point2 u) const { return sxx * u.x * u.x + 2.0 * sxy * u.x * u.y + syy * u.y * u.y; }
  Point2 apply(Point2 u) const { return {sxx * u.x + sxy * u.y, sxy * u.x + syy * u.y}; }

  friend bool operator==(const Covariance2&, const Covariance2&) = default;
};

// Vertex covariance of a box with divisor N - 1 = 3, no regularization.
Covariance2 sample_covariance(const ObbVertices& box);

// Shift added to the diagonal when the matrix is near-singular:
// max(1e-7 * trace, 1e-12). Applied only if the smallest eigenvalue is
// below half of that shift, so well-conditioned matrices pass through
// bit-for-bit and a second application is a no-op.
double regularization_shift(const Covariance2& sigma);
bool needs_regularization(const Covariance2& sigma);
Covariance2 regularize(const Covariance2& sigma);

// sample_covariance followed by regularize. Throws InvalidInputError on
// non-finite vertices.
Covariance2 covariance_from_vertices(const ObbVertices& box);

// Closed-form inverse of the regularized matrix. Throws
// SingularCovarianceError when it is not positive definite.
Covariance2 inverse(const Covariance2& sigma);

// sqrt((m - n)^T sigma^-1 (m - n)) with sigma regularized first.
double mahalanobis_distance(Point2 m, Point2 n, const Covariance2& sigma);

}  // namespace mdl

#endif  // MDL_COVARIANCE_H_
