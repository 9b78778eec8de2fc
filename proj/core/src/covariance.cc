#include "mdl/covariance.h"

#include <algorithm>
#include <cmath>

#include "mdl/errors.h"

namespace mdl {
namespace {

double half_spread(const Covariance2& m) {
  const double diff = 0.5 * (m.sxx - m.syy);
  return std::sqrt(diff * diff + m.sxy * m.sxy);
}

}  // namespace

double Covariance2::min_eigenvalue() const { return 0.5 * trace() - half_spread(*this); }
double Covariance2::max_eigenvalue() const { return 0.5 * trace() + half_spread(*this); }

Covariance2 sample_covariance(const ObbVertices& box) {
  for (const Point2& p : box.v) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidInputError("covariance_from_vertices: non-finite vertex");
    }
  }
  const Point2 mean = centroid(box);
  Covariance2 s;
  for (const Point2& p : box.v) {
    const Point2 u = p - mean;
    s.sxx += u.x * u.x;
    s.sxy += u.x * u.y;
    s.syy += u.y * u.y;
  }
  constexpr double kDivisor = 3.0;  // N - 1 with N = 4
  s.sxx /= kDivisor;
  s.sxy /= kDivisor;
  s.syy /= kDivisor;
  return s;
}

double regularization_shift(const Covariance2& sigma) {
  return std::max(1e-7 * sigma.trace(), 1e-12);
}

bool needs_regularization(const Covariance2& sigma) {
  return sigma.min_eigenvalue() < 0.5 * regularization_shift(sigma);
}

Covariance2 regularize(const Covariance2& sigma) {
  if (!needs_regularization(sigma)) return sigma;
  const double lambda = regularization_shift(sigma);
  return {sigma.sxx + lambda, sigma.sxy, sigma.syy + lambda};
}

Covariance2 covariance_from_vertices(const ObbVertices& box) {
  return regularize(sample_covariance(box));
}

Covariance2 inverse(const Covariance2& sigma) {
  const Covariance2 m = regularize(sigma);
  const double det = m.det();
  if (!std::isfinite(det) || !(det > 0.0) || !(m.sxx > 0.0)) {
    throw SingularCovarianceError("covariance is not positive definite");
  }
  return {m.syy / det, -m.sxy / det, m.sxx / det};
}

double mahalanobis_distance(Point2 m, Point2 n, const Covariance2& sigma) {
  const Covariance2 precision = inverse(sigma);
  return std::sqrt(std::max(precision.quad(m - n), 0.0));
}

}  // namespace mdl
