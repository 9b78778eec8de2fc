#ifndef MDL_GRADCHECK_H_
#define MDL_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mdl {

inline constexpr double kGradCheckStep = 1e-6;
inline constexpr double kGradCheckTolerance = 1e-4;

using ScalarFunction = std::function<double(std::span<const double>)>;

// g_i = (f(x + step e_i) - f(x - step e_i)) / (2 step). Throws
// OracleFailure if any probe evaluates to a non-finite value.
std::vector<double> central_difference(const ScalarFunction& f, std::span<const double> x,
                                       double step = kGradCheckStep);

// |a - g| / max(|a|, |g|, 1e-8)
double relative_error(double analytic, double numeric);

struct GradReport {
  std::string op_name;
  double max_rel_error = 0.0;
  std::string worst_input;  // "pred=[...];target=[...]" at full precision
  int cases = 0;
  int rejected = 0;
  bool passed = false;
};

// Names of the checked operations, in report order.
std::vector<std::string> gradcheck_op_names();

// Random well-conditioned instances per differentiable loss: boxes with
// sides in [0.1, 50] and aspect ratio <= 10; inputs within 1e-3 of an
// L1/smooth-L1 kink or with a cyclic-relabeling margin below 1e-3 are
// rejected and redrawn. Deterministic in (seed, n_cases, tolerance).
std::vector<GradReport> check_all(std::uint64_t seed, int n_cases,
                                  double tolerance = kGradCheckTolerance,
                                  double step = kGradCheckStep);

// One line per report; stable formatting.
std::string format_reports(std::span<const GradReport> reports);

}  // namespace mdl

#endif  // MDL_GRADCHECK_H_
