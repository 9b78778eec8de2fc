#include "mdl/gradcheck.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mdl/errors.h"

namespace mdl {
namespace {

TEST(CentralDifference, Examples) {
  const std::vector<double> x = {3.0};
  const auto g = central_difference([](std::span<const double> v) { return v[0] * v[0]; }, x);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_NEAR(g[0], 6.0, 1e-6);
  const std::vector<double> y = {1.0, -2.0, 5.0};
  for (double gi : central_difference([](std::span<const double>) { return 4.2; }, y)) {
    EXPECT_EQ(gi, 0.0);
  }
}

TEST(CentralDifference, NonFiniteProbeFails) {
  const std::vector<double> x = {0.0};
  EXPECT_THROW(central_difference([](std::span<const double> v) { return std::log(v[0]); }, x),
               OracleFailure);
}

TEST(RelativeError, Floor) {
  EXPECT_EQ(relative_error(0.0, 0.0), 0.0);
  EXPECT_NEAR(relative_error(1e-9, 0.0), 0.1, 1e-15);
  EXPECT_NEAR(relative_error(2.0, 1.0), 0.5, 1e-15);
}

TEST(CheckAll, EveryOpPasses) {
  const auto reports = check_all(7, 100);
  ASSERT_EQ(reports.size(), gradcheck_op_names().size());
  for (const GradReport& r : reports) {
    EXPECT_TRUE(r.passed) << r.op_name << " " << r.max_rel_error << " " << r.worst_input;
    EXPECT_EQ(r.cases, 100) << r.op_name;
    EXPECT_LE(r.max_rel_error, kGradCheckTolerance) << r.op_name;
  }
}

TEST(CheckAll, Deterministic) {
  const auto a = check_all(123, 10);
  const auto b = check_all(123, 10);
  EXPECT_EQ(format_reports(a), format_reports(b));
  EXPECT_NE(format_reports(a), format_reports(check_all(124, 10)));
}

TEST(CheckAll, TinyToleranceFails) {
  bool any_failed = false;
  for (const GradReport& r : check_all(1, 5, 1e-15)) any_failed |= !r.passed;
  EXPECT_TRUE(any_failed);
}

TEST(CheckAll, RejectsBadArguments) {
  EXPECT_THROW(check_all(1, 0), InvalidInputError);
}

}  // namespace
}  // namespace mdl
