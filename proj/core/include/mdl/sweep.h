#ifndef MDL_SWEEP_H_
#define MDL_SWEEP_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdl/geometry.h"

namespace mdl {

enum class SweepFactor { kScale, kAngle, kCenterShift, kAspectRatio };

// Column order in emitted tables follows declaration order.
enum class SweepLoss { kMdlT, kMdlP, kL1, kL2, kSmoothL1, kOneMinusSkewIoU };

// Perturbation applied to the base box to form the prediction before the
// swept factor is applied.
struct PredDelta {
  double dcx = 0.0;
  double dcy = 0.0;
  double dw = 0.0;
  double dh = 0.0;
  double dtheta = 0.0;
};

struct SweepSpec {
  SweepFactor factor = SweepFactor::kScale;
  ObbCenterWHAngle base_box{0.0, 0.0, 4.0, 2.0, 0.0};
  double lo = 1.0;
  double hi = 10.0;
  int steps = 10;
  std::vector<SweepLoss> losses;
  bool boundary_min = false;
  PredDelta pred_delta{};

  // Throws InvalidInputError unless lo < hi, steps >= 2 and losses is
  // non-empty.
  void validate() const;
};

struct SweepRow {
  double factor_value = 0.0;
  std::vector<double> values;  // aligned with SweepTable::columns; NaN if degenerate
  bool degenerate = false;
};

struct SweepTable {
  std::vector<SweepLoss> columns;
  std::vector<SweepRow> rows;
};

// Scale sweeps scale both boxes about the origin by v; Angle rotates the
// prediction by v about its center; CenterShift moves the prediction by v
// along +x; AspectRatio sets the prediction's w/h ratio to v at fixed area.
// Rows whose boxes degenerate are kept and flagged.
SweepTable run_sweep(const SweepSpec& spec);

// Offset used by the CLI when none is given: a Scale sweep needs a
// prediction that differs from the target, the other factors do not.
PredDelta default_pred_delta(SweepFactor factor);

std::string_view loss_name(SweepLoss loss);
std::optional<SweepLoss> parse_loss_name(std::string_view name);
std::string_view factor_name(SweepFactor factor);
std::optional<SweepFactor> parse_factor_name(std::string_view name);

// Header "factor,<loss names>", values with 9 significant digits and the
// literal NaN for degenerate rows. Throws InvalidInputError on an empty
// table.
std::string to_csv(const SweepTable& table);

// Writes to_csv(table) to path. Throws IoError on failure.
void emit_csv(const SweepTable& table, const std::filesystem::path& path);

// Parses text produced by to_csv. Throws ParseError.
SweepTable parse_sweep_csv(std::string_view text);

}  // namespace mdl

#endif  // MDL_SWEEP_H_
