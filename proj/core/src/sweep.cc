#include "mdl/sweep.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "mdl/box_losses.h"
#include "mdl/errors.h"

namespace mdl {
namespace {

constexpr std::array<std::string_view, 6> kLossNames = {
    "mdl_t", "mdl_p", "l1", "l2", "smooth_l1", "one_minus_skew_iou"};
constexpr std::array<std::string_view, 4> kFactorNames = {"scale", "angle", "shift", "aspect"};

struct BoxPair {
  ObbVertices pred;
  ObbVertices target;
};

std::optional<BoxPair> perturb(const SweepSpec& spec, double v) {
  const ObbCenterWHAngle& base = spec.base_box;
  ObbCenterWHAngle pred{base.cx + spec.pred_delta.dcx, base.cy + spec.pred_delta.dcy,
                        base.w + spec.pred_delta.dw, base.h + spec.pred_delta.dh,
                        base.theta + spec.pred_delta.dtheta};
  switch (spec.factor) {
    case SweepFactor::kScale: {
      if (!(v > 0.0)) return std::nullopt;
      if (!(pred.w > 0.0 && pred.h > 0.0)) return std::nullopt;
      return BoxPair{scaled(vertices_from_cwha(pred), v), scaled(vertices_from_cwha(base), v)};
    }
    case SweepFactor::kAngle:
      pred.theta += v;
      break;
    case SweepFactor::kCenterShift:
      pred.cx += v;
      break;
    case SweepFactor::kAspectRatio: {
      const double area = pred.w * pred.h;
      if (!(v > 0.0) || !(area > 0.0)) return std::nullopt;
      pred.w = std::sqrt(area * v);
      pred.h = std::sqrt(area / v);
      break;
    }
  }
  if (!(pred.w > 0.0 && pred.h > 0.0)) return std::nullopt;
  return BoxPair{vertices_from_cwha(pred), vertices_from_cwha(base)};
}

double evaluate(SweepLoss loss, const BoxPair& boxes, bool boundary_min) {
  const auto mdl_value = [&](CovarianceSource src) {
    return boundary_min ? mdl_boundary_min(boxes.pred, boxes.target, src)
                        : mdl(boxes.pred, boxes.target, src);
  };
  const auto norm_value = [&](NormKind kind) {
    return boundary_min ? ln_norm_boundary_min(boxes.pred, boxes.target, kind)
                        : ln_norm_loss(boxes.pred, boxes.target, kind);
  };
  switch (loss) {
    case SweepLoss::kMdlT:
      return mdl_value(CovarianceSource::kFromTarget);
    case SweepLoss::kMdlP:
      return mdl_value(CovarianceSource::kFromPrediction);
    case SweepLoss::kL1:
      return norm_value(NormKind::kL1);
    case SweepLoss::kL2:
      return norm_value(NormKind::kL2);
    case SweepLoss::kSmoothL1:
      return norm_value(NormKind::kSmoothL1);
    case SweepLoss::kOneMinusSkewIoU:
      return 1.0 - skew_iou(boxes.pred, boxes.target);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string format_value(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void SweepSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw InvalidInputError("sweep: require finite lo < hi");
  }
  if (steps < 2) throw InvalidInputError("sweep: steps must be >= 2");
  if (losses.empty()) throw InvalidInputError("sweep: at least one loss is required");
  vertices_from_cwha(base_box);  // validates the base box
}

SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepTable table;
  table.columns = spec.losses;
  std::sort(table.columns.begin(), table.columns.end());
  table.columns.erase(std::unique(table.columns.begin(), table.columns.end()),
                      table.columns.end());

  for (int k = 0; k < spec.steps; ++k) {
    SweepRow row;
    row.factor_value =
        k == spec.steps - 1 ? spec.hi : spec.lo + (spec.hi - spec.lo) * k / (spec.steps - 1);
    const auto boxes = perturb(spec, row.factor_value);
    try {
      if (!boxes) throw InvalidInputError("degenerate box");
      for (SweepLoss loss : table.columns) {
        const double v = evaluate(loss, *boxes, spec.boundary_min);
        if (!std::isfinite(v)) throw InvalidInputError("non-finite loss");
        row.values.push_back(v);
      }
    } catch (const std::exception&) {
      row.degenerate = true;
      row.values.assign(table.columns.size(), std::numeric_limits<double>::quiet_NaN());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

PredDelta default_pred_delta(SweepFactor factor) {
  if (factor == SweepFactor::kScale) return {0.5, 0.25, 0.0, 0.0, 0.1};
  return {};
}

std::string_view loss_name(SweepLoss loss) { return kLossNames[static_cast<std::size_t>(loss)]; }

std::optional<SweepLoss> parse_loss_name(std::string_view name) {
  for (std::size_t i = 0; i < kLossNames.size(); ++i) {
    if (kLossNames[i] == name) return static_cast<SweepLoss>(i);
  }
  return std::nullopt;
}

std::string_view factor_name(SweepFactor factor) {
  return kFactorNames[static_cast<std::size_t>(factor)];
}

std::optional<SweepFactor> parse_factor_name(std::string_view name) {
  for (std::size_t i = 0; i < kFactorNames.size(); ++i) {
    if (kFactorNames[i] == name) return static_cast<SweepFactor>(i);
  }
  return std::nullopt;
}

std::string to_csv(const SweepTable& table) {
  if (table.rows.empty()) throw InvalidInputError("emit_csv: no rows");
  std::string out = "factor";
  for (SweepLoss loss : table.columns) {
    out += ",";
    out += loss_name(loss);
  }
  out += "\n";
  for (const SweepRow& row : table.rows) {
    out += format_value(row.factor_value);
    for (double v : row.values) {
      out += ",";
      out += format_value(v);
    }
    out += "\n";
  }
  return out;
}

void emit_csv(const SweepTable& table, const std::filesystem::path& path) {
  const std::string text = to_csv(table);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("write to " + path.string() + " failed");
}

SweepTable parse_sweep_csv(std::string_view text) {
  SweepTable table;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (line_no == 1) {
      if (fields.front() != "factor") throw ParseError(line_no, "header must start with factor");
      for (std::size_t i = 1; i < fields.size(); ++i) {
        const auto loss = parse_loss_name(fields[i]);
        if (!loss) throw ParseError(line_no, "unknown column " + std::string(fields[i]));
        table.columns.push_back(*loss);
      }
      continue;
    }
    if (fields.size() != table.columns.size() + 1) {
      throw ParseError(line_no, "wrong field count");
    }
    SweepRow row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string field(fields[i]);
      char* parse_end = nullptr;
      const double v = std::strtod(field.c_str(), &parse_end);
      if (field.empty() || parse_end != field.c_str() + field.size()) {
        throw ParseError(line_no, "not a number: " + field);
      }
      if (i == 0) {
        row.factor_value = v;
      } else {
        row.values.push_back(v);
        if (std::isnan(v)) row.degenerate = true;
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (line_no == 0) throw ParseError(1, "empty input");
  return table;
}

}  // namespace mdl
