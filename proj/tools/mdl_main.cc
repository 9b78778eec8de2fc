// mdl: loss sweeps, gradient checks and DOTA-style evaluation.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdl/errors.h"
#include "mdl/evaluate.h"
#include "mdl/gradcheck.h"
#include "mdl/sweep.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::vector<double> parse_numbers(const std::string& text, std::size_t count,
                                  const std::string& flag) {
  std::vector<double> out;
  for (const std::string& s : split_csv(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw mdl::InvalidInputError(flag + ": not a number: '" + s + "'");
    }
    out.push_back(v);
  }
  if (out.size() != count) {
    throw mdl::InvalidInputError(flag + ": expected " + std::to_string(count) + " values");
  }
  return out;
}

struct SweepArgs {
  std::string factor;
  double lo = 1.0;
  double hi = 10.0;
  int steps = 10;
  std::string losses = "mdl_t,mdl_p,l1,l2,smooth_l1,one_minus_skew_iou";
  bool boundary_min = false;
  std::string base;
  std::string pred_offset;
  std::string out;
};

int run_sweep_command(const SweepArgs& a) {
  mdl::SweepSpec spec;
  const auto factor = mdl::parse_factor_name(a.factor);
  if (!factor) throw mdl::InvalidInputError("--factor: unknown factor '" + a.factor + "'");
  spec.factor = *factor;
  spec.lo = a.lo;
  spec.hi = a.hi;
  spec.steps = a.steps;
  spec.boundary_min = a.boundary_min;
  for (const std::string& name : split_csv(a.losses)) {
    const auto loss = mdl::parse_loss_name(name);
    if (!loss) throw mdl::InvalidInputError("--losses: unknown loss '" + name + "'");
    spec.losses.push_back(*loss);
  }
  if (!a.base.empty()) {
    const auto b = parse_numbers(a.base, 5, "--base");
    spec.base_box = {b[0], b[1], b[2], b[3], b[4]};
  }
  spec.pred_delta = mdl::default_pred_delta(spec.factor);
  if (!a.pred_offset.empty()) {
    const auto d = parse_numbers(a.pred_offset, 5, "--pred-offset");
    spec.pred_delta = {d[0], d[1], d[2], d[3], d[4]};
  }
  const mdl::SweepTable table = mdl::run_sweep(spec);
  mdl::emit_csv(table, a.out);
  int degenerate = 0;
  for (const auto& row : table.rows) degenerate += row.degenerate;
  std::printf("wrote %zu rows to %s", table.rows.size(), a.out.c_str());
  if (degenerate > 0) std::printf(" (%d degenerate)", degenerate);
  std::printf("\n");
  return kExitOk;
}

int run_gradcheck_command(std::uint64_t seed, int cases, double tol) {
  const auto reports = mdl::check_all(seed, cases, tol);
  std::cout << mdl::format_reports(reports);
  for (const auto& r : reports) {
    if (!r.passed) return kExitInvalid;
  }
  return kExitOk;
}

int run_eval_command(const std::string& gt_dir, const std::string& pred_dir, double iou,
                     const std::string& interp, const std::string& out) {
  mdl::EvalConfig config;
  config.iou_threshold = iou;
  config.interpolation =
      interp == "all" ? mdl::ApInterpolation::kAllPoint : mdl::ApInterpolation::kElevenPoint;
  const auto gts = mdl::load_annotation_dir(gt_dir);
  const auto preds = mdl::load_prediction_dir(pred_dir);
  const mdl::EvalResult result = mdl::evaluate_map(gts, preds, config);
  mdl::write_eval_csv(result, out);
  std::printf("mAP %.4f over %zu images, %zu predictions\n", result.map_score, gts.size(),
              preds.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mahalanobis distance loss toolkit for rotated boxes"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate losses over one perturbation factor");
  sweep_cmd->add_option("--factor", sweep.factor, "scale, angle, shift or aspect")
      ->required()
      ->check(CLI::IsMember({"scale", "angle", "shift", "aspect"}));
  sweep_cmd->add_option("--lo", sweep.lo, "First factor value")->capture_default_str();
  sweep_cmd->add_option("--hi", sweep.hi, "Last factor value")->capture_default_str();
  sweep_cmd->add_option("--steps", sweep.steps, "Grid points, at least 2")->capture_default_str();
  sweep_cmd->add_option("--losses", sweep.losses, "Comma-separated loss names")
      ->capture_default_str();
  sweep_cmd->add_flag("--boundary-min", sweep.boundary_min,
                      "Minimum over cyclic vertex relabelings for box losses");
  sweep_cmd->add_option("--base", sweep.base, "Target box cx,cy,w,h,theta (default 0,0,4,2,0)");
  sweep_cmd->add_option("--pred-offset", sweep.pred_offset,
                        "Prediction delta dcx,dcy,dw,dh,dtheta before the sweep "
                        "(scale default 0.5,0.25,0,0,0.1; others 0)");
  sweep_cmd->add_option("--out", sweep.out, "Output CSV path")->required();

  std::uint64_t seed = 0;
  int cases = 100;
  double tol = mdl::kGradCheckTolerance;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare analytic and numeric gradients");
  grad_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  grad_cmd->add_option("--cases", cases, "Instances per operation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  grad_cmd->add_option("--tol", tol, "Relative error tolerance")->capture_default_str();

  std::string gt_dir, pred_dir, eval_out, interp = "11";
  double iou = 0.5;
  auto* eval_cmd = app.add_subcommand("dota-eval", "Rotated-box mAP over DOTA-v1.0 categories");
  eval_cmd->add_option("--gt", gt_dir, "Directory of annotation .txt files")->required();
  eval_cmd->add_option("--pred", pred_dir, "Directory of Task1_<category>.txt files")->required();
  eval_cmd->add_option("--iou", iou, "SkewIoU match threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--interp", interp, "AP interpolation: 11 or all")
      ->capture_default_str()
      ->check(CLI::IsMember({"11", "all"}));
  eval_cmd->add_option("--out", eval_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*sweep_cmd) return run_sweep_command(sweep);
    if (*grad_cmd) return run_gradcheck_command(seed, cases, tol);
    return run_eval_command(gt_dir, pred_dir, iou, interp, eval_out);
  } catch (const mdl::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
}
