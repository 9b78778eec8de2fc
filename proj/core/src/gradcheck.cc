#include "mdl/gradcheck.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "mdl/box_losses.h"
#include "mdl/errors.h"
#include "mdl/heatmap.h"

namespace mdl {
namespace {

constexpr double kKinkMargin = 1e-3;
constexpr double kPermutationMargin = 1e-3;
constexpr int kMaxDrawsPerCase = 1000;

// A drawn instance: f over the flattened prediction, its analytic
// gradient, and the serialized inputs.
struct Instance {
  std::vector<double> x;
  std::vector<double> analytic;
  ScalarFunction f;
  std::string repr;
};

using Generator = std::function<std::optional<Instance>(std::mt19937_64&)>;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

std::string serialize(std::span<const double> xs) {
  std::string out = "[";
  char buf[32];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", xs[i]);
    if (i) out += ",";
    out += buf;
  }
  return out + "]";
}

ObbVertices random_target(std::mt19937_64& rng) {
  double w = 0.0;
  double h = 0.0;
  do {
    w = log_uniform(rng, 0.1, 50.0);
    h = log_uniform(rng, 0.1, 50.0);
  } while (std::max(w, h) / std::min(w, h) > 10.0);
  return vertices_from_cwha({uniform(rng, 0.0, 100.0), uniform(rng, 0.0, 100.0), w, h,
                             uniform(rng, 0.0, 2.0 * std::numbers::pi)});
}

ObbVertices jitter(const ObbVertices& box, double amplitude, std::mt19937_64& rng) {
  auto xs = box.flat();
  for (double& x : xs) x += uniform(rng, -amplitude, amplitude);
  return ObbVertices::from_flat(xs);
}

double min_side(const ObbVertices& box) {
  const Point2 ab = box.b() - box.a();
  const Point2 bc = box.c() - box.b();
  return std::min(std::hypot(ab.x, ab.y), std::hypot(bc.x, bc.y));
}

bool identical(const ObbVertices& p, const ObbVertices& q) { return p.flat() == q.flat(); }

bool permutation_ambiguous(std::array<double, 4> losses) {
  std::sort(losses.begin(), losses.end());
  return losses[1] - losses[0] < kPermutationMargin;
}

bool near_kink(const ObbVertices& pred, const ObbVertices& target, NormKind kind) {
  const auto p = pred.flat();
  const auto t = target.flat();
  for (std::size_t i = 0; i < 8; ++i) {
    const double ax = std::abs(p[i] - t[i]);
    if (kind == NormKind::kL1 && ax < kKinkMargin) return true;
    if (kind == NormKind::kSmoothL1 && std::abs(ax - 1.0) < kKinkMargin) return true;
  }
  return false;
}

Instance box_instance(const ObbVertices& pred, const ObbVertices& target,
                      std::function<double(const ObbVertices&)> f, const BoxLossGrad& g) {
  const auto x = pred.flat();
  Instance inst;
  inst.x.assign(x.begin(), x.end());
  inst.analytic.assign(g.grad.begin(), g.grad.end());
  inst.f = [f = std::move(f)](std::span<const double> xs) {
    return f(ObbVertices::from_flat(xs.first<8>()));
  };
  inst.repr = "pred=" + serialize(x) + ";target=" + serialize(target.flat());
  return inst;
}

// Prediction near the target; for boundary checks, relabeled cyclically
// so the winning relabeling is not always the identity.
ObbVertices mdl_prediction(const ObbVertices& target, bool relabel, std::mt19937_64& rng) {
  ObbVertices pred = jitter(target, 0.2 * min_side(target), rng);
  if (relabel) pred = cyclic_shift(pred, std::uniform_int_distribution<int>(0, 3)(rng));
  return pred;
}

Generator mdl_generator(CovarianceSource source, SigmaGradient mode) {
  return [=](std::mt19937_64& rng) -> std::optional<Instance> {
    const ObbVertices target = random_target(rng);
    const ObbVertices pred = mdl_prediction(target, false, rng);
    if (identical(pred, target)) return std::nullopt;
    if (source == CovarianceSource::kFromPrediction && mode == SigmaGradient::kDetached) {
      // Sigma frozen at the unperturbed prediction on both sides of the check.
      const Covariance2 sigma = sample_covariance(pred);
      return box_instance(
          pred, target,
          [=](const ObbVertices& p) { return mdl_with_covariance(p, target, sigma); },
          mdl_with_grad(pred, target, source, mode));
    }
    return box_instance(
        pred, target, [=](const ObbVertices& p) { return mdl(p, target, source); },
        mdl_with_grad(pred, target, source, mode));
  };
}

Generator mdl_boundary_generator(CovarianceSource source) {
  return [=](std::mt19937_64& rng) -> std::optional<Instance> {
    const ObbVertices target = random_target(rng);
    const ObbVertices pred = mdl_prediction(target, true, rng);
    if (identical(pred, target)) return std::nullopt;
    if (permutation_ambiguous(mdl_cyclic_losses(pred, target, source))) return std::nullopt;
    return box_instance(
        pred, target, [=](const ObbVertices& p) { return mdl_boundary_min(p, target, source); },
        mdl_boundary_min_with_grad(pred, target, source, SigmaGradient::kFull));
  };
}

Generator norm_generator(NormKind kind, bool boundary) {
  return [=](std::mt19937_64& rng) -> std::optional<Instance> {
    const ObbVertices target = random_target(rng);
    ObbVertices pred = jitter(target, 2.0, rng);
    if (boundary) pred = cyclic_shift(pred, std::uniform_int_distribution<int>(0, 3)(rng));
    if (identical(pred, target)) return std::nullopt;
    if (!boundary) {
      if (near_kink(pred, target, kind)) return std::nullopt;
      return box_instance(
          pred, target, [=](const ObbVertices& p) { return ln_norm_loss(p, target, kind); },
          ln_norm_loss_with_grad(pred, target, kind));
    }
    const auto losses = ln_norm_cyclic_losses(pred, target, kind);
    if (permutation_ambiguous(losses)) return std::nullopt;
    const int best = static_cast<int>(std::min_element(losses.begin(), losses.end()) -
                                      losses.begin());
    if (near_kink(cyclic_shift(pred, best), target, kind)) return std::nullopt;
    return box_instance(
        pred, target, [=](const ObbVertices& p) { return ln_norm_boundary_min(p, target, kind); },
        ln_norm_boundary_min_with_grad(pred, target, kind));
  };
}

Generator focal_generator() {
  return [](std::mt19937_64& rng) -> std::optional<Instance> {
    constexpr int kW = 4;
    constexpr int kH = 4;
    std::vector<double> target(kW * kH);
    std::vector<double> pred(kW * kH);
    for (double& t : target) t = uniform(rng, 0.0, 0.6);
    for (double& p : pred) p = uniform(rng, 0.1, 0.9);
    target[std::uniform_int_distribution<int>(0, kW * kH - 1)(rng)] = 1.0;
    const HeatmapGrid target_grid(kW, kH, target);
    const auto g = focal_heatmap_loss_with_grad(HeatmapGrid(kW, kH, pred), target_grid);
    Instance inst;
    inst.x = pred;
    inst.analytic = g.grad;
    inst.f = [target_grid](std::span<const double> xs) {
      return focal_heatmap_loss(HeatmapGrid(kW, kH, std::vector<double>(xs.begin(), xs.end())),
                                target_grid);
    };
    inst.repr = "pred=" + serialize(pred) + ";target=" + serialize(target);
    return inst;
  };
}

Generator offset_generator() {
  return [](std::mt19937_64& rng) -> std::optional<Instance> {
    const Covariance2 sigma = covariance_from_vertices(random_target(rng));
    const Offset2 target{uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)};
    const Offset2 pred{uniform(rng, -1.0, 2.0), uniform(rng, -1.0, 2.0)};
    if (std::hypot(pred.dx - target.dx, pred.dy - target.dy) < kKinkMargin) return std::nullopt;
    const auto g = offset_loss_with_grad(pred, target, sigma);
    Instance inst;
    inst.x = {pred.dx, pred.dy};
    inst.analytic = {g.grad[0], g.grad[1]};
    inst.f = [=](std::span<const double> xs) {
      return offset_loss({xs[0], xs[1]}, target, sigma);
    };
    const std::array<double, 5> tail = {target.dx, target.dy, sigma.sxx, sigma.sxy, sigma.syy};
    inst.repr = "pred=" + serialize(inst.x) + ";target_and_sigma=" + serialize(tail);
    return inst;
  };
}

struct NamedGenerator {
  std::string name;
  Generator generate;
};

std::vector<NamedGenerator> generators() {
  using CS = CovarianceSource;
  using SG = SigmaGradient;
  return {
      {"mdl_t", mdl_generator(CS::kFromTarget, SG::kDetached)},
      {"mdl_p", mdl_generator(CS::kFromPrediction, SG::kFull)},
      {"mdl_p_detached_sigma", mdl_generator(CS::kFromPrediction, SG::kDetached)},
      {"mdl_boundary_min_t", mdl_boundary_generator(CS::kFromTarget)},
      {"mdl_boundary_min_p", mdl_boundary_generator(CS::kFromPrediction)},
      {"l1", norm_generator(NormKind::kL1, false)},
      {"l2", norm_generator(NormKind::kL2, false)},
      {"smooth_l1", norm_generator(NormKind::kSmoothL1, false)},
      {"l1_boundary_min", norm_generator(NormKind::kL1, true)},
      {"l2_boundary_min", norm_generator(NormKind::kL2, true)},
      {"smooth_l1_boundary_min", norm_generator(NormKind::kSmoothL1, true)},
      {"focal_heatmap", focal_generator()},
      {"offset", offset_generator()},
  };
}

}  // namespace

std::vector<double> central_difference(const ScalarFunction& f, std::span<const double> x,
                                       double step) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = f(probe);
    probe[i] = x[i] - step;
    const double down = f(probe);
    probe[i] = x[i];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw OracleFailure("central_difference: non-finite function value at coordinate " +
                          std::to_string(i));
    }
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / scale;
}

std::vector<std::string> gradcheck_op_names() {
  std::vector<std::string> names;
  for (const auto& g : generators()) names.push_back(g.name);
  return names;
}

std::vector<GradReport> check_all(std::uint64_t seed, int n_cases, double tolerance,
                                  double step) {
  if (n_cases < 1) throw InvalidInputError("check_all: n_cases must be >= 1");
  std::vector<GradReport> reports;
  const auto gens = generators();
  for (std::size_t op = 0; op < gens.size(); ++op) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(op)};
    std::mt19937_64 rng(seq);
    GradReport report;
    report.op_name = gens[op].name;
    for (int c = 0; c < n_cases; ++c) {
      std::optional<Instance> inst;
      for (int draw = 0; draw < kMaxDrawsPerCase && !inst; ++draw) {
        inst = gens[op].generate(rng);
        if (!inst) ++report.rejected;
      }
      if (!inst) break;
      ++report.cases;
      double worst = 0.0;
      try {
        const auto numeric = central_difference(inst->f, inst->x, step);
        for (std::size_t i = 0; i < numeric.size(); ++i) {
          worst = std::max(worst, relative_error(inst->analytic[i], numeric[i]));
        }
      } catch (const OracleFailure&) {
        worst = std::numeric_limits<double>::infinity();
      }
      if (report.worst_input.empty() || worst > report.max_rel_error) {
        report.max_rel_error = worst;
        report.worst_input = inst->repr;
      }
    }
    report.passed = report.cases == n_cases && report.max_rel_error <= tolerance;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string format_reports(std::span<const GradReport> reports) {
  std::string out;
  char buf[256];
  for (const GradReport& r : reports) {
    std::snprintf(buf, sizeof buf, "%-24s %s max_rel_error=%.6e cases=%d rejected=%d worst=",
                  r.op_name.c_str(), r.passed ? "PASS" : "FAIL", r.max_rel_error, r.cases,
                  r.rejected);
    out += buf;
    out += r.worst_input;
    out += "\n";
  }
  return out;
}

}  // namespace mdl
