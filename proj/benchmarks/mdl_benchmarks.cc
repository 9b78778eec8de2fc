#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "mdl/box_losses.h"
#include "mdl/evaluate.h"
#include "mdl/geometry.h"
#include "mdl/gradcheck.h"

namespace {

std::vector<mdl::ObbVertices> random_boxes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0, 100), side(1, 30), ang(0, 2 * std::numbers::pi);
  std::vector<mdl::ObbVertices> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(mdl::vertices_from_cwha({pos(rng), pos(rng), side(rng), side(rng), ang(rng)}));
  }
  return out;
}

void BM_SkewIou(benchmark::State& state) {
  const auto a = random_boxes(256, 1);
  const auto b = random_boxes(256, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdl::skew_iou(a[i & 255], b[i & 255]));
    ++i;
  }
}
BENCHMARK(BM_SkewIou);

void BM_Mdl(benchmark::State& state) {
  const auto src = state.range(0) ? mdl::CovarianceSource::kFromPrediction
                                  : mdl::CovarianceSource::kFromTarget;
  const auto a = random_boxes(256, 3);
  const auto b = random_boxes(256, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdl::mdl(a[i & 255], b[i & 255], src));
    ++i;
  }
}
BENCHMARK(BM_Mdl)->Arg(0)->Arg(1);

void BM_MdlBoundaryMinWithGrad(benchmark::State& state) {
  const auto a = random_boxes(256, 5);
  const auto b = random_boxes(256, 6);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mdl::mdl_boundary_min_with_grad(a[i & 255], b[i & 255], mdl::CovarianceSource::kFromTarget));
    ++i;
  }
}
BENCHMARK(BM_MdlBoundaryMinWithGrad);

void BM_RotatedNms(benchmark::State& state) {
  const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)), 7);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> score(0, 1);
  std::vector<mdl::Detection> dets;
  for (const auto& b : boxes) dets.push_back({b, score(rng), static_cast<int>(rng() % 3)});
  for (auto _ : state) benchmark::DoNotOptimize(mdl::rotated_nms(dets, 0.1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RotatedNms)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

void BM_EvaluateMap(benchmark::State& state) {
  const auto boxes = random_boxes(600, 9);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> score(0, 1), jitter(-1, 1);
  std::vector<mdl::DotaAnnotation> gts(10);
  std::vector<mdl::ImageDetection> preds;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    auto& ann = gts[i % 10];
    ann.image_id = "img" + std::to_string(i % 10);
    const int cls = static_cast<int>(i % mdl::kNumDotaCategories);
    ann.instances.push_back({boxes[i], cls, false});
    preds.push_back({ann.image_id,
                     {mdl::translated(boxes[i], {jitter(rng), jitter(rng)}), score(rng), cls}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(mdl::evaluate_map(gts, preds));
}
BENCHMARK(BM_EvaluateMap);

void BM_GradcheckAll(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mdl::check_all(1, 100));
}
BENCHMARK(BM_GradcheckAll)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
