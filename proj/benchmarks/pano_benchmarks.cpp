// Copyright 2026 The pano360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pano/cache.hpp"
#include "pano/curate.hpp"
#include "pano/flow.hpp"
#include "pano/metrics.hpp"
#include "pano/render.hpp"
#include "pano/sphere.hpp"

namespace pano {
namespace {

Image pattern(int w, int h, double shift) {
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = static_cast<float>(128.0 + 90.0 * std::sin(0.05 * (x + shift) + 0.7 * c) *
                                                         std::cos(0.09 * y - 0.3 * c));
      }
    }
  }
  return img;
}

PointCloud cloud(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<float> g;
  std::uniform_real_distribution<float> r(2.0f, 6.0f);
  PointCloud out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CachePoint p;
    p.position = Eigen::Vector3f(g(rng), g(rng), g(rng)).normalized() * r(rng);
    p.color = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i >> 8), 7};
    out.add(p);
  }
  return out;
}

void BM_EquiToPers(benchmark::State& state) {
  const ErpFrame erp(pattern(1024, 512, 0.0));
  const auto cam = crop_grid(CropGrid::kCache16)[0];
  for (auto _ : state) benchmark::DoNotOptimize(equi_to_pers(erp, cam));
  state.SetItemsProcessed(state.iterations() * cam.width * cam.height);
}
BENCHMARK(BM_EquiToPers)->Unit(benchmark::kMillisecond);

void BM_PersToEqui(benchmark::State& state) {
  const ErpFrame erp(pattern(1024, 512, 0.0));
  std::vector<PerspectiveView> views;
  for (const auto& cam : crop_grid(CropGrid::kCache16)) views.push_back(equi_to_pers(erp, cam));
  for (auto _ : state) benchmark::DoNotOptimize(pers_to_equi(views, 1024, 512));
}
BENCHMARK(BM_PersToEqui)->Unit(benchmark::kMillisecond);

void BM_RenderFrame(benchmark::State& state) {
  const PointCloud c = cloud(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(render_frame(c, Pose::identity(), 1024, 512));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RenderFrame)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_BlockFlow(benchmark::State& state) {
  const Image a = to_luma(pattern(512, 256, 0.0));
  const Image b = to_luma(pattern(512, 256, 6.0));
  for (auto _ : state) benchmark::DoNotOptimize(block_flow(a, b));
}
BENCHMARK(BM_BlockFlow)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
  const Image a = pattern(512, 512, 0.0);
  const Image b = pattern(512, 512, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMillisecond);

void BM_BoundarySmoothness(benchmark::State& state) {
  const Image a = pattern(1024, 512, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(boundary_smoothness(a));
}
BENCHMARK(BM_BoundarySmoothness);

}  // namespace
}  // namespace pano

BENCHMARK_MAIN();
