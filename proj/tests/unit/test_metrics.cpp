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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "pano/error.hpp"
#include "pano/metrics.hpp"

namespace pano {
namespace {

// Direct per-window SSIM with explicit Gaussian weights.
double ssim_reference(const Image& a, const Image& b) {
  const Image la = to_luma(a), lb = to_luma(b);
  double g[11][11];
  double gs = 0.0;
  for (int j = 0; j < 11; ++j) {
    for (int i = 0; i < 11; ++i) {
      g[j][i] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * 1.5 * 1.5));
      gs += g[j][i];
    }
  }
  const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
  double total = 0.0;
  int count = 0;
  for (int y = 0; y + 11 <= la.height(); ++y) {
    for (int x = 0; x + 11 <= la.width(); ++x) {
      double mx = 0, my = 0;
      for (int j = 0; j < 11; ++j) {
        for (int i = 0; i < 11; ++i) {
          mx += g[j][i] / gs * la.at(x + i, y + j, 0);
          my += g[j][i] / gs * lb.at(x + i, y + j, 0);
        }
      }
      double vx = 0, vy = 0, cov = 0;
      for (int j = 0; j < 11; ++j) {
        for (int i = 0; i < 11; ++i) {
          const double dx = la.at(x + i, y + j, 0) - mx, dy = lb.at(x + i, y + j, 0) - my;
          vx += g[j][i] / gs * dx * dx;
          vy += g[j][i] / gs * dy * dy;
          cov += g[j][i] / gs * dx * dy;
        }
      }
      total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / count;
}

TEST(Metrics, PsnrAnalytic) {
  const Image a(32, 32, 3, 0.0f), b(32, 32, 3, 16.0f);
  EXPECT_NEAR(psnr(a, b), 10 * std::log10(255.0 * 255.0 / 256.0), 1e-12);
  EXPECT_NEAR(psnr(a, b), 24.05, 0.01);
  EXPECT_EQ(psnr(a, a), kPsnrIdentical);
  EXPECT_THROW(psnr(a, Image(16, 32, 3)), ShapeError);
}

TEST(Metrics, PsnrSymmetricAndMonotone) {
  const Image base = testing::noise_image(48, 48, 3, 1);
  std::mt19937_64 rng(2);
  std::normal_distribution<float> n(0.0f, 1.0f);
  std::vector<float> noise(base.data().size());
  for (float& v : noise) v = n(rng);
  double last = kPsnrIdentical;
  for (float sigma : {1.0f, 2.0f, 4.0f, 8.0f}) {
    Image b = base;
    for (std::size_t i = 0; i < noise.size(); ++i) b.data()[i] += sigma * noise[i];
    EXPECT_EQ(psnr(base, b), psnr(b, base));
    EXPECT_LT(psnr(base, b), last);
    last = psnr(base, b);
  }
}

TEST(Metrics, SsimMatchesBruteForce) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Image a = testing::noise_image(32, 24, 3, 10 + s);
    Image b = a;
    const Image n = testing::noise_image(32, 24, 3, 50 + s);
    for (std::size_t i = 0; i < b.data().size(); ++i) b.data()[i] = 0.7f * b.data()[i] + 0.3f * n.data()[i];
    EXPECT_NEAR(ssim(a, b), ssim_reference(a, b), 1e-4);
  }
}

TEST(Metrics, SsimProperties) {
  const Image a = testing::smooth_erp(64, 32, 3).image();
  const Image b = testing::noise_image(64, 32, 3, 4);
  EXPECT_NEAR(ssim(a, a), 1.0, 1e-9);
  EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-12);
  Image a8 = a, b8 = b;
  for (float& v : a8.data()) v += 8.0f;
  for (float& v : b8.data()) v += 8.0f;
  EXPECT_LE(std::abs(ssim(a8, b8) - ssim(a, b)), 1e-3);
  EXPECT_THROW(ssim(Image(10, 40, 3), Image(10, 40, 3)), InvalidArgumentError);
}

TEST(Metrics, SsimOfInvertedImageIsLow) {
  const Image a = testing::noise_image(64, 64, 1, 5);
  Image inv = a;
  for (float& v : inv.data()) v = 255.0f - v;
  EXPECT_LT(ssim(a, inv), 0.2);
  EXPECT_NEAR(ssim(a, inv), ssim_reference(a, inv), 1e-4);
}

TEST(Metrics, Crops8) {
  const ErpFrame flat(128, 64, 42.0f);
  const auto crops = crops8(flat, {90.0, 64, 64, 0.0});
  ASSERT_EQ(crops.size(), 8u);
  for (const auto& c : crops) {
    for (float v : c.data()) ASSERT_FLOAT_EQ(v, 42.0f);
  }
}

TEST(Metrics, CropsRotateWithYaw) {
  // 45 degrees of yaw is an eighth of the width.
  const ErpFrame erp = testing::smooth_erp(512, 256, 7);
  const ErpFrame rotated = testing::smooth_erp(512, 256, 7, 64.0);
  const CropConfig cfg{90.0, 128, 128, 0.0};
  const auto a = crops8(erp, cfg);
  const auto b = crops8(rotated, cfg);
  for (int k = 0; k < 8; ++k) EXPECT_GE(psnr(b[(k + 1) % 8], a[k]), 40.0);
}

TEST(Metrics, EvaluateInvariantToJointYawRotation) {
  std::vector<ErpFrame> gt, gen, gt_rot, gen_rot;
  for (int t = 0; t < 2; ++t) {
    gt.push_back(testing::smooth_erp(512, 256, 30 + t));
    gen.push_back(testing::smooth_erp(512, 256, 40 + t));
    gt_rot.push_back(testing::smooth_erp(512, 256, 30 + t, 64.0));
    gen_rot.push_back(testing::smooth_erp(512, 256, 40 + t, 64.0));
  }
  const CropConfig cfg{90.0, 96, 96, 0.0};
  const double a = evaluate(gen, gt, cfg, false).mean_psnr;
  const double b = evaluate(gen_rot, gt_rot, cfg, false).mean_psnr;
  EXPECT_LE(std::abs(a - b), 0.1);
}

TEST(Metrics, StweStaticIsZeroAndShuffledIsWorse) {
  const Image f = testing::smooth_erp(128, 64, 9).image();
  EXPECT_EQ(stwe({f, f, f}), 0.0);
  std::vector<Image> ordered;
  for (int t = 0; t < 5; ++t) ordered.push_back(testing::smooth_erp(128, 64, 9, 2.0 * t).image());
  const double e = stwe(ordered);
  EXPECT_LT(e, 0.05);
  const std::vector<Image> shuffled{ordered[0], ordered[3], ordered[1], ordered[4], ordered[2]};
  EXPECT_GT(stwe(shuffled), e);
  EXPECT_THROW(stwe({f}), InvalidArgumentError);
}

TEST(Metrics, EvaluateIdentityAndOffset) {
  std::vector<ErpFrame> gt{testing::smooth_erp(256, 128, 1), testing::smooth_erp(256, 128, 2)};
  for (auto& f : gt) {
    for (float& v : f.image().data()) v = std::clamp(v, 20.0f, 230.0f);
  }
  const CropConfig cfg{90.0, 64, 64, 0.0};
  const auto same = evaluate(gt, gt, cfg);
  EXPECT_EQ(same.mean_psnr, kPsnrIdentical);
  EXPECT_NEAR(same.mean_ssim, 1.0, 1e-9);
  ASSERT_EQ(same.psnr.size(), 2u);
  EXPECT_EQ(same.psnr[0].size(), 8u);
  ASSERT_TRUE(same.stwe.has_value());

  auto gen = gt;
  for (auto& f : gen) {
    for (float& v : f.image().data()) v += 16.0f;
  }
  EXPECT_NEAR(evaluate(gen, gt, cfg, false).mean_psnr, 24.05, 0.01);
  gen.pop_back();
  EXPECT_THROW(evaluate(gen, gt, cfg), ShapeError);
}

TEST(Metrics, ReportEchoesCropConfig) {
  std::vector<ErpFrame> v{testing::smooth_erp(128, 64, 1)};
  const auto r = evaluate(v, v, {80.0, 32, 32, 0.0}, false);
  const std::string json = metrics_to_json(r, "h");
  EXPECT_NE(json.find("\"hfov_deg\": 80.0"), std::string::npos);
  EXPECT_NE(json.find("\"inf\""), std::string::npos);
  EXPECT_NE(metrics_to_csv(r).find("hfov_deg=80"), std::string::npos);
}

}  // namespace
}  // namespace pano
