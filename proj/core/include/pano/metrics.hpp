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

#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pano/flow.hpp"
#include "pano/image.hpp"

namespace pano {

struct CropConfig {
  double hfov_deg = 90.0;
  int width = 512;
  int height = 512;
  double pitch_deg = 0.0;
};

/// Perspective crops at yaw 0, 45, ..., 315 degrees.
std::vector<Image> crops8(const ErpFrame& erp, const CropConfig& cfg = {});

/// Returned by psnr for identical inputs.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

/// 10 log10(255^2 / MSE) over every sample of every channel.
double psnr(const Image& a, const Image& b);

/// Mean single-scale SSIM on Rec.601 luma: 11x11 Gaussian window (sigma 1.5)
/// over every fully contained window, C1 = (0.01*255)^2, C2 = (0.03*255)^2.
double ssim(const Image& a, const Image& b);

/// Short-term warping error: for each consecutive pair, flow I_t -> I_{t+1},
/// sample I_{t+1} at x + flow(x), and average |I_t - warped| / 255 over
/// pixels whose target lies inside the frame. Mean over pairs.
double stwe(const std::vector<Image>& video, const FlowBackend& backend = {});

struct MetricReport {
  CropConfig crop;
  std::size_t frames = 0;
  std::vector<std::vector<double>> psnr;  ///< [frame][crop]
  std::vector<std::vector<double>> ssim;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
  std::optional<double> stwe;
};

/// Crops both videos, scores every crop pair, and computes STWE per crop
/// track of the generated video (averaged over the 8 tracks).
MetricReport evaluate(const std::vector<ErpFrame>& generated, const std::vector<ErpFrame>& reference,
                      const CropConfig& cfg = {}, bool with_stwe = true,
                      const FlowBackend& backend = {});

std::string metrics_to_json(const MetricReport& report, const std::string& config_hash = "");
std::string metrics_to_csv(const MetricReport& report);

}  // namespace pano
