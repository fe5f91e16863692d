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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pano/cache.hpp"
#include "pano/curate.hpp"
#include "pano/image.hpp"
#include "pano/trajectory.hpp"

namespace pano::testing {

/// Sum of random von Mises lobes on the sphere, so the raster is continuous
/// across the seam and at the poles. `shift_px` rolls the content to the
/// right by that many columns, evaluated analytically.
ErpFrame smooth_erp(int width, int height, std::uint64_t seed, double shift_px = 0.0);

Image noise_image(int width, int height, int channels, std::uint64_t seed);

Image constant_image(int width, int height, int channels, float value);

/// Camera-centred sphere of radius `radius` around the world origin, seen
/// through cache16 crops taken at `pose`.
class SphereDepthProvider : public DepthProvider {
 public:
  SphereDepthProvider(double radius, Pose pose, float confidence = 4.0f)
      : radius_(radius), pose_(pose), confidence_(confidence) {}
  DepthView fetch(std::size_t frame, std::size_t view,
                  const PerspectiveCamera& camera) const override;

 private:
  double radius_;
  Pose pose_;
  float confidence_;
};

/// Random points with depths drawn from a small discrete set so that ties
/// occur.
PointCloud random_cloud(std::size_t count, std::uint64_t seed);

Trajectory jittered_line(int count, double jitter, std::uint64_t seed);

/// Curation fixtures. Frames are 256x128 at 10 fps, 5 seconds unless noted.
VideoClip clean_pan_clip(std::uint64_t seed);
VideoClip static_clip();
VideoClip slideshow_clip();
VideoClip dual_fisheye_clip();
VideoClip hard_seam_clip();
VideoClip single_cut_clip();
VideoClip alternating_clip();
VideoClip frozen_bottom_clip();

struct LabelledClip {
  VideoClip clip;
  bool accept;
  std::string reason;  ///< expected among reject reasons when !accept
};

/// The 12-clip battery: the seven defect clips plus five clean pans.
std::vector<LabelledClip> curation_battery();

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

}  // namespace pano::testing
