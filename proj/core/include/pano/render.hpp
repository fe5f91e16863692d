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
#include <functional>
#include <vector>

#include "pano/cache.hpp"
#include "pano/image.hpp"
#include "pano/trajectory.hpp"

namespace pano {

/// Screen-space disk splat. Radius r = clamp(round(k / depth), r_min, r_max)
/// pixels; the horizontal half-width is r / cos(latitude), capped at W/2.
struct SplatConfig {
  double k = 4.0;  ///< px * m
  int r_min = 1;
  int r_max = 3;
  /// rows this close to either pole are written whole when touched
  int polar_rows = 2;
};

/// One rendered equirectangular frame. Invalid pixels have depth +inf and
/// black color.
struct GeoFrame {
  ErpFrame color;
  std::vector<float> depth;
  std::vector<std::uint8_t> valid;
};

struct GeoVideo {
  std::vector<GeoFrame> frames;
  Trajectory trajectory;
};

struct ProjectedPoint {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

/// Throws DegeneratePointError when p coincides with the camera center.
ProjectedPoint project_point(const Vec3& p, const Pose& pose, int width, int height);

int splat_radius(double depth, const SplatConfig& splat);

/// Calls emit(x, y) for every pixel a point projected to (u, v) at `depth`
/// covers; x already wrapped into [0, W).
void for_each_splat_pixel(double u, double v, double depth, int width, int height,
                          const SplatConfig& splat, const std::function<void(int, int)>& emit);

/// Z-buffered render. Nearest depth wins; equal depths keep the lowest point
/// index.
GeoFrame render_frame(const PointCloud& cloud, const Pose& pose, int width, int height,
                      const SplatConfig& splat = {});

/// Frames are rendered independently; order follows the trajectory.
GeoVideo render_video(const PointCloud& cloud, const Trajectory& traj, int width, int height,
                      const SplatConfig& splat = {});

/// Writes frame_%04d.png, mask_%04d.png (1-bit) and manifest.json.
void write_geo_video(const std::filesystem::path& dir, const GeoVideo& video,
                     const SplatConfig& splat, const std::string& trajectory_file,
                     const std::string& config_hash);

}  // namespace pano
