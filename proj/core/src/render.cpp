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

#include "pano/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <nlohmann/json.hpp>

#include "pano/error.hpp"
#include "pano/image_io.hpp"
#include "pano/parallel.hpp"

namespace pano {
namespace {

template <class Emit>
void splat_pixels(double u, double v, double depth, int width, int height,
                  const SplatConfig& splat, Emit&& emit) {
  int cx = static_cast<int>(std::floor(u + 0.5)) % width;
  if (cx < 0) cx += width;
  const int cy = std::clamp(static_cast<int>(std::floor(v + 0.5)), 0, height - 1);
  const int r = splat_radius(depth, splat);
  const double lat = (v + 0.5) / height * kPi - kPi / 2.0;
  const double cos_lat = std::cos(lat);
  const double half = 0.5 * width;
  const double rx = cos_lat > r / half ? std::min(r / cos_lat, half) : half;
  for (int dy = -r; dy <= r; ++dy) {
    const int y = cy + dy;
    if (y < 0 || y >= height) continue;
    if (y < splat.polar_rows || y >= height - splat.polar_rows) {
      for (int x = 0; x < width; ++x) emit(x, y);
      continue;
    }
    const double t = static_cast<double>(dy) / r;
    const int hw = static_cast<int>(std::floor(rx * std::sqrt(std::max(0.0, 1.0 - t * t)) + 1e-9));
    if (2 * hw + 1 >= width) {
      for (int x = 0; x < width; ++x) emit(x, y);
      continue;
    }
    for (int dx = -hw; dx <= hw; ++dx) {
      int x = cx + dx;
      if (x < 0) x += width;
      if (x >= width) x -= width;
      emit(x, y);
    }
  }
}

}  // namespace

ProjectedPoint project_point(const Vec3& p, const Pose& pose, int width, int height) {
  const Mat3 inv = pose.rotation.conjugate().toRotationMatrix();
  const Vec3 c = inv * (p - pose.translation);
  const double depth = c.norm();
  if (!(depth > 0.0)) throw DegeneratePointError("point coincides with the camera center");
  const PixelCoord px = dir_to_pixel(c, width, height);
  return {px.u, px.v, depth};
}

int splat_radius(double depth, const SplatConfig& splat) {
  const double raw = std::round(splat.k / depth);
  const double clamped = std::clamp(raw, static_cast<double>(splat.r_min),
                                    static_cast<double>(std::max(splat.r_min, splat.r_max)));
  return static_cast<int>(clamped);
}

void for_each_splat_pixel(double u, double v, double depth, int width, int height,
                          const SplatConfig& splat, const std::function<void(int, int)>& emit) {
  splat_pixels(u, v, depth, width, height, splat, emit);
}

GeoFrame render_frame(const PointCloud& cloud, const Pose& pose, int width, int height,
                      const SplatConfig& splat) {
  if (width != 2 * height) throw ShapeError("render_frame requires width == 2*height");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  GeoFrame frame{ErpFrame(width, height),
                 std::vector<float>(n, std::numeric_limits<float>::infinity()),
                 std::vector<std::uint8_t>(n, 0)};
  std::vector<double> zbuf(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint32_t> owner(n, 0);
  const Mat3 inv = pose.rotation.conjugate().toRotationMatrix();
  const auto& points = cloud.points();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 c = inv * (points[i].position.cast<double>() - pose.translation);
    const double depth = c.norm();
    if (!(depth > 0.0)) continue;
    const PixelCoord px = dir_to_pixel(c, width, height);
    splat_pixels(px.u, px.v, depth, width, height, splat, [&](int x, int y) {
      const std::size_t k = static_cast<std::size_t>(y) * width + x;
      if (depth < zbuf[k]) {
        zbuf[k] = depth;
        owner[k] = static_cast<std::uint32_t>(i);
      }
    });
  }
  Image& color = frame.color.image();
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(zbuf[k])) continue;
    frame.valid[k] = 1;
    frame.depth[k] = static_cast<float>(zbuf[k]);
    const auto& p = points[owner[k]];
    const int x = static_cast<int>(k % width);
    const int y = static_cast<int>(k / width);
    for (int c = 0; c < 3; ++c) color.at(x, y, c) = p.color[c];
  }
  return frame;
}

GeoVideo render_video(const PointCloud& cloud, const Trajectory& traj, int width, int height,
                      const SplatConfig& splat) {
  if (traj.empty()) throw InvalidArgumentError("render_video: empty trajectory");
  GeoVideo video;
  video.trajectory = traj;
  video.frames.resize(traj.size());
  parallel_for(traj.size(), [&](std::size_t t) {
    video.frames[t] = render_frame(cloud, traj.poses[t], width, height, splat);
  });
  return video;
}

void write_geo_video(const std::filesystem::path& dir, const GeoVideo& video,
                     const SplatConfig& splat, const std::string& trajectory_file,
                     const std::string& config_hash) {
  std::filesystem::create_directories(dir);
  if (video.frames.empty()) throw InvalidArgumentError("write_geo_video: no frames");
  const int w = video.frames.front().color.width();
  const int h = video.frames.front().color.height();
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t t = 0; t < video.frames.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04zu.png", t);
    char mask[32];
    std::snprintf(mask, sizeof(mask), "mask_%04zu.png", t);
    write_png(dir / name, video.frames[t].color.image());
    write_mask_png(dir / mask, w, h, video.frames[t].valid);
    frames.push_back({{"color", name}, {"mask", mask}});
  }
  nlohmann::json manifest = {
      {"W", w},
      {"H", h},
      {"T", video.frames.size()},
      {"trajectory", trajectory_file},
      {"splat", {{"k", splat.k}, {"r_min", splat.r_min}, {"r_max", splat.r_max},
                 {"polar_rows", splat.polar_rows}}},
      {"frames", std::move(frames)},
      {"config_hash", config_hash}};
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace pano
