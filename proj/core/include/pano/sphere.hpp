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

// Spherical and equirectangular projection math.
//
// Frame convention (camera and panorama alike): +X right, +Y down, +Z
// forward. An ERP pixel (u, v) has longitude lambda = (u+0.5)/W*2pi - pi and
// latitude phi = (v+0.5)/H*pi - pi/2, so the top row looks up (-Y) and the
// image center looks along +Z.
//
// A perspective camera's rays are rotated by roll about +Z, then pitch, then
// yaw. Positive yaw turns the optical axis toward +X (increasing longitude),
// positive pitch turns it toward +Y (down).

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pano/image.hpp"

namespace pano {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Continuous pixel coordinate; integer values are pixel centers.
struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

/// Pinhole camera oriented relative to a panorama center.
struct PerspectiveCamera {
  double hfov = kPi / 2;
  double vfov = kPi / 2;
  int width = 512;
  int height = 512;
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;

  /// Builds a camera with square pixels: vfov follows from hfov and aspect.
  /// Angles in radians; yaw is normalized to [-pi, pi).
  static PerspectiveCamera with_hfov(double hfov, int width, int height, double yaw = 0.0,
                                     double pitch = 0.0, double roll = 0.0);

  /// Throws InvalidArgumentError on fov/size/pitch violations.
  void validate() const;

  double fx() const;
  double fy() const;

  /// Camera-to-panorama rotation.
  Mat3 rotation() const;

  /// Unit ray in the panorama frame through continuous pixel (x, y), where
  /// integer coordinates are pixel centers.
  Vec3 ray(double x, double y) const;

  /// Ray in the camera frame scaled so z == 1 (z-depth back-projection).
  Vec3 camera_ray(double x, double y) const;

  /// Projects a panorama-frame direction into continuous pixel coordinates.
  /// Empty when the direction is behind the camera or outside the image
  /// plane [-0.5, width-0.5] x [-0.5, height-0.5].
  std::optional<PixelCoord> project(const Vec3& dir) const;

  friend bool operator==(const PerspectiveCamera&, const PerspectiveCamera&) = default;
};

/// A rendered perspective raster and the camera that produced it.
struct PerspectiveView {
  PerspectiveCamera camera;
  Image image;
};

Vec3 pixel_to_dir(double u, double v, int width, int height);
PixelCoord dir_to_pixel(const Vec3& d, int width, int height);

/// Bilinear sample with horizontal wraparound and vertical clamp.
void sample_erp(const Image& erp, double u, double v, float* out);

PerspectiveView equi_to_pers(const ErpFrame& erp, const PerspectiveCamera& cam);

struct ErpReprojection {
  ErpFrame frame;
  std::vector<std::uint8_t> coverage;  ///< 1 where at least one view covers the pixel
};

/// Each ERP pixel takes the bilinear sample of the last view that covers it;
/// uncovered pixels stay black.
ErpReprojection pers_to_equi(const std::vector<PerspectiveView>& views, int width, int height);

enum class CropGrid { kCache16, kAnchor8 };

/// kCache16: yaws 0..315 step 45 at pitch 0 and +60 (down), hfov 90, 768x512.
/// kAnchor8: the same yaws at pitch 0, hfov 90, 224x224.
std::vector<PerspectiveCamera> crop_grid(CropGrid kind);

/// cos(latitude) of each row center; all values in (0, 1].
std::vector<double> latitude_weights(int height);

/// JSON array of {yaw_deg, pitch_deg, roll_deg, hfov_deg, width, height}.
std::string cameras_to_json(const std::vector<PerspectiveCamera>& cams);
std::vector<PerspectiveCamera> cameras_from_json(const std::string& text);

}  // namespace pano
