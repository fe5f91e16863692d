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

// The 3D cache: colored, confidence-scored world points lifted from
// per-view depth and filtered before merging.
//
// Per-view pipeline order: depth-edge filter, sky mask, lift, confidence
// filter. Edge filtering runs first because it works on the depth raster and
// marks points through their confidence.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "pano/image.hpp"
#include "pano/sphere.hpp"
#include "pano/trajectory.hpp"

namespace pano {

struct CachePoint {
  Eigen::Vector3f position = Eigen::Vector3f::Zero();
  std::array<std::uint8_t, 3> color{0, 0, 0};
  float confidence = 0.0f;  ///< raw (pre-sigmoid) score

  friend bool operator==(const CachePoint& a, const CachePoint& b) {
    return a.position == b.position && a.color == b.color &&
           (a.confidence == b.confidence ||
            (std::isnan(a.confidence) && std::isnan(b.confidence)));
  }
};

/// World-frame point cloud. add() rejects non-finite positions.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<CachePoint> points);

  void add(const CachePoint& p);
  void reserve(std::size_t n) { points_.reserve(n); }

  const std::vector<CachePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<CachePoint> points_;
};

/// Per-view reconstruction output. Depth is z-depth along the camera's
/// optical axis in meters; 0 marks an invalid pixel. The pose maps the
/// panorama-center frame to world; the camera's own yaw/pitch/roll orients
/// the view inside that frame.
struct DepthView {
  PerspectiveCamera camera;
  Pose pose;
  std::vector<float> depth;
  Image color;
  std::vector<float> confidence;
  std::optional<std::vector<std::uint8_t>> sky_mask;

  /// Throws ShapeError when rasters disagree with the camera size.
  void validate() const;
};

inline constexpr double kDefaultConfidenceThreshold = 0.25;
inline constexpr double kDefaultEdgeRelTol = 0.03;
inline constexpr double kDefaultSkyFarThreshold = 200.0;

double sigmoid(double x);

/// Back-projects every pixel with depth > 0. Negative depth is a DataError.
PointCloud lift_view(const DepthView& view);

/// Keeps points with sigmoid(confidence) >= tau (boundary kept).
PointCloud confidence_filter(const PointCloud& cloud, double tau = kDefaultConfidenceThreshold);

/// Sets confidence to -inf on pixels where some valid 4-neighbor differs by
/// more than rel_tol relative to the larger depth.
DepthView depth_edge_filter(const DepthView& view, double rel_tol = kDefaultEdgeRelTol);

/// Zeroes depth where the sky mask is set; without a mask, zeroes depth
/// beyond far_threshold meters.
DepthView apply_sky_mask(const DepthView& view, double far_threshold = kDefaultSkyFarThreshold);

PointCloud merge(const std::vector<PointCloud>& clouds);

struct CacheConfig {
  double confidence_threshold = kDefaultConfidenceThreshold;
  double edge_rel_tol = kDefaultEdgeRelTol;
  double sky_far_threshold = kDefaultSkyFarThreshold;
};

/// Supplies per-view depth for frame `frame`, view `view` of the cache16 grid.
/// An empty color raster is filled from the ERP crop by build_cache.
class DepthProvider {
 public:
  virtual ~DepthProvider() = default;
  virtual DepthView fetch(std::size_t frame, std::size_t view,
                          const PerspectiveCamera& camera) const = 0;
};

/// Reads a manifest JSON:
///   {"views": [{"frame": 0, "view": 3, "depth": "d.pfm",
///               "confidence": "c.pfm", "color": "c.png"?, "sky_mask": "s.png"?,
///               "pose": {"p": [x,y,z], "q": [w,x,y,z]}}, ...]}
/// Paths are relative to the manifest. Depth and confidence are required.
class ManifestDepthProvider : public DepthProvider {
 public:
  explicit ManifestDepthProvider(const std::filesystem::path& manifest);
  DepthView fetch(std::size_t frame, std::size_t view,
                  const PerspectiveCamera& camera) const override;

 private:
  struct Entry {
    std::filesystem::path depth;
    std::filesystem::path confidence;
    std::optional<std::filesystem::path> color;
    std::optional<std::filesystem::path> sky_mask;
    Pose pose;
  };
  std::filesystem::path root_;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Entry>> entries_;
};

/// crop_grid(cache16) per frame -> edge filter -> sky mask -> lift ->
/// confidence filter -> merge (frame-major, view order within a frame).
PointCloud build_cache(const std::vector<ErpFrame>& frames, const DepthProvider& provider,
                       const CacheConfig& cfg = {});

/// Binary little-endian PLY: x,y,z float; red,green,blue uchar; confidence float.
std::vector<std::uint8_t> encode_ply(const PointCloud& cloud);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_ply(const std::filesystem::path& path);

}  // namespace pano
