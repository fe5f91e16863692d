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

#include <Eigen/Geometry>
#include <string>
#include <vector>

#include "pano/sphere.hpp"

namespace pano {

using Quat = Eigen::Quaterniond;

/// World-from-camera rigid transform.
struct Pose {
  Vec3 translation = Vec3::Zero();
  Quat rotation = Quat::Identity();

  static Pose identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  /// camera-from-world applied to a world point
  Vec3 apply_inverse(const Vec3& p) const { return rotation.conjugate() * (p - translation); }

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.translation == b.translation && a.rotation.coeffs() == b.rotation.coeffs();
  }
};

/// Timed pose sequence. Construction does not enforce invariants; use
/// validate() to check them.
struct Trajectory {
  std::vector<Pose> poses;
  std::vector<double> times;

  std::size_t size() const { return poses.size(); }
  bool empty() const { return poses.empty(); }

  /// Poses at times 0, 1, ..., n-1.
  static Trajectory from_poses(std::vector<Pose> poses);

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Samples `count` poses at uniform time spacing over the keypose time span.
/// Translation is piecewise linear; rotation is shortest-arc slerp within each
/// segment. The first and last outputs are copies of the end keyposes.
Trajectory interpolate(const Trajectory& keyposes, int count);

struct SmoothingConfig {
  double sigma = 2.0;  ///< Gaussian std-dev in frames
};

/// Gaussian smoothing truncated at +-3 sigma and renormalized at the
/// boundaries. Rotations use weighted quaternion averaging after aligning each
/// neighbor to the center frame's hemisphere. End poses are pinned.
Trajectory smooth(const Trajectory& traj, const SmoothingConfig& cfg);

/// Reverses pose order; times become t'_i = t_first + t_last - t_{n-1-i} so
/// they stay increasing and span the same interval.
Trajectory reverse(const Trajectory& traj);

struct TrajectoryDiagnostics {
  bool ok = true;
  std::vector<std::string> messages;
};

TrajectoryDiagnostics validate(const Trajectory& traj);

/// Sum over interior frames of |p_{t+1} - 2 p_t + p_{t-1}|^2.
double second_difference_energy(const Trajectory& traj);

inline constexpr const char* kTrajectoryConvention =
    "world_from_camera, +X right, +Y down, +Z forward";

/// {"convention": ..., "poses": [{"t":..., "p":[x,y,z], "q":[w,x,y,z]}, ...]}
std::string trajectory_to_json(const Trajectory& traj);
/// Rejects documents whose convention string is missing or different.
Trajectory trajectory_from_json(const std::string& text);

}  // namespace pano
