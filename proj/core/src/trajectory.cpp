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

#include "pano/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pano/error.hpp"

namespace pano {

Trajectory Trajectory::from_poses(std::vector<Pose> poses) {
  Trajectory t;
  t.times.resize(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) t.times[i] = static_cast<double>(i);
  t.poses = std::move(poses);
  return t;
}

Trajectory interpolate(const Trajectory& keyposes, int count) {
  if (keyposes.size() < 2) throw InvalidArgumentError("interpolate needs at least 2 keyposes");
  if (keyposes.times.size() != keyposes.poses.size()) {
    throw InvalidArgumentError("interpolate: poses and times differ in length");
  }
  if (count < 2) throw InvalidArgumentError("interpolate: count must be >= 2");
  const double t0 = keyposes.times.front();
  const double t1 = keyposes.times.back();
  Trajectory out;
  out.poses.reserve(count);
  out.times.reserve(count);
  std::size_t seg = 0;
  for (int i = 0; i < count; ++i) {
    if (i == 0) {
      out.poses.push_back(keyposes.poses.front());
      out.times.push_back(t0);
      continue;
    }
    if (i == count - 1) {
      out.poses.push_back(keyposes.poses.back());
      out.times.push_back(t1);
      continue;
    }
    const double t = t0 + (t1 - t0) * i / (count - 1);
    while (seg + 2 < keyposes.size() && t > keyposes.times[seg + 1]) ++seg;
    const double ta = keyposes.times[seg];
    const double tb = keyposes.times[seg + 1];
    const double s = tb > ta ? std::clamp((t - ta) / (tb - ta), 0.0, 1.0) : 0.0;
    const Pose& a = keyposes.poses[seg];
    const Pose& b = keyposes.poses[seg + 1];
    Pose p;
    p.translation = a.translation + s * (b.translation - a.translation);
    // Eigen's slerp flips the target when the dot product is negative.
    p.rotation = a.rotation.slerp(s, b.rotation).normalized();
    out.poses.push_back(p);
    out.times.push_back(t);
  }
  return out;
}

Trajectory smooth(const Trajectory& traj, const SmoothingConfig& cfg) {
  if (!(cfg.sigma > 0)) throw InvalidArgumentError("smooth: sigma must be positive");
  const std::size_t n = traj.size();
  Trajectory out = traj;
  if (n < 3) return out;
  const int radius = static_cast<int>(std::ceil(3.0 * cfg.sigma));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    Vec3 pos = Vec3::Zero();
    Eigen::Vector4d qsum = Eigen::Vector4d::Zero();
    double wsum = 0.0;
    const Quat& center = traj.poses[i].rotation;
    for (int k = -radius; k <= radius; ++k) {
      const long j = static_cast<long>(i) + k;
      if (j < 0 || j >= static_cast<long>(n)) continue;
      const double w = std::exp(-0.5 * (k * k) / (cfg.sigma * cfg.sigma));
      if (w == 0.0) continue;
      const Pose& q = traj.poses[static_cast<std::size_t>(j)];
      pos += w * q.translation;
      Eigen::Vector4d c = q.rotation.coeffs();
      if (c.dot(center.coeffs()) < 0) c = -c;
      qsum += w * c;
      wsum += w;
    }
    out.poses[i].translation = pos / wsum;
    Quat avg;
    avg.coeffs() = qsum / qsum.norm();
    out.poses[i].rotation = avg;
  }
  return out;
}

Trajectory reverse(const Trajectory& traj) {
  Trajectory out;
  out.poses.assign(traj.poses.rbegin(), traj.poses.rend());
  out.times.resize(traj.times.size());
  if (!traj.times.empty()) {
    const double span = traj.times.front() + traj.times.back();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      out.times[i] = span - traj.times[traj.times.size() - 1 - i];
    }
  }
  return out;
}

TrajectoryDiagnostics validate(const Trajectory& traj) {
  TrajectoryDiagnostics diag;
  auto fail = [&](std::string msg) {
    diag.ok = false;
    diag.messages.push_back(std::move(msg));
  };
  if (traj.poses.size() != traj.times.size()) {
    fail("length: " + std::to_string(traj.poses.size()) + " poses vs " +
         std::to_string(traj.times.size()) + " times");
  }
  for (std::size_t i = 0; i < traj.poses.size(); ++i) {
    const Pose& p = traj.poses[i];
    if (!p.translation.allFinite() || !p.rotation.coeffs().allFinite()) {
      fail("nan: pose " + std::to_string(i) + " has non-finite values");
      continue;
    }
    const double norm = p.rotation.norm();
    if (std::abs(norm - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "quaternion_norm: pose " << i << " has norm " << norm;
      fail(msg.str());
    }
  }
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (!std::isfinite(traj.times[i])) {
      fail("nan: time " + std::to_string(i) + " is not finite");
    } else if (i > 0 && !(traj.times[i] > traj.times[i - 1])) {
      fail("monotonicity: time " + std::to_string(i) + " does not increase");
    }
  }
  return diag;
}

double second_difference_energy(const Trajectory& traj) {
  double e = 0.0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    e += (traj.poses[i + 1].translation - 2.0 * traj.poses[i].translation +
          traj.poses[i - 1].translation)
             .squaredNorm();
  }
  return e;
}

std::string trajectory_to_json(const Trajectory& traj) {
  nlohmann::json doc;
  doc["convention"] = kTrajectoryConvention;
  nlohmann::json poses = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Pose& p = traj.poses[i];
    poses.push_back({{"t", i < traj.times.size() ? traj.times[i] : static_cast<double>(i)},
                     {"p", {p.translation.x(), p.translation.y(), p.translation.z()}},
                     {"q", {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()}}});
  }
  doc["poses"] = std::move(poses);
  return doc.dump(2);
}

Trajectory trajectory_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("trajectory: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("convention")) {
    throw DataError("trajectory: missing convention string");
  }
  if (doc["convention"] != kTrajectoryConvention) {
    throw DataError("trajectory: unsupported convention '" + doc["convention"].dump() + "'");
  }
  Trajectory traj;
  try {
    for (const auto& item : doc.at("poses")) {
      const auto p = item.at("p").get<std::vector<double>>();
      const auto q = item.at("q").get<std::vector<double>>();
      if (p.size() != 3 || q.size() != 4) throw DataError("trajectory: p needs 3 and q needs 4 values");
      Pose pose;
      pose.translation = Vec3(p[0], p[1], p[2]);
      pose.rotation = Quat(q[0], q[1], q[2], q[3]);
      traj.poses.push_back(pose);
      traj.times.push_back(item.at("t").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("trajectory: ") + e.what());
  }
  return traj;
}

}  // namespace pano
