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

#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pano/sphere.hpp"

namespace pano::testing {
namespace {

constexpr int kClipW = 256;
constexpr int kClipH = 128;
constexpr double kClipFps = 10.0;
constexpr int kClipFrames = 50;

struct Lobe {
  Vec3 center;
  double kappa;
  double amplitude;
};

Vec3 random_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uz(-1.0, 1.0);
  std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
  const double z = uz(rng);
  const double a = ua(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(a), s * std::sin(a), z};
}

VideoClip make_clip(std::string id) {
  VideoClip clip;
  clip.fps = kClipFps;
  clip.source_id = std::move(id);
  return clip;
}

Image map_values(const Image& src, double gain, double offset) {
  Image out = src;
  for (float& v : out.data()) v = static_cast<float>(std::clamp(gain * v + offset, 0.0, 255.0));
  return out;
}

}  // namespace

ErpFrame smooth_erp(int width, int height, std::uint64_t seed, double shift_px) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> kappa(2.0, 10.0);
  std::uniform_real_distribution<double> amp(-90.0, 90.0);
  std::vector<Lobe> lobes[3];
  for (auto& channel : lobes) {
    for (int k = 0; k < 10; ++k) {
      const Vec3 c = random_direction(rng);
      const double kp = kappa(rng);
      channel.push_back({c, kp, amp(rng)});
    }
  }
  ErpFrame frame(width, height);
  Image& img = frame.image();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double lam = (x + 0.5 - shift_px) / width * 2.0 * kPi - kPi;
      const double phi = (y + 0.5) / height * kPi - kPi / 2.0;
      const Vec3 d(std::cos(phi) * std::sin(lam), std::sin(phi), std::cos(phi) * std::cos(lam));
      for (int c = 0; c < 3; ++c) {
        double v = 128.0;
        for (const auto& l : lobes[c]) v += l.amplitude * std::exp(l.kappa * (d.dot(l.center) - 1.0));
        img.at(x, y, c) = static_cast<float>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return frame;
}

Image noise_image(int width, int height, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  Image img(width, height, channels);
  for (float& v : img.data()) v = static_cast<float>(dist(rng));
  return img;
}

Image constant_image(int width, int height, int channels, float value) {
  return Image(width, height, channels, value);
}

DepthView SphereDepthProvider::fetch(std::size_t, std::size_t,
                                     const PerspectiveCamera& camera) const {
  DepthView view;
  view.camera = camera;
  view.pose = pose_;
  const std::size_t n = static_cast<std::size_t>(camera.width) * camera.height;
  view.depth.resize(n);
  view.confidence.assign(n, confidence_);
  const Mat3 rot = pose_.rotation.toRotationMatrix() * camera.rotation();
  const Vec3& c = pose_.translation;
  for (int y = 0; y < camera.height; ++y) {
    for (int x = 0; x < camera.width; ++x) {
      const Vec3 dir = rot * camera.camera_ray(x, y);
      const double a = dir.squaredNorm();
      const double b = 2.0 * c.dot(dir);
      const double cc = c.squaredNorm() - radius_ * radius_;
      const double s = (-b + std::sqrt(b * b - 4.0 * a * cc)) / (2.0 * a);
      view.depth[static_cast<std::size_t>(y) * camera.width + x] = static_cast<float>(s);
    }
  }
  return view;
}

PointCloud random_cloud(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> depth_pick(2, 6);
  std::uniform_int_distribution<int> color(0, 255);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<CachePoint> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    CachePoint p;
    if (!pts.empty() && u01(rng) < 0.15) {
      const auto j = static_cast<std::size_t>(u01(rng) * static_cast<double>(pts.size()));
      p.position = pts[std::min(j, pts.size() - 1)].position;
    } else {
      p.position = (random_direction(rng) * depth_pick(rng)).cast<float>();
    }
    p.color = {static_cast<std::uint8_t>(color(rng)), static_cast<std::uint8_t>(color(rng)),
               static_cast<std::uint8_t>(color(rng))};
    p.confidence = 1.0f;
    pts.push_back(p);
  }
  return PointCloud(std::move(pts));
}

Trajectory jittered_line(int count, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  std::vector<Pose> poses;
  for (int i = 0; i < count; ++i) {
    Pose p;
    p.translation = Vec3(0.1 * i + u(rng), u(rng), 0.05 * i + u(rng));
    p.rotation = Quat(Eigen::AngleAxisd(0.02 * i + u(rng), Vec3::UnitY()) *
                      Eigen::AngleAxisd(u(rng), Vec3::UnitX()));
    poses.push_back(p);
  }
  return Trajectory::from_poses(std::move(poses));
}

VideoClip clean_pan_clip(std::uint64_t seed) {
  VideoClip clip = make_clip("clean_pan_" + std::to_string(seed));
  for (int t = 0; t < kClipFrames; ++t) {
    clip.frames.push_back(smooth_erp(kClipW, kClipH, seed, t).image());
  }
  return clip;
}

VideoClip static_clip() {
  VideoClip clip = make_clip("static");
  const Image f = smooth_erp(kClipW, kClipH, 101).image();
  clip.frames.assign(kClipFrames, f);
  return clip;
}

VideoClip slideshow_clip() {
  VideoClip clip = make_clip("slideshow");
  for (int t = 0; t < kClipFrames; ++t) {
    if (t % 20 == 0) clip.frames.push_back(smooth_erp(kClipW, kClipH, 201 + t / 20).image());
    else clip.frames.push_back(clip.frames.back());
  }
  return clip;
}

VideoClip dual_fisheye_clip() {
  VideoClip clip = make_clip("dual_fisheye");
  const double r = 0.45 * kClipH;
  for (int t = 0; t < kClipFrames; ++t) {
    const Image tex = smooth_erp(kClipW, kClipH, 301, t).image();
    Image f(kClipW, kClipH, 3, 0.0f);
    for (int y = 0; y < kClipH; ++y) {
      for (int x = 0; x < kClipW; ++x) {
        const double cx = x < kClipW / 2 ? 0.25 * kClipW : 0.75 * kClipW;
        if (std::hypot(x + 0.5 - cx, y + 0.5 - 0.5 * kClipH) > r) continue;
        for (int c = 0; c < 3; ++c) f.at(x, y, c) = 0.5f * tex.at(x, y, c) + 100.0f;
      }
    }
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

VideoClip hard_seam_clip() {
  VideoClip clip = make_clip("hard_seam");
  for (int t = 0; t < kClipFrames; ++t) {
    Image f = smooth_erp(kClipW, kClipH, 401, t).image();
    for (int y = 0; y < kClipH; ++y) {
      for (int x = 0; x < kClipW; ++x) {
        const float ramp = 30.0f + 190.0f * static_cast<float>(x) / (kClipW - 1);
        for (int c = 0; c < 3; ++c) {
          f.at(x, y, c) = std::clamp(ramp + 0.3f * (f.at(x, y, c) - 128.0f), 0.0f, 255.0f);
        }
      }
    }
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

VideoClip single_cut_clip() {
  VideoClip clip = make_clip("single_cut");
  for (int t = 0; t < kClipFrames; ++t) {
    const Image f = smooth_erp(kClipW, kClipH, t < 25 ? 501 : 502, t).image();
    clip.frames.push_back(t < 25 ? map_values(f, 0.6, 0.0) : map_values(f, 0.6, 100.0));
  }
  return clip;
}

VideoClip alternating_clip() {
  VideoClip clip = make_clip("alternating");
  const Image a = map_values(smooth_erp(kClipW, kClipH, 601).image(), 0.4, 150.0);
  const Image b = map_values(smooth_erp(kClipW, kClipH, 602).image(), 0.4, 10.0);
  for (int t = 0; t < kClipFrames; ++t) clip.frames.push_back(t % 2 == 0 ? a : b);
  return clip;
}

VideoClip frozen_bottom_clip() {
  VideoClip clip = make_clip("frozen_bottom");
  const int logo_rows = static_cast<int>(std::lround(0.25 * kClipH));
  for (int t = 0; t < kClipFrames; ++t) {
    Image f = smooth_erp(kClipW, kClipH, 701, t).image();
    for (int y = kClipH - logo_rows; y < kClipH; ++y) {
      for (int x = 0; x < kClipW; ++x) {
        const float v = 60.0f + 40.0f * static_cast<float>(std::sin(2.0 * kPi * 3.0 * x / kClipW));
        for (int c = 0; c < 3; ++c) f.at(x, y, c) = v;
      }
    }
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

std::vector<LabelledClip> curation_battery() {
  std::vector<LabelledClip> out;
  out.push_back({static_clip(), false, "motion"});
  out.push_back({slideshow_clip(), false, "image_set"});
  out.push_back({dual_fisheye_clip(), false, "dual_fisheye"});
  out.push_back({hard_seam_clip(), false, "boundary_smoothness"});
  out.push_back({single_cut_clip(), true, ""});
  out.push_back({alternating_clip(), false, "overall_cut_ratio"});
  out.push_back({frozen_bottom_clip(), false, "static_region"});
  for (std::uint64_t s = 801; s <= 805; ++s) out.push_back({clean_pan_clip(s), true, ""});
  return out;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("pano360_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pano::testing
