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

#include "pano/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "pano/error.hpp"
#include "pano/parallel.hpp"

namespace pano {
namespace {

double normalize_yaw(double yaw) {
  double y = std::fmod(yaw + kPi, 2 * kPi);
  if (y < 0) y += 2 * kPi;
  y -= kPi;
  return y >= kPi ? y - 2 * kPi : y;
}

}  // namespace

PerspectiveCamera PerspectiveCamera::with_hfov(double hfov, int width, int height, double yaw,
                                               double pitch, double roll) {
  PerspectiveCamera cam;
  cam.hfov = hfov;
  cam.vfov = 2.0 * std::atan(std::tan(hfov / 2.0) * height / width);
  cam.width = width;
  cam.height = height;
  cam.yaw = normalize_yaw(yaw);
  cam.pitch = pitch;
  cam.roll = roll;
  cam.validate();
  return cam;
}

void PerspectiveCamera::validate() const {
  if (!(hfov > 0 && hfov < kPi) || !(vfov > 0 && vfov < kPi)) {
    throw InvalidArgumentError("camera fov must lie in (0, pi)");
  }
  if (width <= 0 || height <= 0) throw InvalidArgumentError("camera size must be positive");
  if (!(pitch >= -kPi / 2 && pitch <= kPi / 2)) {
    throw InvalidArgumentError("camera pitch must lie in [-pi/2, pi/2]");
  }
  if (!(yaw >= -kPi && yaw < kPi)) throw InvalidArgumentError("camera yaw must lie in [-pi, pi)");
}

double PerspectiveCamera::fx() const { return 0.5 * width / std::tan(hfov / 2.0); }
double PerspectiveCamera::fy() const { return 0.5 * height / std::tan(vfov / 2.0); }

Mat3 PerspectiveCamera::rotation() const {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  Mat3 r_yaw;
  r_yaw << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  Mat3 r_pitch;
  r_pitch << 1, 0, 0, 0, cp, sp, 0, -sp, cp;
  Mat3 r_roll;
  r_roll << cr, -sr, 0, sr, cr, 0, 0, 0, 1;
  return r_yaw * r_pitch * r_roll;
}

Vec3 PerspectiveCamera::camera_ray(double x, double y) const {
  return {(x + 0.5 - 0.5 * width) / fx(), (y + 0.5 - 0.5 * height) / fy(), 1.0};
}

Vec3 PerspectiveCamera::ray(double x, double y) const {
  return (rotation() * camera_ray(x, y)).normalized();
}

std::optional<PixelCoord> PerspectiveCamera::project(const Vec3& dir) const {
  const Vec3 c = rotation().transpose() * dir;
  if (c.z() <= 0) return std::nullopt;
  const double x = fx() * c.x() / c.z() + 0.5 * width - 0.5;
  const double y = fy() * c.y() / c.z() + 0.5 * height - 0.5;
  if (x < -0.5 || x > width - 0.5 || y < -0.5 || y > height - 0.5) return std::nullopt;
  return PixelCoord{x, y};
}

Vec3 pixel_to_dir(double u, double v, int width, int height) {
  if (width != 2 * height || height <= 0) {
    throw BoundsError("pixel_to_dir requires width == 2*height");
  }
  if (!(u >= 0 && u < width) || !(v >= 0 && v < height)) {
    throw BoundsError("pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") outside " + std::to_string(width) + "x" + std::to_string(height));
  }
  const double lon = (u + 0.5) / width * 2.0 * kPi - kPi;
  const double lat = (v + 0.5) / height * kPi - kPi / 2.0;
  const double cl = std::cos(lat);
  return {cl * std::sin(lon), std::sin(lat), cl * std::cos(lon)};
}

PixelCoord dir_to_pixel(const Vec3& d, int width, int height) {
  const double n = d.norm();
  if (!(n > 0) || !std::isfinite(n)) throw InvalidDirectionError("direction has zero length");
  const Vec3 unit = d / n;
  const double lon = std::atan2(unit.x(), unit.z());
  const double lat = std::asin(std::clamp(unit.y(), -1.0, 1.0));
  double u = (lon + kPi) / (2.0 * kPi) * width - 0.5;
  if (u < 0) u += width;
  if (u >= width) u -= width;
  const double v = (lat + kPi / 2.0) / kPi * height - 0.5;
  return {u, v};
}

void sample_erp(const Image& erp, double u, double v, float* out) {
  const int w = erp.width();
  const int h = erp.height();
  const double fu = std::floor(u);
  const double wx = u - fu;
  int x0 = static_cast<int>(fu) % w;
  if (x0 < 0) x0 += w;
  const int x1 = (x0 + 1) % w;
  const double vc = std::clamp(v, 0.0, h - 1.0);
  const int y0 = static_cast<int>(vc);
  const int y1 = std::min(y0 + 1, h - 1);
  const double wy = vc - y0;
  for (int c = 0; c < erp.channels(); ++c) {
    const double top = erp.at(x0, y0, c) * (1.0 - wx) + erp.at(x1, y0, c) * wx;
    const double bot = erp.at(x0, y1, c) * (1.0 - wx) + erp.at(x1, y1, c) * wx;
    out[c] = static_cast<float>(top * (1.0 - wy) + bot * wy);
  }
}

PerspectiveView equi_to_pers(const ErpFrame& erp, const PerspectiveCamera& cam) {
  cam.validate();
  PerspectiveView view{cam, Image(cam.width, cam.height, 3)};
  const Mat3 rot = cam.rotation();
  const double fx = cam.fx();
  const double fy = cam.fy();
  const int w = erp.width();
  const int h = erp.height();
  parallel_for(static_cast<std::size_t>(cam.height), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < cam.width; ++x) {
      const Vec3 c((x + 0.5 - 0.5 * cam.width) / fx, (y + 0.5 - 0.5 * cam.height) / fy, 1.0);
      const PixelCoord p = dir_to_pixel(rot * c, w, h);
      sample_erp(erp.image(), p.u, p.v, &view.image.at(x, y, 0));
    }
  });
  return view;
}

ErpReprojection pers_to_equi(const std::vector<PerspectiveView>& views, int width, int height) {
  if (views.empty()) throw InvalidArgumentError("pers_to_equi: empty view list");
  ErpReprojection out{ErpFrame(width, height), std::vector<std::uint8_t>(
                                                   static_cast<std::size_t>(width) * height, 0)};
  std::vector<Mat3> inv;
  std::vector<std::pair<double, double>> focal;
  inv.reserve(views.size());
  focal.reserve(views.size());
  for (const auto& view : views) {
    view.camera.validate();
    if (view.image.width() != view.camera.width || view.image.height() != view.camera.height ||
        view.image.channels() != 3) {
      throw ShapeError("pers_to_equi: view raster does not match its camera");
    }
    inv.push_back(view.camera.rotation().transpose());
    focal.emplace_back(view.camera.fx(), view.camera.fy());
  }
  Image& dst = out.frame.image();
  parallel_for(static_cast<std::size_t>(height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    for (int u = 0; u < width; ++u) {
      const Vec3 d = pixel_to_dir(u, v, width, height);
      for (std::size_t k = 0; k < views.size(); ++k) {
        const auto& cam = views[k].camera;
        const Vec3 c = inv[k] * d;
        if (c.z() <= 0) continue;
        const double x = focal[k].first * c.x() / c.z() + 0.5 * cam.width - 0.5;
        const double y = focal[k].second * c.y() / c.z() + 0.5 * cam.height - 0.5;
        if (x < -0.5 || x > cam.width - 0.5 || y < -0.5 || y > cam.height - 0.5) continue;
        const Image& src = views[k].image;
        const double xc = std::clamp(x, 0.0, cam.width - 1.0);
        const double yc = std::clamp(y, 0.0, cam.height - 1.0);
        const int x0 = static_cast<int>(xc), y0 = static_cast<int>(yc);
        const int x1 = std::min(x0 + 1, cam.width - 1), y1 = std::min(y0 + 1, cam.height - 1);
        const double wx = xc - x0, wy = yc - y0;
        for (int ch = 0; ch < 3; ++ch) {
          const double top = src.at(x0, y0, ch) * (1 - wx) + src.at(x1, y0, ch) * wx;
          const double bot = src.at(x0, y1, ch) * (1 - wx) + src.at(x1, y1, ch) * wx;
          dst.at(u, v, ch) = static_cast<float>(top * (1 - wy) + bot * wy);
        }
        out.coverage[static_cast<std::size_t>(v) * width + u] = 1;
      }
    }
  });
  return out;
}

std::vector<PerspectiveCamera> crop_grid(CropGrid kind) {
  std::vector<PerspectiveCamera> cams;
  const double hfov = deg2rad(90.0);
  if (kind == CropGrid::kCache16) {
    for (double pitch_deg : {0.0, 60.0}) {
      for (int k = 0; k < 8; ++k) {
        cams.push_back(PerspectiveCamera::with_hfov(hfov, 768, 512, deg2rad(45.0 * k),
                                                    deg2rad(pitch_deg)));
      }
    }
  } else {
    for (int k = 0; k < 8; ++k) {
      cams.push_back(PerspectiveCamera::with_hfov(hfov, 224, 224, deg2rad(45.0 * k)));
    }
  }
  return cams;
}

std::vector<double> latitude_weights(int height) {
  if (height < 1) throw InvalidArgumentError("latitude_weights: height must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(height));
  for (int v = 0; v < height; ++v) {
    w[v] = std::cos((v + 0.5) / height * kPi - kPi / 2.0);
  }
  return w;
}

std::string cameras_to_json(const std::vector<PerspectiveCamera>& cams) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cams) {
    arr.push_back({{"yaw_deg", rad2deg(c.yaw)},
                   {"pitch_deg", rad2deg(c.pitch)},
                   {"roll_deg", rad2deg(c.roll)},
                   {"hfov_deg", rad2deg(c.hfov)},
                   {"width", c.width},
                   {"height", c.height}});
  }
  return arr.dump(2);
}

std::vector<PerspectiveCamera> cameras_from_json(const std::string& text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("camera list: ") + e.what());
  }
  if (!arr.is_array()) throw DataError("camera list must be a JSON array");
  std::vector<PerspectiveCamera> cams;
  for (const auto& item : arr) {
    try {
      cams.push_back(PerspectiveCamera::with_hfov(
          deg2rad(item.at("hfov_deg").get<double>()), item.at("width").get<int>(),
          item.at("height").get<int>(), deg2rad(item.at("yaw_deg").get<double>()),
          deg2rad(item.at("pitch_deg").get<double>()),
          deg2rad(item.value("roll_deg", 0.0))));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("camera entry: ") + e.what());
    }
  }
  return cams;
}

}  // namespace pano
