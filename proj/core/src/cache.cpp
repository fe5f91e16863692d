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

#include "pano/cache.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pano/error.hpp"
#include "pano/image_io.hpp"
#include "pano/parallel.hpp"

namespace pano {

PointCloud::PointCloud(std::vector<CachePoint> points) {
  for (const auto& p : points) {
    if (!p.position.allFinite()) throw DataError("point cloud: non-finite position");
  }
  points_ = std::move(points);
}

void PointCloud::add(const CachePoint& p) {
  if (!p.position.allFinite()) throw DataError("point cloud: non-finite position");
  points_.push_back(p);
}

void DepthView::validate() const {
  const std::size_t n = static_cast<std::size_t>(camera.width) * camera.height;
  if (depth.size() != n || confidence.size() != n) {
    throw ShapeError("depth view: depth/confidence size does not match camera");
  }
  if (!color.empty() && (color.width() != camera.width || color.height() != camera.height ||
                         color.channels() != 3)) {
    throw ShapeError("depth view: color raster does not match camera");
  }
  if (sky_mask && sky_mask->size() != n) {
    throw ShapeError("depth view: sky mask size does not match camera");
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

PointCloud lift_view(const DepthView& view) {
  view.validate();
  const PerspectiveCamera& cam = view.camera;
  const Mat3 rot = cam.rotation();
  PointCloud cloud;
  cloud.reserve(view.depth.size());
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * cam.width + x;
      const float d = view.depth[i];
      if (d < 0.0f || std::isnan(d)) {
        throw DataError("lift_view: negative depth at pixel (" + std::to_string(x) + ", " +
                        std::to_string(y) + ")");
      }
      if (d == 0.0f) continue;
      const Vec3 p = view.pose.apply(rot * (static_cast<double>(d) * cam.camera_ray(x, y)));
      CachePoint cp;
      cp.position = p.cast<float>();
      if (!view.color.empty()) {
        for (int c = 0; c < 3; ++c) {
          cp.color[c] = static_cast<std::uint8_t>(
              std::clamp(std::lround(view.color.at(x, y, c)), 0L, 255L));
        }
      }
      cp.confidence = view.confidence[i];
      cloud.add(cp);
    }
  }
  return cloud;
}

PointCloud confidence_filter(const PointCloud& cloud, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgumentError("confidence threshold must be in (0,1)");
  std::vector<CachePoint> kept;
  kept.reserve(cloud.size());
  for (const auto& p : cloud.points()) {
    if (sigmoid(p.confidence) >= tau) kept.push_back(p);
  }
  return PointCloud(std::move(kept));
}

DepthView depth_edge_filter(const DepthView& view, double rel_tol) {
  if (!(rel_tol > 0.0)) throw InvalidArgumentError("edge relative tolerance must be positive");
  view.validate();
  DepthView out = view;
  const int w = view.camera.width;
  const int h = view.camera.height;
  auto depth_at = [&](int x, int y) { return view.depth[static_cast<std::size_t>(y) * w + x]; };
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dp = depth_at(x, y);
      if (!(dp > 0.0)) continue;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + kDx[k], ny = y + kDy[k];
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const double dq = depth_at(nx, ny);
        if (!(dq > 0.0)) continue;
        if (std::abs(dp - dq) / std::max(dp, dq) > rel_tol) {
          out.confidence[static_cast<std::size_t>(y) * w + x] =
              -std::numeric_limits<float>::infinity();
          break;
        }
      }
    }
  }
  return out;
}

DepthView apply_sky_mask(const DepthView& view, double far_threshold) {
  view.validate();
  DepthView out = view;
  for (std::size_t i = 0; i < out.depth.size(); ++i) {
    const bool sky = view.sky_mask ? (*view.sky_mask)[i] != 0 : out.depth[i] > far_threshold;
    if (sky) out.depth[i] = 0.0f;
  }
  return out;
}

PointCloud merge(const std::vector<PointCloud>& clouds) {
  std::size_t total = 0;
  for (const auto& c : clouds) total += c.size();
  std::vector<CachePoint> points;
  points.reserve(total);
  for (const auto& c : clouds) points.insert(points.end(), c.points().begin(), c.points().end());
  return PointCloud(std::move(points));
}

namespace {

Pose pose_from_json(const nlohmann::json& j) {
  const auto p = j.at("p").get<std::vector<double>>();
  const auto q = j.at("q").get<std::vector<double>>();
  if (p.size() != 3 || q.size() != 4) throw DataError("pose needs p[3] and q[4]");
  Pose pose;
  pose.translation = Vec3(p[0], p[1], p[2]);
  pose.rotation = Quat(q[0], q[1], q[2], q[3]).normalized();
  return pose;
}

std::vector<float> load_raster(const std::filesystem::path& path, const PerspectiveCamera& cam,
                               const std::string& what, std::size_t frame, std::size_t view) {
  if (!std::filesystem::exists(path)) {
    throw IngestionError("missing " + what + " file for frame " + std::to_string(frame) +
                         " view " + std::to_string(view) + ": " + path.string());
  }
  FloatRaster r = read_pfm(path);
  if (r.width != cam.width || r.height != cam.height) {
    throw IngestionError(what + " raster for frame " + std::to_string(frame) + " view " +
                         std::to_string(view) + " is " + std::to_string(r.width) + "x" +
                         std::to_string(r.height) + ", expected " + std::to_string(cam.width) +
                         "x" + std::to_string(cam.height));
  }
  return std::move(r.values);
}

}  // namespace

ManifestDepthProvider::ManifestDepthProvider(const std::filesystem::path& manifest)
    : root_(manifest.parent_path()) {
  std::ifstream in(manifest);
  if (!in) throw IngestionError("cannot open depth manifest " + manifest.string());
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    for (const auto& v : doc.at("views")) {
      Entry e;
      e.depth = v.at("depth").get<std::string>();
      e.confidence = v.at("confidence").get<std::string>();
      if (v.contains("color")) e.color = v["color"].get<std::string>();
      if (v.contains("sky_mask")) e.sky_mask = v["sky_mask"].get<std::string>();
      e.pose = v.contains("pose") ? pose_from_json(v["pose"]) : Pose::identity();
      entries_.push_back({{v.value("frame", std::size_t{0}), v.at("view").get<std::size_t>()},
                          std::move(e)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError("depth manifest " + manifest.string() + ": " + e.what());
  }
}

DepthView ManifestDepthProvider::fetch(std::size_t frame, std::size_t view,
                                       const PerspectiveCamera& camera) const {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const auto& e) { return e.first == std::make_pair(frame, view); });
  if (it == entries_.end()) {
    throw IngestionError("depth manifest has no entry for frame " + std::to_string(frame) +
                         " view " + std::to_string(view));
  }
  const Entry& e = it->second;
  DepthView dv;
  dv.camera = camera;
  dv.pose = e.pose;
  dv.depth = load_raster(root_ / e.depth, camera, "depth", frame, view);
  dv.confidence = load_raster(root_ / e.confidence, camera, "confidence", frame, view);
  if (e.color) {
    dv.color = read_png(root_ / *e.color);
    if (dv.color.channels() != 3) throw IngestionError("color view must be RGB: " + e.color->string());
  }
  if (e.sky_mask) {
    int w = 0, h = 0;
    dv.sky_mask = read_mask_png(root_ / *e.sky_mask, &w, &h);
    if (w != camera.width || h != camera.height) {
      throw IngestionError("sky mask size mismatch for frame " + std::to_string(frame) + " view " +
                           std::to_string(view));
    }
  }
  dv.validate();
  return dv;
}

PointCloud build_cache(const std::vector<ErpFrame>& frames, const DepthProvider& provider,
                       const CacheConfig& cfg) {
  const auto cams = crop_grid(CropGrid::kCache16);
  const std::size_t n = frames.size() * cams.size();
  std::vector<PointCloud> per_view(n);
  parallel_for(n, [&](std::size_t k) {
    const std::size_t f = k / cams.size();
    const std::size_t v = k % cams.size();
    DepthView dv = provider.fetch(f, v, cams[v]);
    if (dv.color.empty()) dv.color = equi_to_pers(frames[f], cams[v]).image;
    dv = depth_edge_filter(dv, cfg.edge_rel_tol);
    dv = apply_sky_mask(dv, cfg.sky_far_threshold);
    per_view[k] = confidence_filter(lift_view(dv), cfg.confidence_threshold);
  });
  return merge(per_view);
}

std::vector<std::uint8_t> encode_ply(const PointCloud& cloud) {
  std::ostringstream header;
  header << "ply\nformat binary_little_endian 1.0\nelement vertex " << cloud.size()
         << "\nproperty float x\nproperty float y\nproperty float z\n"
            "property uchar red\nproperty uchar green\nproperty uchar blue\n"
            "property float confidence\nend_header\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.reserve(out.size() + cloud.size() * 19);
  auto put_float = [&](float f) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  };
  for (const auto& p : cloud.points()) {
    put_float(p.position.x());
    put_float(p.position.y());
    put_float(p.position.z());
    out.insert(out.end(), p.color.begin(), p.color.end());
    put_float(p.confidence);
  }
  return out;
}

void write_ply(const std::filesystem::path& path, const PointCloud& cloud) {
  write_file_atomic(path, encode_ply(cloud));
}

PointCloud read_ply(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const std::string marker = "end_header\n";
  const std::string text(bytes.begin(), bytes.begin() + std::min<std::size_t>(bytes.size(), 4096));
  const auto end = text.find(marker);
  if (text.rfind("ply\n", 0) != 0 || end == std::string::npos) {
    throw IngestionError("ply: malformed header in " + path.string());
  }
  std::istringstream hs(text.substr(0, end));
  std::string line;
  std::size_t count = 0;
  std::vector<std::string> props;
  bool little = false;
  while (std::getline(hs, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      little = fmt == "binary_little_endian";
    } else if (word == "element") {
      std::string name;
      ls >> name >> count;
      if (name != "vertex") throw IngestionError("ply: unsupported element " + name);
    } else if (word == "property") {
      std::string type, name;
      ls >> type >> name;
      props.push_back(type + " " + name);
    }
  }
  const std::vector<std::string> expected = {"float x",     "float y",      "float z",
                                             "uchar red",   "uchar green",  "uchar blue",
                                             "float confidence"};
  if (!little || props != expected) {
    throw IngestionError("ply: expected binary_little_endian x,y,z,red,green,blue,confidence in " +
                         path.string());
  }
  const std::size_t offset = end + marker.size();
  if (bytes.size() != offset + count * 19) throw IngestionError("ply: truncated body in " + path.string());
  std::vector<CachePoint> points(count);
  std::size_t k = offset;
  auto get_float = [&]() {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[k + b]) << (8 * b);
    k += 4;
    return std::bit_cast<float>(bits);
  };
  for (auto& p : points) {
    const float x = get_float();
    const float y = get_float();
    const float z = get_float();
    p.position = Eigen::Vector3f(x, y, z);
    p.color = {bytes[k], bytes[k + 1], bytes[k + 2]};
    k += 3;
    p.confidence = get_float();
  }
  return PointCloud(std::move(points));
}

}  // namespace pano
