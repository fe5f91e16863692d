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

#include "pano/config.hpp"

#include <cstdio>
#include <set>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pano/error.hpp"

namespace pano {
namespace {

using Json = nlohmann::ordered_json;

// Lists every field once; Reader and Writer give it meaning.
template <typename V>
void visit(RunConfig& c, V& v) {
  v.field("", "seed", c.seed);

  v.field("sphere", "erp_width", c.sphere.erp_width);
  v.field("sphere", "erp_height", c.sphere.erp_height);

  v.field("cache", "confidence_threshold", c.cache.confidence_threshold);
  v.field("cache", "edge_rel_tol", c.cache.edge_rel_tol);
  v.field("cache", "sky_far_threshold", c.cache.sky_far_threshold);

  v.field("render", "width", c.render.width);
  v.field("render", "height", c.render.height);
  v.field("render.splat", "k", c.render.splat.k);
  v.field("render.splat", "r_min", c.render.splat.r_min);
  v.field("render.splat", "r_max", c.render.splat.r_max);
  v.field("render.splat", "polar_rows", c.render.splat.polar_rows);

  v.field("trajectory", "sigma", c.trajectory.smoothing.sigma);
  v.field("trajectory", "interp_count", c.trajectory.interp_count);

  v.field("fusion", "steps", c.fusion.steps);
  v.field("fusion", "mock", c.fusion.mock);
  v.field("fusion", "affine_scale", c.fusion.affine_scale);
  v.field("fusion", "affine_bias_weight", c.fusion.affine_bias_weight);
  v.field("fusion", "guidance", c.fusion.guidance);
  v.field("fusion", "latent_shape", c.fusion.latent_shape);

  auto& k = c.curate;
  v.field("curate", "sample_fps", k.sample_fps);
  v.field("curate", "flow_width", k.flow_width);
  v.field("curate", "flow_height", k.flow_height);
  v.field("curate", "motion_min", k.motion_min);
  v.field("curate.flow", "levels", k.flow.levels);
  v.field("curate.flow", "block", k.flow.block);
  v.field("curate.flow", "search", k.flow.search);
  v.field("curate", "format_samples", k.format_samples);
  v.field("curate", "dual_fraction_max", k.dual_fraction_max);
  v.field("curate.hough", "min_radius_frac", k.hough.min_radius_frac);
  v.field("curate.hough", "max_radius_frac", k.hough.max_radius_frac);
  v.field("curate.hough", "work_height", k.hough.work_height);
  v.field("curate.hough", "edge_threshold", k.hough.edge_threshold);
  v.field("curate.hough", "support_threshold", k.hough.support_threshold);
  v.field("curate.hough", "max_candidates", k.hough.max_candidates);
  v.field("curate", "smoothness_max", k.smoothness_max);
  v.field("curate", "cut_sigma", k.cut_sigma);
  v.field("curate", "cut_min_threshold", k.cut_min_threshold);
  v.field("curate", "cut_max_threshold", k.cut_max_threshold);
  v.field("curate", "single_cut_max", k.single_cut_max);
  v.field("curate", "overall_cut_max", k.overall_cut_max);
  v.field("curate", "image_set_min", k.image_set_min);
  v.field("curate", "static_ratios", k.static_ratios);
  v.field("curate", "static_reject_ratio", k.static_reject_ratio);
  v.field("curate", "static_min", k.static_min);
  v.field("curate", "short_circuit", k.short_circuit);

  v.field("metrics", "hfov_deg", c.metrics.hfov_deg);
  v.field("metrics", "width", c.metrics.width);
  v.field("metrics", "height", c.metrics.height);
  v.field("metrics", "pitch_deg", c.metrics.pitch_deg);
}

Json::json_pointer pointer(std::string_view section, std::string_view key) {
  std::string p;
  std::size_t start = 0;
  while (start < section.size()) {
    const std::size_t dot = section.find('.', start);
    const std::size_t end = dot == std::string_view::npos ? section.size() : dot;
    p += "/" + std::string(section.substr(start, end - start));
    start = end + 1;
  }
  p += "/" + std::string(key);
  return Json::json_pointer(p);
}

struct Writer {
  Json doc = Json::object();
  template <typename T>
  void field(std::string_view section, std::string_view key, const T& value) {
    doc[pointer(section, key)] = value;
  }
};

struct Reader {
  const Json& doc;
  std::set<std::string> known;

  template <typename T>
  void field(std::string_view section, std::string_view key, T& value) {
    const auto ptr = pointer(section, key);
    known.insert(ptr.to_string());
    for (auto parent = ptr.parent_pointer(); !parent.empty(); parent = parent.parent_pointer()) {
      known.insert(parent.to_string());
    }
    if (!doc.contains(ptr)) return;
    try {
      value = doc.at(ptr).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw UsageError("config: wrong type for " + ptr.to_string());
    }
  }

  void check(const Json& node, const std::string& prefix) const {
    for (const auto& [key, child] : node.items()) {
      const std::string path = prefix + "/" + key;
      if (!known.count(path)) throw UsageError("config: unknown key " + path);
      if (child.is_object()) check(child, path);
    }
  }
};

}  // namespace

RunConfig config_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config: top level must be an object");
  RunConfig cfg;
  Reader reader{doc, {}};
  visit(cfg, reader);
  reader.check(doc, "");
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  RunConfig copy = cfg;
  Writer writer;
  visit(copy, writer);
  return writer.doc.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pano
