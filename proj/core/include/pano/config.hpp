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

#include <array>
#include <cstdint>
#include <string>

#include "pano/cache.hpp"
#include "pano/curate.hpp"
#include "pano/metrics.hpp"
#include "pano/render.hpp"
#include "pano/trajectory.hpp"

namespace pano {

struct SphereSection {
  int erp_width = 1024;
  int erp_height = 512;
};

struct RenderSection {
  int width = 1024;
  int height = 512;
  SplatConfig splat;
};

struct TrajectorySection {
  SmoothingConfig smoothing;
  int interp_count = 49;
};

struct FusionSection {
  int steps = 25;
  std::string mock = "affine";  ///< "affine" or "identity"
  double affine_scale = 0.9;
  double affine_bias_weight = 0.1;
  double guidance = 5.0;
  std::array<std::size_t, 4> latent_shape{4, 3, 8, 16};  ///< used without a cache
};

/// Every tunable of every module. Parsing rejects unknown keys.
struct RunConfig {
  SphereSection sphere;
  CacheConfig cache;
  RenderSection render;
  TrajectorySection trajectory;
  FusionSection fusion;
  CurateConfig curate;
  CropConfig metrics;
  std::uint64_t seed = 0;
};

/// Missing keys keep their defaults. Throws UsageError on unknown keys or
/// ill-typed values.
RunConfig config_from_json(const std::string& text);

/// Canonical form: every key, fixed order, two-space indent.
std::string config_to_json(const RunConfig& cfg);

/// FNV-1a 64 of the canonical form, as 16 lowercase hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace pano
