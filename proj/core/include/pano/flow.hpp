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

#include <functional>
#include <vector>

#include "pano/image.hpp"

namespace pano {

/// Per-pixel displacement from the first frame to the second, in pixels.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<float> du;
  std::vector<float> dv;

  double magnitude(std::size_t i) const;
};

struct FlowConfig {
  int levels = 3;
  int block = 16;
  int search = 8;     ///< per-level search radius
  bool wrap_x = true;  ///< horizontal wraparound (equirectangular input)
};

/// Largest displacement block_flow can report: search * (2^levels - 1).
int max_displacement(const FlowConfig& cfg);

/// Coarse-to-fine block matching on luma. Cost is the sum of absolute
/// differences of mean-removed blocks, so a global intensity offset does not
/// change the result. Ties go to the candidate closest to the coarse-level
/// prediction, then to the shorter vector, then to scan order.
FlowField block_flow(const Image& first, const Image& second, const FlowConfig& cfg = {});

using FlowBackend = std::function<FlowField(const Image&, const Image&)>;

FlowBackend block_flow_backend(const FlowConfig& cfg = {});

}  // namespace pano
