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

#include <vector>

#include "pano/image.hpp"

namespace pano {

struct HoughConfig {
  double min_radius_frac = 0.30;  ///< of frame height
  double max_radius_frac = 0.55;
  int work_height = 128;          ///< frames are downscaled to this height first
  double edge_threshold = 100.0;  ///< Sobel magnitude on the 0..255 scale
  /// minimum fraction of the circumference backed by radial edge pixels
  double support_threshold = 0.45;
  int max_candidates = 8;
};

/// Circle in the coordinates of the input frame.
struct Circle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  double support = 0.0;
};

/// Gradient-voting Hough transform: every Sobel edge pixel votes for centers
/// along its gradient line at each radius in range; accumulator peaks are then
/// verified by radial edge support.
std::vector<Circle> detect_circles(const Image& frame, const HoughConfig& cfg = {});

/// True when one detected circle is centered in the left half and another in
/// the right half.
bool has_dual_circles(const Image& frame, const HoughConfig& cfg = {});

}  // namespace pano
