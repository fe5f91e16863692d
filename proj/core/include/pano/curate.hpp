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

// Quality filters for 360 video clips. Filters run in this order:
// dual_fisheye, boundary_smoothness, motion, single_frame_cut_ratio,
// overall_cut_ratio, image_set, static_region.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pano/flow.hpp"
#include "pano/hough.hpp"
#include "pano/image.hpp"

namespace pano {

struct VideoClip {
  std::vector<Image> frames;
  double fps = 30.0;
  std::string source_id;
};

struct CurateConfig {
  double sample_fps = 1.0;
  int flow_width = 512;
  int flow_height = 256;
  FlowConfig flow;
  double motion_min = 3.0;

  int format_samples = 4;
  HoughConfig hough;
  double dual_fraction_max = 0.9;
  double smoothness_max = 0.25;

  double cut_sigma = 3.0;
  double cut_min_threshold = 30.0 / 255.0;
  double cut_max_threshold = 60.0 / 255.0;
  double single_cut_max = 0.3;
  double overall_cut_max = 0.2;

  double image_set_min = 1.0;

  std::vector<double> static_ratios{0.01, 0.02, 0.05, 0.10, 0.20, 0.40, 0.80};
  double static_reject_ratio = 0.20;
  double static_min = 1.0;

  bool short_circuit = false;
};

struct FilterResult {
  std::string name;
  double score = 0.0;
  double threshold = 0.0;
  /// "<" or ">": the clip is rejected when `score <op> threshold`.
  std::string reject_if;
  bool pass = true;
  std::vector<std::pair<std::string, double>> details;
};

struct CurationReport {
  std::string source_id;
  bool accepted = false;
  std::vector<FilterResult> filters;
  std::vector<std::string> reject_reasons;
  std::optional<std::string> ingestion_error;
};

struct CutStats {
  std::vector<double> scores;  ///< mean |dY| / 255 per consecutive pair
  double threshold = 0.0;
  std::vector<bool> cuts;
  double single_frame_ratio = 0.0;
  double overall_ratio = 0.0;
};

struct StaticRegionStats {
  std::vector<double> ratios;
  std::vector<double> top;
  std::vector<double> bottom;
};

/// Frame indices sampled at `sample_fps` from a clip recorded at `fps`.
std::vector<std::size_t> sample_indices(std::size_t frame_count, double fps, double sample_fps);

/// `count` evenly spaced frame indices, first and last included.
std::vector<std::size_t> spread_indices(std::size_t frame_count, int count);

/// Mean squared error over 8-bit quantized samples.
double mse8(const Image& a, const Image& b);

/// Latitude-weighted 75th percentile of flow magnitudes over all 1 FPS pairs.
double motion_stat(const VideoClip& clip, const CurateConfig& cfg = {},
                   const FlowBackend& backend = {});

/// Fraction of sampled frames holding dual circles.
double dual_fisheye_fraction(const VideoClip& clip, const CurateConfig& cfg = {});

/// Mean |col_0 - col_{W-1}| over mean antipodal |col_i - col_{i+W/2}|,
/// averaged over sampled frames.
double boundary_smoothness(const Image& frame);
double boundary_smoothness(const VideoClip& clip, const CurateConfig& cfg = {});

CutStats detect_cuts(const VideoClip& clip, const CurateConfig& cfg = {});

/// Minimum MSE between consecutive 1 FPS samples.
double image_set_score(const VideoClip& clip, const CurateConfig& cfg = {});

StaticRegionStats static_region_score(const VideoClip& clip, const CurateConfig& cfg = {});

CurationReport curate_video(const VideoClip& clip, const CurateConfig& cfg = {},
                            const FlowBackend& backend = {});

/// Reads frame PNGs in lexicographic order plus metadata.json {"fps": ...}.
VideoClip load_clip(const std::filesystem::path& dir);

/// load_clip + curate_video; ingestion failures become a rejected report.
CurationReport curate_directory(const std::filesystem::path& dir, const CurateConfig& cfg = {});

std::string report_to_json(const CurationReport& report, const std::string& config_hash = "");
std::string corpus_csv(const std::vector<CurationReport>& reports);

}  // namespace pano
