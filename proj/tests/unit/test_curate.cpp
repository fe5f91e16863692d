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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fixtures.hpp"
#include "pano/curate.hpp"
#include "pano/image_io.hpp"

namespace pano {
namespace {

bool rejects_for(const CurationReport& r, const std::string& reason) {
  return std::find(r.reject_reasons.begin(), r.reject_reasons.end(), reason) != r.reject_reasons.end();
}

TEST(Curate, SampleIndices) {
  EXPECT_EQ(sample_indices(50, 10.0, 1.0), (std::vector<std::size_t>{0, 10, 20, 30, 40}));
  EXPECT_EQ(sample_indices(3, 0.5, 1.0), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(spread_indices(50, 4), (std::vector<std::size_t>{0, 16, 33, 49}));
  EXPECT_EQ(spread_indices(2, 4), (std::vector<std::size_t>{0, 1}));
}

TEST(Curate, StaticClipHasZeroMotion) {
  EXPECT_EQ(motion_stat(testing::static_clip()), 0.0);
}

TEST(Curate, ConstantFlowGivesItsMagnitude) {
  const FlowBackend constant = [](const Image& a, const Image&) {
    FlowField f{a.width(), a.height(), {}, {}};
    f.du.assign(a.pixel_count(), 3.0f);
    f.dv.assign(a.pixel_count(), 4.0f);
    return f;
  };
  EXPECT_DOUBLE_EQ(motion_stat(testing::clean_pan_clip(1), {}, constant), 5.0);
}

TEST(Curate, PanClipMovesEnough) {
  // 1 px per frame at 256 wide and 10 fps is 20 px per second at 512 wide.
  const double m = motion_stat(testing::clean_pan_clip(2));
  EXPECT_GE(m, 3.0);
  EXPECT_NEAR(m, 20.0, 1.0);
}

TEST(Curate, MotionInvariantToIntensityOffset) {
  VideoClip clip = testing::clean_pan_clip(3);
  const double before = motion_stat(clip);
  for (auto& f : clip.frames) {
    for (float& v : f.data()) v += 10.0f;
  }
  EXPECT_EQ(motion_stat(clip), before);
}

TEST(Curate, DualFisheyeFraction) {
  EXPECT_EQ(dual_fisheye_fraction(testing::dual_fisheye_clip()), 1.0);
  EXPECT_EQ(dual_fisheye_fraction(testing::clean_pan_clip(4)), 0.0);
  VideoClip three_of_four = testing::dual_fisheye_clip();
  three_of_four.frames[0] = Image(256, 128, 3, 0.0f);
  EXPECT_DOUBLE_EQ(dual_fisheye_fraction(three_of_four), 0.75);
  const auto report = curate_video(three_of_four);
  EXPECT_TRUE(report.filters[0].pass);
}

TEST(Curate, BoundarySmoothness) {
  Image periodic(64, 32, 3);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 64; ++x) {
      for (int c = 0; c < 3; ++c) {
        periodic.at(x, y, c) = 128.0f + 100.0f * static_cast<float>(std::sin(2 * 3.14159265358979 * (x + 0.5) / 64));
      }
    }
  }
  // Column 0 and column 63 are mirror images around the seam.
  EXPECT_LT(boundary_smoothness(periodic), 0.25);

  Image split(64, 32, 3, 40.0f);
  for (int y = 0; y < 32; ++y) {
    for (int x = 32; x < 64; ++x) {
      for (int c = 0; c < 3; ++c) split.at(x, y, c) = 200.0f;
    }
  }
  EXPECT_GT(boundary_smoothness(split), 0.25);

  double noise = 0.0;
  for (std::uint64_t s = 0; s < 8; ++s) noise += boundary_smoothness(testing::noise_image(256, 128, 3, s));
  EXPECT_NEAR(noise / 8, 1.0, 0.2);

  Image wrapped(64, 32, 3);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 64; ++x) {
      for (int c = 0; c < 3; ++c) wrapped.at(x, y, c) = x == 0 || x == 63 ? 90.0f : 10.0f * (x % 7);
    }
  }
  EXPECT_EQ(boundary_smoothness(wrapped), 0.0);
}

TEST(Curate, SmoothErpsPassHardSeamFails) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    EXPECT_LE(boundary_smoothness(testing::smooth_erp(256, 128, s).image()), 0.25);
  }
  EXPECT_GT(boundary_smoothness(testing::hard_seam_clip()), 0.25);
}

TEST(Curate, CutsOnPanAreZero) {
  const CutStats s = detect_cuts(testing::clean_pan_clip(5));
  EXPECT_EQ(s.overall_ratio, 0.0);
  EXPECT_EQ(s.single_frame_ratio, 0.0);
}

TEST(Curate, AlternatingClipIsAllCuts) {
  const CutStats s = detect_cuts(testing::alternating_clip());
  EXPECT_EQ(s.overall_ratio, 1.0);
  EXPECT_EQ(s.single_frame_ratio, 0.0);
}

TEST(Curate, OneHardCutInFiftyFrames) {
  const CutStats s = detect_cuts(testing::single_cut_clip());
  EXPECT_DOUBLE_EQ(s.overall_ratio, 1.0 / 49.0);
  EXPECT_DOUBLE_EQ(s.single_frame_ratio, 1.0 / 49.0);
  EXPECT_TRUE(s.cuts[24]);
}

TEST(Curate, ImageSetScore) {
  EXPECT_EQ(image_set_score(testing::slideshow_clip()), 0.0);
  VideoClip two;
  two.fps = 1.0;
  two.frames = {Image(32, 16, 3, 100.0f), Image(32, 16, 3, 101.0f)};
  EXPECT_DOUBLE_EQ(image_set_score(two), 1.0);
  EXPECT_TRUE(curate_video(two).filters[5].pass);
  EXPECT_GE(image_set_score(testing::clean_pan_clip(6)), 1.0);
}

TEST(Curate, StaticRegion) {
  const auto frozen = static_region_score(testing::frozen_bottom_clip());
  ASSERT_EQ(frozen.ratios.size(), 7u);
  EXPECT_EQ(frozen.bottom[4], 0.0);
  EXPECT_GE(frozen.top[4], 1.0);

  const auto dynamic = static_region_score(testing::clean_pan_clip(7));
  EXPECT_GE(dynamic.top[4], 1.0);
  EXPECT_GE(dynamic.bottom[4], 1.0);

  VideoClip strip = testing::clean_pan_clip(7);
  for (auto& f : strip.frames) {
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < f.width(); ++x) {
        for (int c = 0; c < 3; ++c) f.at(x, y, c) = 50.0f;
      }
    }
  }
  const auto s = static_region_score(strip);
  EXPECT_EQ(s.top[2], 0.0);
  EXPECT_GE(s.top[4], 1.0);
  EXPECT_TRUE(curate_video(strip).accepted);
}

TEST(Curate, VerdictsOnFixtures) {
  const auto clean = curate_video(testing::clean_pan_clip(8));
  EXPECT_TRUE(clean.accepted);
  EXPECT_EQ(clean.filters.size(), 7u);
  for (const auto& f : clean.filters) EXPECT_TRUE(f.pass) << f.name << " " << f.score;

  EXPECT_TRUE(rejects_for(curate_video(testing::static_clip()), "motion"));
  EXPECT_TRUE(rejects_for(curate_video(testing::dual_fisheye_clip()), "dual_fisheye"));
}

TEST(Curate, ShortCircuitStopsAtFirstFailure) {
  CurateConfig cfg;
  cfg.short_circuit = true;
  const auto r = curate_video(testing::static_clip(), cfg);
  ASSERT_EQ(r.filters.size(), 3u);
  EXPECT_EQ(r.filters.back().name, "motion");
  EXPECT_EQ(r.reject_reasons, (std::vector<std::string>{"motion"}));
}

TEST(Curate, AcceptedIffEveryFilterPasses) {
  for (const auto& item : testing::curation_battery()) {
    const auto r = curate_video(item.clip);
    const bool all = std::all_of(r.filters.begin(), r.filters.end(), [](const auto& f) { return f.pass; });
    EXPECT_EQ(r.accepted, all);
  }
}

TEST(Curate, Deterministic) {
  const auto clip = testing::single_cut_clip();
  EXPECT_EQ(report_to_json(curate_video(clip)), report_to_json(curate_video(clip)));
}

TEST(Curate, DirectoryIngestion) {
  const auto dir = testing::temp_dir("clip");
  const VideoClip clip = testing::clean_pan_clip(9);
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%04zu.png", i);
    write_png(dir / name, clip.frames[i]);
  }
  std::ofstream(dir / "metadata.json") << R"({"fps": 10})";
  const auto r = curate_directory(dir);
  EXPECT_FALSE(r.ingestion_error.has_value());
  EXPECT_TRUE(r.accepted);

  std::filesystem::remove(dir / "metadata.json");
  const auto bad = curate_directory(dir);
  EXPECT_TRUE(bad.ingestion_error.has_value());
  EXPECT_FALSE(bad.accepted);
  EXPECT_NE(report_to_json(bad).find("ingestion"), std::string::npos);
}

TEST(Curate, CorpusCsv) {
  CurationReport r;
  r.source_id = "a";
  r.accepted = false;
  r.reject_reasons = {"motion", "image_set"};
  const std::string csv = corpus_csv({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "source_id,accepted,reject_reasons,dual_fisheye,boundary_smoothness,motion,"
            "single_frame_cut_ratio,overall_cut_ratio,image_set,static_region");
  EXPECT_NE(csv.find("a,0,motion;image_set"), std::string::npos);
}

}  // namespace
}  // namespace pano
