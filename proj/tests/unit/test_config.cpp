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

#include "pano/config.hpp"
#include "pano/error.hpp"

namespace pano {
namespace {

TEST(Config, DefaultsMatchPublishedValues) {
  const RunConfig c = config_from_json("{}");
  EXPECT_EQ(c.cache.confidence_threshold, 0.25);
  EXPECT_EQ(c.cache.edge_rel_tol, 0.03);
  EXPECT_EQ(c.fusion.steps, 25);
  EXPECT_EQ(c.curate.motion_min, 3.0);
  EXPECT_EQ(c.curate.smoothness_max, 0.25);
  EXPECT_EQ(c.curate.single_cut_max, 0.3);
  EXPECT_EQ(c.curate.overall_cut_max, 0.2);
  EXPECT_EQ(c.curate.image_set_min, 1.0);
  EXPECT_EQ(c.curate.static_min, 1.0);
  EXPECT_EQ(c.curate.dual_fraction_max, 0.9);
  EXPECT_EQ(c.metrics.width, 512);
}

TEST(Config, OverridesAndRoundTrip) {
  const RunConfig c = config_from_json(
      R"({"seed": 7, "render": {"splat": {"r_max": 2}}, "curate": {"flow": {"search": 4},
          "static_ratios": [0.1, 0.2]}, "fusion": {"latent_shape": [1, 2, 3, 4]}})");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.render.splat.r_max, 2);
  EXPECT_EQ(c.curate.flow.search, 4);
  EXPECT_EQ(c.curate.static_ratios, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(c.fusion.latent_shape[3], 4u);
  const RunConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(config_from_json(R"({"bogus": 1})"), UsageError);
  EXPECT_THROW(config_from_json(R"({"curate": {"motion_max": 1}})"), UsageError);
  EXPECT_THROW(config_from_json(R"({"render": {"splat": {"radius": 1}}})"), UsageError);
  EXPECT_THROW(config_from_json(R"({"cache": {"edge_rel_tol": "x"}})"), UsageError);
  EXPECT_THROW(config_from_json("[1]"), UsageError);
  EXPECT_THROW(config_from_json("{"), UsageError);
}

TEST(Config, HashTracksContent) {
  RunConfig a;
  RunConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.seed = 1;
  EXPECT_NE(config_hash(a), config_hash(b));
}

}  // namespace
}  // namespace pano
