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

#include <cmath>

#include "fixtures.hpp"
#include "pano/hough.hpp"

namespace pano {
namespace {

Image disc_image(int w, int h, const std::vector<std::array<double, 3>>& discs) {
  Image img(w, h, 3, 10.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (const auto& d : discs) {
        if (std::hypot(x + 0.5 - d[0], y + 0.5 - d[1]) <= d[2]) {
          for (int c = 0; c < 3; ++c) img.at(x, y, c) = 200.0f;
        }
      }
    }
  }
  return img;
}

TEST(Hough, FindsSingleDisc) {
  const Image img = disc_image(256, 128, {{80.0, 64.0, 50.0}});
  const auto circles = detect_circles(img);
  ASSERT_FALSE(circles.empty());
  EXPECT_NEAR(circles[0].cx, 80.0, 2.0);
  EXPECT_NEAR(circles[0].cy, 64.0, 2.0);
  EXPECT_NEAR(circles[0].radius, 50.0, 2.0);
  EXPECT_FALSE(has_dual_circles(img));
}

TEST(Hough, TwoDiscsSideBySideAreDual) {
  const Image img = disc_image(512, 256, {{128.0, 128.0, 115.0}, {384.0, 128.0, 115.0}});
  EXPECT_TRUE(has_dual_circles(img));
}

TEST(Hough, SmoothErpHasNoCircles) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    EXPECT_TRUE(detect_circles(testing::smooth_erp(256, 128, seed).image()).empty());
  }
}

TEST(Hough, RadiusOutsideRangeIsIgnored) {
  EXPECT_TRUE(detect_circles(disc_image(256, 128, {{128.0, 64.0, 12.0}})).empty());
}

}  // namespace
}  // namespace pano
