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

#include "fixtures.hpp"
#include "pano/error.hpp"
#include "pano/image.hpp"
#include "pano/image_io.hpp"

namespace pano {
namespace {

TEST(ImageIo, PngRoundTripIsQuantized) {
  const auto dir = testing::temp_dir("png");
  const Image img = testing::smooth_erp(64, 32, 1).image();
  write_png(dir / "a.png", img);
  EXPECT_EQ(read_png(dir / "a.png"), quantize8(img));
  EXPECT_EQ(encode_png(img), encode_png(quantize8(img)));
}

TEST(ImageIo, MaskRoundTrip) {
  const auto dir = testing::temp_dir("mask");
  std::vector<std::uint8_t> mask(40 * 20, 0);
  for (std::size_t i = 0; i < mask.size(); i += 3) mask[i] = 1;
  write_mask_png(dir / "m.png", 40, 20, mask);
  int w = 0, h = 0;
  EXPECT_EQ(read_mask_png(dir / "m.png", &w, &h), mask);
  EXPECT_EQ(w, 40);
  EXPECT_EQ(h, 20);
}

TEST(ImageIo, PfmRoundTrip) {
  const auto dir = testing::temp_dir("pfm");
  FloatRaster r{5, 3, {}};
  for (int i = 0; i < 15; ++i) r.values.push_back(0.25f * static_cast<float>(i) - 1.0f);
  write_pfm(dir / "d.pfm", r);
  const FloatRaster back = read_pfm(dir / "d.pfm");
  EXPECT_EQ(back.width, 5);
  EXPECT_EQ(back.height, 3);
  EXPECT_EQ(back.values, r.values);
}

TEST(ImageIo, MissingFilesRaise) {
  EXPECT_THROW(read_png("/nonexistent/x.png"), Error);
  EXPECT_THROW(read_pfm("/nonexistent/x.pfm"), Error);
}

TEST(ImageIo, ErpShapeEnforced) {
  EXPECT_THROW(ErpFrame(Image(10, 10, 3)), Error);
  EXPECT_THROW(ErpFrame(Image(20, 10, 1)), Error);
  EXPECT_NO_THROW(ErpFrame(Image(20, 10, 3)));
}

TEST(ImageIo, LumaAndResize) {
  Image rgb(4, 2, 3, 0.0f);
  for (int x = 0; x < 4; ++x) rgb.at(x, 0, 0) = 255.0f;
  const Image y = to_luma(rgb);
  EXPECT_NEAR(y.at(0, 0, 0), 0.299f * 255.0f, 1e-3);
  const Image flat(64, 32, 3, 9.0f);
  const Image small = resize_area(flat, 16, 8);
  for (float v : small.data()) EXPECT_FLOAT_EQ(v, 9.0f);
  const Image large = resize_bilinear(flat, 100, 50);
  for (float v : large.data()) EXPECT_FLOAT_EQ(v, 9.0f);
}

}  // namespace
}  // namespace pano
