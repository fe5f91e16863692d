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

#include <cstddef>
#include <span>
#include <vector>

namespace pano {

/// Interleaved row-major raster of float samples on the 8-bit scale [0,255].
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  float& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  float at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// Equirectangular RGB panorama. Enforces width == 2 * height.
class ErpFrame {
 public:
  ErpFrame() = default;
  explicit ErpFrame(Image image);
  ErpFrame(int width, int height, float fill = 0.0f);

  const Image& image() const { return image_; }
  Image& image() { return image_; }
  int width() const { return image_.width(); }
  int height() const { return image_.height(); }

  friend bool operator==(const ErpFrame&, const ErpFrame&) = default;

 private:
  Image image_;
};

/// Rec.601 luma of an RGB image (single channel output). Grayscale input is
/// returned unchanged.
Image to_luma(const Image& rgb);

/// Bilinear resize using pixel-center alignment.
Image resize_bilinear(const Image& src, int width, int height);

/// Box-filtered downscale followed by bilinear resampling when the target is
/// not an integer divisor.
Image resize_area(const Image& src, int width, int height);

/// Round and clamp every sample to the 8-bit grid.
Image quantize8(const Image& src);

}  // namespace pano
