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

#include "pano/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pano/error.hpp"

namespace pano {

Image::Image(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw ShapeError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                     std::to_string(height) + "x" + std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

ErpFrame::ErpFrame(Image image) : image_(std::move(image)) {
  if (image_.channels() != 3) {
    throw ShapeError("equirectangular frame must be RGB");
  }
  if (image_.width() != 2 * image_.height()) {
    throw ShapeError("equirectangular frame requires width == 2*height, got " +
                     std::to_string(image_.width()) + "x" + std::to_string(image_.height()));
  }
}

ErpFrame::ErpFrame(int width, int height, float fill) : ErpFrame(Image(width, height, 3, fill)) {}

Image to_luma(const Image& rgb) {
  if (rgb.channels() == 1) return rgb;
  if (rgb.channels() != 3) throw ShapeError("to_luma expects 1 or 3 channels");
  Image out(rgb.width(), rgb.height(), 1);
  auto src = rgb.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = static_cast<float>(0.299 * src[3 * i] + 0.587 * src[3 * i + 1] +
                                0.114 * src[3 * i + 2]);
  }
  return out;
}

Image resize_bilinear(const Image& src, int width, int height) {
  if (src.width() == width && src.height() == height) return src;
  Image out(width, height, src.channels());
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, src.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, src.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width() - 1);
      const double wx = fx - x0;
      for (int c = 0; c < src.channels(); ++c) {
        const double top = src.at(x0, y0, c) * (1 - wx) + src.at(x1, y0, c) * wx;
        const double bot = src.at(x0, y1, c) * (1 - wx) + src.at(x1, y1, c) * wx;
        out.at(x, y, c) = static_cast<float>(top * (1 - wy) + bot * wy);
      }
    }
  }
  return out;
}

Image resize_area(const Image& src, int width, int height) {
  if (src.width() == width && src.height() == height) return src;
  const int fx = src.width() / width;
  const int fy = src.height() / height;
  if (fx >= 1 && fy >= 1 && src.width() == fx * width && src.height() == fy * height) {
    Image out(width, height, src.channels());
    const double norm = 1.0 / (fx * fy);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        for (int c = 0; c < src.channels(); ++c) {
          double acc = 0.0;
          for (int j = 0; j < fy; ++j) {
            for (int i = 0; i < fx; ++i) acc += src.at(x * fx + i, y * fy + j, c);
          }
          out.at(x, y, c) = static_cast<float>(acc * norm);
        }
      }
    }
    return out;
  }
  return resize_bilinear(src, width, height);
}

Image quantize8(const Image& src) {
  Image out = src;
  for (float& v : out.data()) v = std::clamp(std::round(v), 0.0f, 255.0f);
  return out;
}

}  // namespace pano
