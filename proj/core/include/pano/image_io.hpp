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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pano/image.hpp"

namespace pano {

/// 8-bit PNG (gray or RGB). Samples are rounded and clamped on write.
void write_png(const std::filesystem::path& path, const Image& image);
Image read_png(const std::filesystem::path& path);

/// Encode to an in-memory PNG byte stream (used for determinism checks).
std::vector<std::uint8_t> encode_png(const Image& image);

/// 1-bit grayscale PNG; true -> white.
void write_mask_png(const std::filesystem::path& path, int width, int height,
                    std::span<const std::uint8_t> mask);
std::vector<std::uint8_t> read_mask_png(const std::filesystem::path& path, int* width,
                                        int* height);

/// Single-channel float raster in PFM ("Pf", little-endian, bottom-up rows
/// on disk; returned top-down).
struct FloatRaster {
  int width = 0;
  int height = 0;
  std::vector<float> values;
};
void write_pfm(const std::filesystem::path& path, const FloatRaster& raster);
FloatRaster read_pfm(const std::filesystem::path& path);

/// Writes to "<path>.tmp" then renames over the destination.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

}  // namespace pano
