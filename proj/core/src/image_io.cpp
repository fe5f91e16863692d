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

#include "pano/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pano/error.hpp"

namespace pano {
namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

// Rows are packed by the caller; bit_depth 8 or 1.
std::vector<std::uint8_t> encode_rows(int width, int height, int color_type, int bit_depth,
                                      const std::vector<std::vector<std::uint8_t>>& rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw DataError("png: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError("png: cannot create info struct");
  }
  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("png: encode failed");
  }
  png_set_write_fn(png, &out, append_bytes, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (const auto& row : rows) png_write_row(png, const_cast<png_bytep>(row.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::uint8_t to_u8(float v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw ShapeError("png: only gray or RGB images are supported");
  }
  const int stride = image.width() * image.channels();
  std::vector<std::vector<std::uint8_t>> rows(image.height(), std::vector<std::uint8_t>(stride));
  auto data = image.data();
  for (int y = 0; y < image.height(); ++y) {
    for (int i = 0; i < stride; ++i) rows[y][i] = to_u8(data[static_cast<std::size_t>(y) * stride + i]);
  }
  return encode_rows(image.width(), image.height(),
                     image.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, 8, rows);
}

void write_png(const std::filesystem::path& path, const Image& image) {
  write_file_atomic(path, encode_png(image));
}

Image read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&img, path.c_str()) == 0) {
    throw IngestionError("png: cannot read " + path.string() + ": " + img.message);
  }
  const bool gray = (img.format & PNG_FORMAT_FLAG_COLOR) == 0;
  img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
  if (png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr) == 0) {
    png_image_free(&img);
    throw IngestionError("png: decode failed for " + path.string() + ": " + img.message);
  }
  Image out(static_cast<int>(img.width), static_cast<int>(img.height), gray ? 1 : 3);
  std::transform(buffer.begin(), buffer.end(), out.data().begin(),
                 [](std::uint8_t v) { return static_cast<float>(v); });
  return out;
}

void write_mask_png(const std::filesystem::path& path, int width, int height,
                    std::span<const std::uint8_t> mask) {
  if (mask.size() != static_cast<std::size_t>(width) * height) {
    throw ShapeError("mask size does not match dimensions");
  }
  const int stride = (width + 7) / 8;
  std::vector<std::vector<std::uint8_t>> rows(height, std::vector<std::uint8_t>(stride, 0));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (mask[static_cast<std::size_t>(y) * width + x] != 0) {
        rows[y][x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
      }
    }
  }
  write_file_atomic(path, encode_rows(width, height, PNG_COLOR_TYPE_GRAY, 1, rows));
}

std::vector<std::uint8_t> read_mask_png(const std::filesystem::path& path, int* width,
                                        int* height) {
  Image gray = read_png(path);
  if (gray.channels() != 1) gray = to_luma(gray);
  *width = gray.width();
  *height = gray.height();
  std::vector<std::uint8_t> mask(gray.pixel_count());
  auto data = gray.data();
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = data[i] >= 128.0f ? 1 : 0;
  return mask;
}

void write_pfm(const std::filesystem::path& path, const FloatRaster& raster) {
  if (raster.values.size() != static_cast<std::size_t>(raster.width) * raster.height) {
    throw ShapeError("pfm: value count does not match dimensions");
  }
  std::ostringstream header;
  header << "Pf\n" << raster.width << " " << raster.height << "\n-1.0\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> bytes(h.begin(), h.end());
  bytes.reserve(bytes.size() + raster.values.size() * 4);
  for (int y = raster.height - 1; y >= 0; --y) {
    for (int x = 0; x < raster.width; ++x) {
      auto bits = std::bit_cast<std::uint32_t>(raster.values[static_cast<std::size_t>(y) * raster.width + x]);
      for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
  }
  write_file_atomic(path, bytes);
}

FloatRaster read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("pfm: cannot open " + path.string());
  std::string magic;
  FloatRaster r;
  double scale = 0.0;
  in >> magic >> r.width >> r.height >> scale;
  in.get();
  if (!in || magic != "Pf" || r.width <= 0 || r.height <= 0) {
    throw IngestionError("pfm: malformed header in " + path.string());
  }
  const bool little = scale < 0.0;
  r.values.resize(static_cast<std::size_t>(r.width) * r.height);
  std::vector<std::uint8_t> raw(r.values.size() * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw IngestionError("pfm: truncated data in " + path.string());
  }
  std::size_t k = 0;
  for (int y = r.height - 1; y >= 0; --y) {
    for (int x = 0; x < r.width; ++x, k += 4) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        const int shift = little ? 8 * b : 8 * (3 - b);
        bits |= static_cast<std::uint32_t>(raw[k + b]) << shift;
      }
      r.values[static_cast<std::size_t>(y) * r.width + x] = std::bit_cast<float>(bits);
    }
  }
  return r;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestionError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IngestionError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IngestionError("cannot rename " + tmp.string() + ": " + ec.message());
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

}  // namespace pano
