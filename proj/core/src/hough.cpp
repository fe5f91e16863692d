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

#include "pano/hough.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pano/error.hpp"
#include "pano/sphere.hpp"

namespace pano {
namespace {

struct EdgePixel {
  int x;
  int y;
  double nx;  // unit gradient
  double ny;
};

constexpr int kAngularBins = 180;

}  // namespace

std::vector<Circle> detect_circles(const Image& frame, const HoughConfig& cfg) {
  if (frame.empty()) throw InvalidArgumentError("detect_circles: empty frame");
  const double scale =
      frame.height() > cfg.work_height ? static_cast<double>(cfg.work_height) / frame.height() : 1.0;
  const int w = std::max(1, static_cast<int>(std::lround(frame.width() * scale)));
  const int h = std::max(1, static_cast<int>(std::lround(frame.height() * scale)));
  const Image luma = to_luma(resize_area(frame, w, h));
  auto px = [&](int x, int y) { return static_cast<double>(luma.at(x, y, 0)); };

  std::vector<EdgePixel> edges;
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const double gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      const double mag = std::hypot(gx, gy);
      if (mag >= cfg.edge_threshold) edges.push_back({x, y, gx / mag, gy / mag});
    }
  }
  const int rmin = std::max(1, static_cast<int>(std::floor(cfg.min_radius_frac * h)));
  const int rmax = std::max(rmin, static_cast<int>(std::ceil(cfg.max_radius_frac * h)));

  std::vector<int> acc(static_cast<std::size_t>(w) * h, 0);
  for (const auto& e : edges) {
    for (int r = rmin; r <= rmax; ++r) {
      for (int s : {-1, 1}) {
        const int cx = static_cast<int>(std::lround(e.x + s * r * e.nx));
        const int cy = static_cast<int>(std::lround(e.y + s * r * e.ny));
        if (cx < 0 || cy < 0 || cx >= w || cy >= h) continue;
        ++acc[static_cast<std::size_t>(cy) * w + cx];
      }
    }
  }
  std::vector<int> smooth(acc.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int s = 0;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
          const int xx = x + i, yy = y + j;
          if (xx >= 0 && yy >= 0 && xx < w && yy < h) s += acc[static_cast<std::size_t>(yy) * w + xx];
        }
      }
      smooth[static_cast<std::size_t>(y) * w + x] = s;
    }
  }

  std::vector<std::size_t> order;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      if (smooth[k] == 0) continue;
      bool peak = true;
      for (int j = -1; j <= 1 && peak; ++j) {
        for (int i = -1; i <= 1; ++i) {
          const int xx = x + i, yy = y + j;
          if ((i == 0 && j == 0) || xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
          if (smooth[static_cast<std::size_t>(yy) * w + xx] > smooth[k]) {
            peak = false;
            break;
          }
        }
      }
      if (peak) order.push_back(k);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return smooth[a] > smooth[b]; });

  std::vector<std::pair<int, int>> centers;
  const double min_sep = 0.5 * rmin;
  for (std::size_t k : order) {
    const int x = static_cast<int>(k % w), y = static_cast<int>(k / w);
    const bool near = std::any_of(centers.begin(), centers.end(), [&](const auto& c) {
      return std::hypot(c.first - x, c.second - y) < min_sep;
    });
    if (near) continue;
    centers.emplace_back(x, y);
    if (static_cast<int>(centers.size()) >= cfg.max_candidates) break;
  }

  std::vector<Circle> circles;
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(rmax + 2) * kAngularBins);
  for (const auto& [cx, cy] : centers) {
    std::fill(hit.begin(), hit.end(), 0);
    for (const auto& e : edges) {
      const double dx = e.x - cx, dy = e.y - cy;
      const double d = std::hypot(dx, dy);
      if (d < rmin - 1.5 || d > rmax + 1.5 || d == 0.0) continue;
      if (std::abs(e.nx * dx + e.ny * dy) / d < 0.9) continue;
      double ang = std::atan2(dy, dx);
      if (ang < 0) ang += 2 * kPi;
      const int abin = std::min(kAngularBins - 1, static_cast<int>(ang / (2 * kPi) * kAngularBins));
      const int r0 = std::max(rmin, static_cast<int>(std::ceil(d - 1.5)));
      const int r1 = std::min(rmax, static_cast<int>(std::floor(d + 1.5)));
      for (int r = r0; r <= r1; ++r) hit[static_cast<std::size_t>(r) * kAngularBins + abin] = 1;
    }
    double best = 0.0;
    int best_r = rmin;
    for (int r = rmin; r <= rmax; ++r) {
      const auto begin = hit.begin() + static_cast<std::ptrdiff_t>(r) * kAngularBins;
      const double frac = std::accumulate(begin, begin + kAngularBins, 0) /
                          static_cast<double>(kAngularBins);
      if (frac > best) {
        best = frac;
        best_r = r;
      }
    }
    if (best >= cfg.support_threshold) {
      circles.push_back({cx / scale, cy / scale, best_r / scale, best});
    }
  }
  return circles;
}

bool has_dual_circles(const Image& frame, const HoughConfig& cfg) {
  const auto circles = detect_circles(frame, cfg);
  const double mid = 0.5 * frame.width();
  const bool left = std::any_of(circles.begin(), circles.end(), [&](const Circle& c) { return c.cx < mid; });
  const bool right = std::any_of(circles.begin(), circles.end(), [&](const Circle& c) { return c.cx >= mid; });
  return left && right;
}

}  // namespace pano
