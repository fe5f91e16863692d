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

#include "pano/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pano/error.hpp"

namespace pano {
namespace {

struct Plane {
  int w = 0;
  int h = 0;
  std::vector<float> px;
  float at(int x, int y) const { return px[static_cast<std::size_t>(y) * w + x]; }
};

Plane luma_plane(const Image& img) {
  Image l = to_luma(img);
  return {l.width(), l.height(), std::vector<float>(l.data().begin(), l.data().end())};
}

Plane half(const Plane& p) {
  Plane out{p.w / 2, p.h / 2, {}};
  out.px.resize(static_cast<std::size_t>(out.w) * out.h);
  for (int y = 0; y < out.h; ++y) {
    for (int x = 0; x < out.w; ++x) {
      out.px[static_cast<std::size_t>(y) * out.w + x] =
          0.25f * (p.at(2 * x, 2 * y) + p.at(2 * x + 1, 2 * y) + p.at(2 * x, 2 * y + 1) +
                   p.at(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

struct BlockGrid {
  int nx = 0;
  int ny = 0;
  int block = 0;
  std::vector<int> dx;
  std::vector<int> dy;
  int origin_x(int bx, int w) const { return std::min(bx * block, w - block); }
  int origin_y(int by, int h) const { return std::min(by * block, h - block); }
};

BlockGrid match_level(const Plane& a, const Plane& b, int block, int search, bool wrap_x,
                      const BlockGrid* coarse) {
  BlockGrid g;
  g.block = block;
  g.nx = (a.w + block - 1) / block;
  g.ny = (a.h + block - 1) / block;
  g.dx.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
  g.dy.assign(g.dx.size(), 0);
  std::vector<float> ablock(static_cast<std::size_t>(block) * block);
  std::vector<float> bblock(ablock.size());
  for (int by = 0; by < g.ny; ++by) {
    for (int bx = 0; bx < g.nx; ++bx) {
      const int ox = g.origin_x(bx, a.w);
      const int oy = g.origin_y(by, a.h);
      int px = 0, py = 0;
      if (coarse != nullptr) {
        const int cx = std::clamp((ox + block / 2) / 2 / coarse->block, 0, coarse->nx - 1);
        const int cy = std::clamp((oy + block / 2) / 2 / coarse->block, 0, coarse->ny - 1);
        const std::size_t ci = static_cast<std::size_t>(cy) * coarse->nx + cx;
        px = 2 * coarse->dx[ci];
        py = 2 * coarse->dy[ci];
      }
      double amean = 0.0;
      for (int j = 0; j < block; ++j) {
        for (int i = 0; i < block; ++i) {
          const float v = a.at(ox + i, oy + j);
          ablock[static_cast<std::size_t>(j) * block + i] = v;
          amean += v;
        }
      }
      amean /= block * block;
      double best_cost = std::numeric_limits<double>::infinity();
      long best_pred_dist = std::numeric_limits<long>::max();
      long best_len = std::numeric_limits<long>::max();
      int best_dx = 0, best_dy = 0;
      for (int sy = -search; sy <= search; ++sy) {
        const int cdy = py + sy;
        if (oy + cdy < 0 || oy + cdy + block > b.h) continue;
        for (int sx = -search; sx <= search; ++sx) {
          const int cdx = px + sx;
          if (!wrap_x && (ox + cdx < 0 || ox + cdx + block > b.w)) continue;
          double bmean = 0.0;
          for (int j = 0; j < block; ++j) {
            const int y = oy + cdy + j;
            for (int i = 0; i < block; ++i) {
              int x = (ox + cdx + i) % b.w;
              if (x < 0) x += b.w;
              const float v = b.at(x, y);
              bblock[static_cast<std::size_t>(j) * block + i] = v;
              bmean += v;
            }
          }
          bmean /= block * block;
          double cost = 0.0;
          for (std::size_t k = 0; k < ablock.size(); ++k) {
            cost += std::abs((ablock[k] - amean) - (bblock[k] - bmean));
          }
          const long pred_dist = static_cast<long>(sx) * sx + static_cast<long>(sy) * sy;
          const long len = static_cast<long>(cdx) * cdx + static_cast<long>(cdy) * cdy;
          const bool better =
              cost < best_cost ||
              (cost == best_cost &&
               (pred_dist < best_pred_dist || (pred_dist == best_pred_dist && len < best_len)));
          if (better) {
            best_cost = cost;
            best_pred_dist = pred_dist;
            best_len = len;
            best_dx = cdx;
            best_dy = cdy;
          }
        }
      }
      const std::size_t gi = static_cast<std::size_t>(by) * g.nx + bx;
      g.dx[gi] = best_dx;
      g.dy[gi] = best_dy;
    }
  }
  return g;
}

}  // namespace

double FlowField::magnitude(std::size_t i) const {
  return std::hypot(static_cast<double>(du[i]), static_cast<double>(dv[i]));
}

int max_displacement(const FlowConfig& cfg) { return cfg.search * ((1 << cfg.levels) - 1); }

FlowField block_flow(const Image& first, const Image& second, const FlowConfig& cfg) {
  if (first.width() != second.width() || first.height() != second.height()) {
    throw InvalidArgumentError("block_flow: frames differ in size");
  }
  if (cfg.block <= 0 || cfg.search < 0 || cfg.levels < 1) {
    throw InvalidArgumentError("block_flow: invalid configuration");
  }
  if (first.width() < cfg.block || first.height() < cfg.block) {
    throw InvalidArgumentError("block_flow: frame " + std::to_string(first.width()) + "x" +
                               std::to_string(first.height()) + " smaller than one block");
  }
  std::vector<Plane> pa{luma_plane(first)};
  std::vector<Plane> pb{luma_plane(second)};
  for (int l = 1; l < cfg.levels; ++l) {
    const Plane& top = pa.back();
    if (top.w / 2 < cfg.block || top.h / 2 < cfg.block) break;
    pa.push_back(half(top));
    pb.push_back(half(pb.back()));
  }
  BlockGrid grid;
  bool have_coarse = false;
  for (int l = static_cast<int>(pa.size()) - 1; l >= 0; --l) {
    BlockGrid next = match_level(pa[l], pb[l], cfg.block, cfg.search, cfg.wrap_x,
                                 have_coarse ? &grid : nullptr);
    grid = std::move(next);
    have_coarse = true;
  }
  FlowField f{first.width(), first.height(), {}, {}};
  const std::size_t n = static_cast<std::size_t>(f.width) * f.height;
  f.du.resize(n);
  f.dv.resize(n);
  for (int y = 0; y < f.height; ++y) {
    const int by = std::min(y / cfg.block, grid.ny - 1);
    for (int x = 0; x < f.width; ++x) {
      const int bx = std::min(x / cfg.block, grid.nx - 1);
      const std::size_t gi = static_cast<std::size_t>(by) * grid.nx + bx;
      f.du[static_cast<std::size_t>(y) * f.width + x] = static_cast<float>(grid.dx[gi]);
      f.dv[static_cast<std::size_t>(y) * f.width + x] = static_cast<float>(grid.dy[gi]);
    }
  }
  return f;
}

FlowBackend block_flow_backend(const FlowConfig& cfg) {
  return [cfg](const Image& a, const Image& b) { return block_flow(a, b, cfg); };
}

}  // namespace pano
