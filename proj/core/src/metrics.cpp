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

#include "pano/metrics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pano/error.hpp"
#include "pano/parallel.hpp"
#include "pano/sphere.hpp"

namespace pano {
namespace {

constexpr int kWindow = 11;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    g[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Valid-region separable filter of a single-channel plane.
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h) {
  static const auto g = gaussian_taps();
  const int ow = w - kWindow + 1, oh = h - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * src[static_cast<std::size_t>(y) * w + x + k];
      tmp[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * tmp[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
    throw ShapeError(std::string(what) + ": images differ in shape");
  }
}

nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::vector<Image> crops8(const ErpFrame& erp, const CropConfig& cfg) {
  std::vector<Image> out;
  out.reserve(8);
  for (int k = 0; k < 8; ++k) {
    const auto cam = PerspectiveCamera::with_hfov(deg2rad(cfg.hfov_deg), cfg.width, cfg.height,
                                                  deg2rad(45.0 * k), deg2rad(cfg.pitch_deg));
    out.push_back(equi_to_pers(erp, cam).image);
  }
  return out;
}

double psnr(const Image& a, const Image& b) {
  require_same_shape(a, b, "psnr");
  const auto da = a.data();
  const auto db = b.data();
  if (da.empty()) throw InvalidArgumentError("psnr: empty images");
  double sum = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - db[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(da.size());
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Image& a, const Image& b) {
  require_same_shape(a, b, "ssim");
  if (a.width() < kWindow || a.height() < kWindow) {
    throw InvalidArgumentError("ssim: images smaller than the 11x11 window");
  }
  const Image la = to_luma(a);
  const Image lb = to_luma(b);
  const int w = la.width(), h = la.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = la.data()[i];
    y[i] = lb.data()[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, w, h);
  const auto my = filter_valid(y, w, h);
  const auto sxx = filter_valid(xx, w, h);
  const auto syy = filter_valid(yy, w, h);
  const auto sxy = filter_valid(xy, w, h);
  constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  constexpr double c2 = (0.03 * 255) * (0.03 * 255);
  double sum = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    sum += ((2 * mx[i] * my[i] + c1) * (2 * cov + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return sum / static_cast<double>(mx.size());
}

double stwe(const std::vector<Image>& video, const FlowBackend& backend) {
  if (video.size() < 2) throw InvalidArgumentError("stwe: fewer than 2 frames");
  FlowConfig fc;
  fc.wrap_x = false;
  const FlowBackend flow = backend ? backend : block_flow_backend(fc);
  std::vector<double> errors(video.size() - 1);
  parallel_for(errors.size(), [&](std::size_t t) {
    const Image& a = video[t];
    const Image& b = video[t + 1];
    require_same_shape(a, b, "stwe");
    const FlowField f = flow(a, b);
    const int w = a.width(), h = a.height(), ch = a.channels();
    double sum = 0.0;
    std::size_t valid = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t k = static_cast<std::size_t>(y) * w + x;
        const double sx = x + f.du[k], sy = y + f.dv[k];
        if (sx < 0 || sy < 0 || sx > w - 1 || sy > h - 1) continue;
        const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
        const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
        const double fx = sx - x0, fy = sy - y0;
        for (int c = 0; c < ch; ++c) {
          const double v = (1 - fy) * ((1 - fx) * b.at(x0, y0, c) + fx * b.at(x1, y0, c)) +
                           fy * ((1 - fx) * b.at(x0, y1, c) + fx * b.at(x1, y1, c));
          sum += std::abs(a.at(x, y, c) - v);
        }
        ++valid;
      }
    }
    errors[t] = valid == 0 ? 0.0 : sum / (static_cast<double>(valid) * ch * 255.0);
  });
  double total = 0.0;
  for (double e : errors) total += e;
  return total / static_cast<double>(errors.size());
}

MetricReport evaluate(const std::vector<ErpFrame>& generated, const std::vector<ErpFrame>& reference,
                      const CropConfig& cfg, bool with_stwe, const FlowBackend& backend) {
  if (generated.size() != reference.size()) {
    throw ShapeError("evaluate: frame counts differ (" + std::to_string(generated.size()) + " vs " +
                     std::to_string(reference.size()) + ")");
  }
  if (generated.empty()) throw InvalidArgumentError("evaluate: no frames");
  MetricReport r;
  r.crop = cfg;
  r.frames = generated.size();
  std::vector<std::vector<Image>> tracks(8);
  double psum = 0.0, ssum = 0.0;
  for (std::size_t t = 0; t < generated.size(); ++t) {
    const auto g = crops8(generated[t], cfg);
    const auto ref = crops8(reference[t], cfg);
    std::vector<double> p(8), s(8);
    parallel_for(8, [&](std::size_t k) {
      p[k] = psnr(g[k], ref[k]);
      s[k] = ssim(g[k], ref[k]);
    });
    for (int k = 0; k < 8; ++k) {
      psum += p[k];
      ssum += s[k];
      if (with_stwe) tracks[k].push_back(g[k]);
    }
    r.psnr.push_back(std::move(p));
    r.ssim.push_back(std::move(s));
  }
  const double count = 8.0 * static_cast<double>(generated.size());
  r.mean_psnr = psum / count;
  r.mean_ssim = ssum / count;
  if (with_stwe && generated.size() >= 2) {
    double e = 0.0;
    for (const auto& track : tracks) e += stwe(track, backend);
    r.stwe = e / 8.0;
  }
  return r;
}

std::string metrics_to_json(const MetricReport& report, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["crop_cfg"] = {{"hfov_deg", report.crop.hfov_deg},
                   {"width", report.crop.width},
                   {"height", report.crop.height},
                   {"pitch_deg", report.crop.pitch_deg},
                   {"yaws_deg", {0, 45, 90, 135, 180, 225, 270, 315}}};
  j["frames"] = report.frames;
  j["mean_psnr"] = number_or_inf(report.mean_psnr);
  j["mean_ssim"] = report.mean_ssim;
  if (report.stwe) {
    j["stwe"] = *report.stwe;
    j["stwe_definition"] = "mean |I_t - I_{t+1}(x + flow)| / 255 over in-bounds pixels";
  }
  auto per = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < report.psnr.size(); ++t) {
    for (std::size_t k = 0; k < report.psnr[t].size(); ++k) {
      per.push_back({{"frame", t},
                     {"crop", k},
                     {"psnr", number_or_inf(report.psnr[t][k])},
                     {"ssim", report.ssim[t][k]}});
    }
  }
  j["crops"] = per;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j.dump(2) + "\n";
}

std::string metrics_to_csv(const MetricReport& report) {
  std::ostringstream out;
  out.precision(9);
  out << "# crop_cfg hfov_deg=" << report.crop.hfov_deg << " width=" << report.crop.width
      << " height=" << report.crop.height << " pitch_deg=" << report.crop.pitch_deg << '\n';
  out << "frame,crop,psnr,ssim\n";
  for (std::size_t t = 0; t < report.psnr.size(); ++t) {
    for (std::size_t k = 0; k < report.psnr[t].size(); ++k) {
      out << t << ',' << k << ',' << report.psnr[t][k] << ',' << report.ssim[t][k] << '\n';
    }
  }
  return out.str();
}

}  // namespace pano
