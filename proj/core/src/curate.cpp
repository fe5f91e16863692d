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

#include "pano/curate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pano/error.hpp"
#include "pano/image_io.hpp"
#include "pano/parallel.hpp"
#include "pano/sphere.hpp"

namespace pano {
namespace {

std::vector<Image> sampled_frames(const VideoClip& clip, const CurateConfig& cfg) {
  std::vector<Image> out;
  for (std::size_t i : sample_indices(clip.frames.size(), clip.fps, cfg.sample_fps)) {
    out.push_back(clip.frames[i]);
  }
  return out;
}

double band_mse(const Image& a, const Image& b, int y0, int y1) {
  double sum = 0.0;
  std::size_t n = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int c = 0; c < a.channels(); ++c) {
        const double d = std::round(std::clamp(a.at(x, y, c), 0.0f, 255.0f)) -
                         std::round(std::clamp(b.at(x, y, c), 0.0f, 255.0f));
        sum += d * d;
        ++n;
      }
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
    throw ShapeError(std::string(what) + ": frames differ in shape");
  }
}

FilterResult make_filter(std::string name, double score, double threshold, const char* op) {
  FilterResult f;
  f.name = std::move(name);
  f.score = score;
  f.threshold = threshold;
  f.reject_if = op;
  f.pass = op[0] == '<' ? !(score < threshold) : !(score > threshold);
  return f;
}

}  // namespace

std::vector<std::size_t> sample_indices(std::size_t frame_count, double fps, double sample_fps) {
  if (!(fps > 0.0) || !(sample_fps > 0.0)) {
    throw InvalidArgumentError("sample_indices: fps must be positive");
  }
  std::vector<std::size_t> idx;
  const double step = std::max(1.0, fps / sample_fps);
  for (std::size_t k = 0;; ++k) {
    const auto i = static_cast<std::size_t>(std::llround(static_cast<double>(k) * step));
    if (i >= frame_count) break;
    idx.push_back(i);
  }
  return idx;
}

std::vector<std::size_t> spread_indices(std::size_t frame_count, int count) {
  std::vector<std::size_t> idx;
  if (frame_count == 0 || count <= 0) return idx;
  if (frame_count <= static_cast<std::size_t>(count)) {
    idx.resize(frame_count);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
  }
  if (count == 1) return {0};
  for (int k = 0; k < count; ++k) {
    idx.push_back(static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * static_cast<double>(frame_count - 1) / (count - 1))));
  }
  return idx;
}

double mse8(const Image& a, const Image& b) {
  require_same_shape(a, b, "mse8");
  return band_mse(a, b, 0, a.height());
}

double motion_stat(const VideoClip& clip, const CurateConfig& cfg, const FlowBackend& backend) {
  const FlowBackend flow = backend ? backend : block_flow_backend(cfg.flow);
  std::vector<Image> frames = sampled_frames(clip, cfg);
  if (frames.size() < 2) {
    throw InvalidArgumentError("motion_stat: fewer than 2 frames at the sampling rate");
  }
  for (auto& f : frames) f = resize_area(f, cfg.flow_width, cfg.flow_height);
  const std::size_t pairs = frames.size() - 1;
  std::vector<FlowField> fields(pairs);
  parallel_for(pairs, [&](std::size_t i) { fields[i] = flow(frames[i], frames[i + 1]); });

  const std::vector<double> lat = latitude_weights(cfg.flow_height);
  std::vector<std::pair<double, double>> samples;
  samples.reserve(pairs * static_cast<std::size_t>(cfg.flow_width) * cfg.flow_height);
  double total = 0.0;
  for (const auto& f : fields) {
    for (int y = 0; y < f.height; ++y) {
      for (int x = 0; x < f.width; ++x) {
        const std::size_t k = static_cast<std::size_t>(y) * f.width + x;
        samples.emplace_back(f.magnitude(k), lat[y]);
        total += lat[y];
      }
    }
  }
  std::sort(samples.begin(), samples.end());
  const double target = 0.75 * total;
  double acc = 0.0;
  for (const auto& [m, w] : samples) {
    acc += w;
    if (acc >= target) return m;
  }
  return samples.empty() ? 0.0 : samples.back().first;
}

double dual_fisheye_fraction(const VideoClip& clip, const CurateConfig& cfg) {
  const auto idx = spread_indices(clip.frames.size(), cfg.format_samples);
  if (idx.empty()) return 0.0;
  std::vector<int> dual(idx.size(), 0);
  parallel_for(idx.size(), [&](std::size_t i) {
    dual[i] = has_dual_circles(clip.frames[idx[i]], cfg.hough) ? 1 : 0;
  });
  return std::accumulate(dual.begin(), dual.end(), 0) / static_cast<double>(idx.size());
}

double boundary_smoothness(const Image& frame) {
  const Image l = to_luma(frame);
  const int w = l.width(), h = l.height();
  if (w < 2) throw InvalidArgumentError("boundary_smoothness: frame narrower than 2 px");
  double seam = 0.0;
  double antipodal = 0.0;
  const int half = w / 2;
  for (int y = 0; y < h; ++y) {
    seam += std::abs(l.at(0, y, 0) - l.at(w - 1, y, 0));
    for (int x = 0; x < half; ++x) antipodal += std::abs(l.at(x, y, 0) - l.at(x + half, y, 0));
  }
  seam /= h;
  antipodal /= static_cast<double>(h) * half;
  return seam / (antipodal + 1e-6);
}

double boundary_smoothness(const VideoClip& clip, const CurateConfig& cfg) {
  const auto idx = spread_indices(clip.frames.size(), cfg.format_samples);
  if (idx.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i : idx) sum += boundary_smoothness(clip.frames[i]);
  return sum / static_cast<double>(idx.size());
}

CutStats detect_cuts(const VideoClip& clip, const CurateConfig& cfg) {
  CutStats s;
  const std::size_t n = clip.frames.size();
  if (n < 2) return s;
  std::vector<Image> luma(n);
  parallel_for(n, [&](std::size_t i) { luma[i] = to_luma(clip.frames[i]); });
  s.scores.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    require_same_shape(luma[i], luma[i + 1], "detect_cuts");
    const auto a = luma[i].data();
    const auto b = luma[i + 1].data();
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += std::abs(a[k] - b[k]);
    s.scores[i] = sum / static_cast<double>(a.size()) / 255.0;
  }
  const double m = static_cast<double>(s.scores.size());
  const double mean = std::accumulate(s.scores.begin(), s.scores.end(), 0.0) / m;
  double var = 0.0;
  for (double v : s.scores) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / m);
  s.threshold = std::min(std::max(mean + cfg.cut_sigma * sd, cfg.cut_min_threshold),
                         cfg.cut_max_threshold);
  s.cuts.resize(s.scores.size());
  std::size_t cuts = 0, single = 0;
  for (std::size_t i = 0; i < s.scores.size(); ++i) {
    s.cuts[i] = s.scores[i] > s.threshold;
    cuts += s.cuts[i] ? 1 : 0;
  }
  for (std::size_t i = 0; i < s.cuts.size(); ++i) {
    if (!s.cuts[i]) continue;
    const bool prev = i > 0 && s.cuts[i - 1];
    const bool next = i + 1 < s.cuts.size() && s.cuts[i + 1];
    if (!prev && !next) ++single;
  }
  s.overall_ratio = static_cast<double>(cuts) / m;
  s.single_frame_ratio = static_cast<double>(single) / m;
  return s;
}

double image_set_score(const VideoClip& clip, const CurateConfig& cfg) {
  const auto frames = sampled_frames(clip, cfg);
  if (frames.size() < 2) {
    throw InvalidArgumentError("image_set_score: fewer than 2 frames at the sampling rate");
  }
  std::vector<double> m(frames.size() - 1);
  parallel_for(m.size(), [&](std::size_t i) { m[i] = mse8(frames[i], frames[i + 1]); });
  return *std::min_element(m.begin(), m.end());
}

StaticRegionStats static_region_score(const VideoClip& clip, const CurateConfig& cfg) {
  const auto frames = sampled_frames(clip, cfg);
  StaticRegionStats s;
  s.ratios = cfg.static_ratios;
  if (frames.size() < 2) {
    throw InvalidArgumentError("static_region_score: fewer than 2 frames at the sampling rate");
  }
  const int h = frames.front().height();
  for (double r : cfg.static_ratios) {
    const int rows = std::clamp(static_cast<int>(std::lround(r * h)), 1, h);
    double top = 0.0, bottom = 0.0;
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
      require_same_shape(frames[i], frames[i + 1], "static_region_score");
      top += band_mse(frames[i], frames[i + 1], 0, rows);
      bottom += band_mse(frames[i], frames[i + 1], h - rows, h);
    }
    const double pairs = static_cast<double>(frames.size() - 1);
    s.top.push_back(top / pairs);
    s.bottom.push_back(bottom / pairs);
  }
  return s;
}

CurationReport curate_video(const VideoClip& clip, const CurateConfig& cfg,
                            const FlowBackend& backend) {
  CurationReport report;
  report.source_id = clip.source_id;
  auto stop = [&] {
    return cfg.short_circuit && !report.filters.empty() && !report.filters.back().pass;
  };
  auto run = [&](auto&& fn) {
    if (!stop()) fn();
  };

  run([&] {
    report.filters.push_back(make_filter("dual_fisheye", dual_fisheye_fraction(clip, cfg),
                                         cfg.dual_fraction_max, ">"));
  });
  run([&] {
    report.filters.push_back(make_filter("boundary_smoothness", boundary_smoothness(clip, cfg),
                                         cfg.smoothness_max, ">"));
  });
  run([&] {
    report.filters.push_back(
        make_filter("motion", motion_stat(clip, cfg, backend), cfg.motion_min, "<"));
  });
  CutStats cuts;
  bool have_cuts = false;
  run([&] {
    cuts = detect_cuts(clip, cfg);
    have_cuts = true;
    auto f = make_filter("single_frame_cut_ratio", cuts.single_frame_ratio, cfg.single_cut_max, ">");
    f.details.emplace_back("cut_threshold", cuts.threshold);
    report.filters.push_back(std::move(f));
  });
  run([&] {
    if (!have_cuts) cuts = detect_cuts(clip, cfg);
    auto f = make_filter("overall_cut_ratio", cuts.overall_ratio, cfg.overall_cut_max, ">");
    f.details.emplace_back("cut_threshold", cuts.threshold);
    report.filters.push_back(std::move(f));
  });
  run([&] {
    report.filters.push_back(
        make_filter("image_set", image_set_score(clip, cfg), cfg.image_set_min, "<"));
  });
  run([&] {
    const auto s = static_region_score(clip, cfg);
    std::size_t pick = s.ratios.size();
    for (std::size_t i = 0; i < s.ratios.size(); ++i) {
      if (std::abs(s.ratios[i] - cfg.static_reject_ratio) < 1e-12) pick = i;
    }
    if (pick == s.ratios.size()) {
      throw InvalidArgumentError("static_region: reject ratio missing from the ratio set");
    }
    auto f = make_filter("static_region", std::min(s.top[pick], s.bottom[pick]), cfg.static_min, "<");
    for (std::size_t i = 0; i < s.ratios.size(); ++i) {
      const auto pct = std::to_string(static_cast<int>(std::lround(s.ratios[i] * 100)));
      f.details.emplace_back("top_" + pct, s.top[i]);
      f.details.emplace_back("bottom_" + pct, s.bottom[i]);
    }
    report.filters.push_back(std::move(f));
  });

  for (const auto& f : report.filters) {
    if (!f.pass) report.reject_reasons.push_back(f.name);
  }
  report.accepted = report.reject_reasons.empty();
  return report;
}

VideoClip load_clip(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IngestionError("clip directory not found: " + dir.string());
  VideoClip clip;
  clip.source_id = dir.filename().string();
  if (clip.source_id.empty()) clip.source_id = dir.parent_path().filename().string();
  const auto meta_path = dir / "metadata.json";
  try {
    const auto meta = nlohmann::json::parse(read_text(meta_path));
    clip.fps = meta.at("fps").get<double>();
    if (meta.contains("source_id")) clip.source_id = meta["source_id"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError(meta_path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw IngestionError(meta_path.string() + ": " + e.what());
  }
  if (!(clip.fps > 0.0)) throw IngestionError(meta_path.string() + ": fps must be positive");
  std::vector<fs::path> pngs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") pngs.push_back(entry.path());
  }
  std::sort(pngs.begin(), pngs.end());
  if (pngs.empty()) throw IngestionError("no PNG frames in " + dir.string());
  clip.frames.resize(pngs.size());
  parallel_for(pngs.size(), [&](std::size_t i) {
    try {
      clip.frames[i] = read_png(pngs[i]);
    } catch (const Error& e) {
      throw IngestionError(pngs[i].string() + ": " + e.what());
    }
  });
  return clip;
}

CurationReport curate_directory(const std::filesystem::path& dir, const CurateConfig& cfg) {
  VideoClip clip;
  try {
    clip = load_clip(dir);
  } catch (const IngestionError& e) {
    CurationReport r;
    r.source_id = dir.filename().string();
    r.ingestion_error = e.what();
    r.reject_reasons.push_back("ingestion");
    return r;
  }
  return curate_video(clip, cfg);
}

std::string report_to_json(const CurationReport& report, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["source_id"] = report.source_id;
  j["accepted"] = report.accepted;
  j["reject_reasons"] = report.reject_reasons;
  auto filters = nlohmann::ordered_json::array();
  for (const auto& f : report.filters) {
    nlohmann::ordered_json o;
    o["name"] = f.name;
    o["score"] = f.score;
    o["threshold"] = f.threshold;
    o["reject_if"] = f.reject_if;
    o["pass"] = f.pass;
    if (!f.details.empty()) {
      nlohmann::ordered_json d;
      for (const auto& [k, v] : f.details) d[k] = v;
      o["details"] = d;
    }
    filters.push_back(o);
  }
  j["filters"] = filters;
  if (report.ingestion_error) j["ingestion_error"] = *report.ingestion_error;
  j["boundary_smoothness_definition"] = "seam / antipodal column contrast";
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j.dump(2) + "\n";
}

std::string corpus_csv(const std::vector<CurationReport>& reports) {
  static const char* kFilters[] = {"dual_fisheye",      "boundary_smoothness", "motion",
                                   "single_frame_cut_ratio", "overall_cut_ratio", "image_set",
                                   "static_region"};
  std::ostringstream out;
  out.precision(9);
  out << "source_id,accepted,reject_reasons";
  for (const char* name : kFilters) out << ',' << name;
  out << '\n';
  for (const auto& r : reports) {
    std::string reasons;
    for (const auto& reason : r.reject_reasons) reasons += (reasons.empty() ? "" : ";") + reason;
    out << r.source_id << ',' << (r.accepted ? 1 : 0) << ',' << reasons;
    for (const char* name : kFilters) {
      out << ',';
      for (const auto& f : r.filters) {
        if (f.name == name) out << f.score;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pano
