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

#include "pano/fusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pano/error.hpp"
#include "pano/image_io.hpp"

namespace pano {
namespace {

std::string shape_str(const LatentBlock::Shape& s) {
  std::ostringstream os;
  os << "(" << s[0] << "," << s[1] << "," << s[2] << "," << s[3] << ")";
  return os.str();
}

void check_step_output(const LatentBlock& in, const LatentBlock& out) {
  if (out.shape() != in.shape()) {
    throw ContractError("denoiser changed latent shape " + shape_str(in.shape()) + " -> " +
                        shape_str(out.shape()));
  }
}

}  // namespace

LatentBlock::LatentBlock(Shape shape, double fill) : shape_(shape) {
  for (auto d : shape) {
    if (d == 0) throw ShapeError("latent shape must be positive, got " + shape_str(shape));
  }
  values_.assign(shape[0] * shape[1] * shape[2] * shape[3], fill);
}

LatentBlock::LatentBlock(Shape shape, std::vector<double> values) : LatentBlock(shape) {
  if (values.size() != values_.size()) {
    throw ShapeError("latent value count does not match shape " + shape_str(shape));
  }
  values_ = std::move(values);
}

LatentBlock LatentBlock::flipped_frames() const {
  LatentBlock out = *this;
  const std::size_t frame = shape_[1] * shape_[2] * shape_[3];
  for (std::size_t t = 0; t < shape_[0]; ++t) {
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>((shape_[0] - 1 - t) * frame), frame,
                out.values_.begin() + static_cast<std::ptrdiff_t>(t * frame));
  }
  return out;
}

bool LatentBlock::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::string to_string(StreamLabel label) {
  switch (label) {
    case StreamLabel::kForward:
      return "forward";
    case StreamLabel::kBackward:
      return "backward";
    case StreamLabel::kSingle:
      break;
  }
  return "single";
}

NoiseSchedule NoiseSchedule::uniform(int steps) {
  if (steps < 0) throw InvalidArgumentError("schedule steps must be >= 0");
  NoiseSchedule s;
  for (int i = 0; i < steps; ++i) s.timesteps.push_back(static_cast<double>(steps - i) / steps);
  s.lambda.assign(s.timesteps.size(), 1.0);
  return s;
}

void NoiseSchedule::validate() const {
  if (lambda.size() != timesteps.size()) {
    throw InvalidArgumentError("schedule: lambda and timesteps differ in length");
  }
  for (std::size_t i = 0; i < timesteps.size(); ++i) {
    if (i > 0 && !(timesteps[i] < timesteps[i - 1])) {
      throw InvalidArgumentError("schedule: timesteps must strictly decrease");
    }
    if (!(lambda[i] > 0)) throw InvalidArgumentError("schedule: lambda must be positive");
  }
}

LatentBlock IdentityDenoiser::step(const LatentBlock& x, double, const ConditioningContext&) const {
  return x;
}

LatentBlock AffineDenoiser::step(const LatentBlock& x, double, const ConditioningContext& ctx) const {
  LatentBlock out = x;
  auto& v = out.values();
  for (double& e : v) e *= scale_;
  if (bias_weight_ != 0.0) {
    if (ctx.geo_latent.shape() != x.shape()) {
      throw ContractError("affine denoiser: geo latent " + shape_str(ctx.geo_latent.shape()) +
                          " does not match state " + shape_str(x.shape()));
    }
    const auto& b = ctx.geo_latent.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += bias_weight_ * b[i];
  }
  return out;
}

LatentBlock single_anchor_sample(const Denoiser& phi, const LatentBlock& x_T,
                                 const ConditioningContext& ctx, const NoiseSchedule& sched,
                                 const StepObserver& observer) {
  sched.validate();
  LatentBlock x = x_T;
  for (std::size_t i = 0; i < sched.timesteps.size(); ++i) {
    LatentBlock next = phi.step(x, sched.timesteps[i], ctx);
    check_step_output(x, next);
    x = std::move(next);
    if (observer) observer(i, sched.timesteps[i], x);
  }
  return x;
}

LatentBlock dual_anchor_sample(const Denoiser& phi, const LatentBlock& x_T,
                               const ConditioningContext& ctx_fwd,
                               const ConditioningContext& ctx_bwd, const NoiseSchedule& sched,
                               const StepObserver& observer) {
  sched.validate();
  if (ctx_fwd.geo_latent.shape() != ctx_bwd.geo_latent.shape()) {
    throw ContractError("dual anchor: context shapes differ " +
                        shape_str(ctx_fwd.geo_latent.shape()) + " vs " +
                        shape_str(ctx_bwd.geo_latent.shape()));
  }
  LatentBlock x = x_T;
  for (std::size_t i = 0; i < sched.timesteps.size(); ++i) {
    const double t = sched.timesteps[i];
    LatentBlock a = phi.step(x, t, ctx_fwd);
    const LatentBlock b = phi.step(x, t, ctx_bwd);
    check_step_output(x, a);
    check_step_output(x, b);
    auto& av = a.values();
    const auto& bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) av[k] = 0.5 * (av[k] + bv[k]);
    x = std::move(a);
    if (observer) observer(i, t, x);
  }
  return x;
}

double diffusion_loss(const LatentBlock& eps, const LatentBlock& pred, double lambda_t) {
  if (eps.shape() != pred.shape()) {
    throw ShapeError("diffusion_loss: shapes " + shape_str(eps.shape()) + " and " +
                     shape_str(pred.shape()) + " differ");
  }
  if (!(lambda_t > 0)) throw InvalidArgumentError("diffusion_loss: lambda must be positive");
  double acc = 0.0;
  const auto& a = eps.values();
  const auto& b = pred.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return lambda_t * acc / static_cast<double>(a.size());
}

LatentBlock mock_encode(const std::vector<Image>& frames) {
  if (frames.empty()) throw ShapeError("mock_encode: no frames");
  const int w = frames.front().width();
  const int h = frames.front().height();
  const int ch = frames.front().channels();
  if (w % kLatentDownsample != 0 || h % kLatentDownsample != 0) {
    throw ShapeError("mock_encode: frame " + std::to_string(w) + "x" + std::to_string(h) +
                     " is not divisible by 8");
  }
  const std::size_t lw = static_cast<std::size_t>(w / kLatentDownsample);
  const std::size_t lh = static_cast<std::size_t>(h / kLatentDownsample);
  LatentBlock out({frames.size(), static_cast<std::size_t>(ch), lh, lw});
  constexpr double kNorm = 1.0 / (kLatentDownsample * kLatentDownsample);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Image& f = frames[t];
    if (f.width() != w || f.height() != h || f.channels() != ch) {
      throw ShapeError("mock_encode: frames differ in shape");
    }
    for (int c = 0; c < ch; ++c) {
      for (std::size_t ly = 0; ly < lh; ++ly) {
        for (std::size_t lx = 0; lx < lw; ++lx) {
          double acc = 0.0;
          for (int j = 0; j < kLatentDownsample; ++j) {
            for (int i = 0; i < kLatentDownsample; ++i) {
              acc += f.at(static_cast<int>(lx) * kLatentDownsample + i,
                          static_cast<int>(ly) * kLatentDownsample + j, c);
            }
          }
          out.at(t, static_cast<std::size_t>(c), ly, lx) = acc * kNorm;
        }
      }
    }
  }
  return out;
}

LatentBlock mock_encode(const GeoVideo& video) {
  std::vector<Image> frames;
  frames.reserve(video.frames.size());
  for (const auto& f : video.frames) frames.push_back(f.color.image());
  return mock_encode(frames);
}

FusionContexts build_contexts(const PointCloud& cloud, const std::vector<ErpFrame>& keyframes,
                              const Trajectory& traj, int width, int height,
                              const SplatConfig& splat) {
  if (keyframes.empty()) throw InvalidArgumentError("build_contexts: no keyframes");
  auto anchor_block = [](const ErpFrame& anchor) {
    std::vector<Image> crops;
    for (const auto& cam : crop_grid(CropGrid::kAnchor8)) {
      crops.push_back(equi_to_pers(anchor, cam).image);
    }
    return mock_encode(crops);
  };
  FusionContexts out;
  out.forward.geo_latent = mock_encode(render_video(cloud, traj, width, height, splat));
  out.forward.semantic = anchor_block(keyframes.front());
  out.forward.label = StreamLabel::kForward;
  out.backward.geo_latent = mock_encode(render_video(cloud, reverse(traj), width, height, splat));
  out.backward.semantic = anchor_block(keyframes.back());
  out.backward.label = StreamLabel::kBackward;
  return out;
}

ConditioningContext to_forward_order(const ConditioningContext& backward) {
  ConditioningContext out = backward;
  out.geo_latent = backward.geo_latent.flipped_frames();
  return out;
}

void write_latent(const std::filesystem::path& json_path, const LatentBlock& block) {
  auto data_path = json_path;
  data_path.replace_extension(".f32");
  std::vector<std::uint8_t> bytes;
  bytes.reserve(block.size() * 4);
  for (double v : block.values()) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
  write_file_atomic(data_path, bytes);
  const auto& s = block.shape();
  nlohmann::json header = {{"shape", {s[0], s[1], s[2], s[3]}},
                           {"dtype", "float32"},
                           {"byte_order", "little"},
                           {"data", data_path.filename().string()}};
  write_text_atomic(json_path, header.dump(2) + "\n");
}

LatentBlock read_latent(const std::filesystem::path& json_path) {
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(read_text(json_path));
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError("latent header " + json_path.string() + ": " + e.what());
  }
  const auto dims = header.at("shape").get<std::vector<std::size_t>>();
  if (dims.size() != 4) throw IngestionError("latent header must have a 4-d shape");
  if (header.value("dtype", "float32") != "float32") throw IngestionError("latent dtype must be float32");
  const auto data_path = json_path.parent_path() / header.at("data").get<std::string>();
  const auto bytes = read_file(data_path);
  const LatentBlock::Shape shape{dims[0], dims[1], dims[2], dims[3]};
  const std::size_t n = dims[0] * dims[1] * dims[2] * dims[3];
  if (bytes.size() != n * 4) throw IngestionError("latent data size mismatch in " + data_path.string());
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[4 * i + b]) << (8 * b);
    values[i] = std::bit_cast<float>(bits);
  }
  return LatentBlock(shape, std::move(values));
}

ExternalDenoiser::ExternalDenoiser(std::filesystem::path exchange_dir, std::string command)
    : dir_(std::move(exchange_dir)), command_(std::move(command)) {
  std::filesystem::create_directories(dir_);
}

LatentBlock ExternalDenoiser::step(const LatentBlock& x, double t, const ConditioningContext& ctx) const {
  char stem[64];
  std::snprintf(stem, sizeof(stem), "%04zu_%s", calls_++, to_string(ctx.label).c_str());
  const auto request = dir_ / (std::string("request_") + stem + ".json");
  const auto response = dir_ / (std::string("response_") + stem + ".json");
  write_latent(request, x);
  write_latent(dir_ / (std::string("request_") + stem + "_geo.json"), ctx.geo_latent);
  {
    nlohmann::json meta = nlohmann::json::parse(read_text(request));
    meta["t"] = t;
    meta["label"] = to_string(ctx.label);
    meta["geo"] = std::string("request_") + stem + "_geo.json";
    write_text_atomic(request, meta.dump(2) + "\n");
  }
  const std::string cmd = command_ + " '" + request.string() + "' '" + response.string() + "'";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw ContractError("external denoiser exited with status " + std::to_string(rc));
  LatentBlock out = read_latent(response);
  check_step_output(x, out);
  return out;
}

}  // namespace pano
