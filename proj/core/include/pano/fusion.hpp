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

// Sampling loop with single- and dual-anchor latent fusion over an abstract
// denoiser.
//
// Dual-anchor sampling runs two conditioned passes per step and averages the
// resulting states: x_{t-1} = (Phi(x_t, t, fwd) + Phi(x_t, t, bwd)) / 2.
// There is no noise re-injection between steps.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pano/cache.hpp"
#include "pano/render.hpp"
#include "pano/trajectory.hpp"

namespace pano {

/// Dense tensor laid out as (frames, channels, height, width).
class LatentBlock {
 public:
  using Shape = std::array<std::size_t, 4>;

  LatentBlock() = default;
  explicit LatentBlock(Shape shape, double fill = 0.0);
  LatentBlock(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double& at(std::size_t t, std::size_t c, std::size_t y, std::size_t x) {
    return values_[index(t, c, y, x)];
  }
  double at(std::size_t t, std::size_t c, std::size_t y, std::size_t x) const {
    return values_[index(t, c, y, x)];
  }

  /// Reverses the frame axis.
  LatentBlock flipped_frames() const;

  bool all_finite() const;

  friend bool operator==(const LatentBlock&, const LatentBlock&) = default;

 private:
  std::size_t index(std::size_t t, std::size_t c, std::size_t y, std::size_t x) const {
    return ((t * shape_[1] + c) * shape_[2] + y) * shape_[3] + x;
  }

  Shape shape_{0, 0, 0, 0};
  std::vector<double> values_;
};

enum class StreamLabel { kSingle, kForward, kBackward };

std::string to_string(StreamLabel label);

/// Conditioning for one denoising stream: geometric scaffold latent plus an
/// opaque semantic block (image-feature stand-in).
struct ConditioningContext {
  LatentBlock geo_latent;
  LatentBlock semantic;
  StreamLabel label = StreamLabel::kSingle;

  friend bool operator==(const ConditioningContext&, const ConditioningContext&) = default;
};

struct NoiseSchedule {
  std::vector<double> timesteps;  ///< strictly decreasing
  std::vector<double> lambda;     ///< per-timestep loss weight, > 0

  /// `steps` timesteps (steps-i)/steps for i in [0, steps); lambda all ones.
  static NoiseSchedule uniform(int steps = 25);

  void validate() const;
};

/// One reverse-diffusion step. Implementations must return a block with the
/// input's shape.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual LatentBlock step(const LatentBlock& x, double t, const ConditioningContext& ctx) const = 0;
};

class IdentityDenoiser : public Denoiser {
 public:
  LatentBlock step(const LatentBlock& x, double t, const ConditioningContext& ctx) const override;
};

/// x_{t-1} = scale * x_t + bias_weight * ctx.geo_latent (when bias_weight != 0
/// the geo latent must match x's shape). `guidance` is carried opaquely.
class AffineDenoiser : public Denoiser {
 public:
  AffineDenoiser(double scale, double bias_weight, double guidance = 5.0)
      : scale_(scale), bias_weight_(bias_weight), guidance_(guidance) {}
  LatentBlock step(const LatentBlock& x, double t, const ConditioningContext& ctx) const override;
  double guidance() const { return guidance_; }

 private:
  double scale_;
  double bias_weight_;
  double guidance_;
};

/// Per-step hook: (step index, timestep, state after the step).
using StepObserver = std::function<void(std::size_t, double, const LatentBlock&)>;

/// Iterates x <- Phi(x, t, ctx) over the schedule's timesteps.
LatentBlock single_anchor_sample(const Denoiser& phi, const LatentBlock& x_T,
                                 const ConditioningContext& ctx, const NoiseSchedule& sched,
                                 const StepObserver& observer = {});

/// Per step: a = Phi(x, t, fwd), b = Phi(x, t, bwd), x <- (a + b) / 2.
LatentBlock dual_anchor_sample(const Denoiser& phi, const LatentBlock& x_T,
                               const ConditioningContext& ctx_fwd,
                               const ConditioningContext& ctx_bwd, const NoiseSchedule& sched,
                               const StepObserver& observer = {});

/// lambda_t * mean((eps - pred)^2).
double diffusion_loss(const LatentBlock& eps, const LatentBlock& pred, double lambda_t);

inline constexpr int kLatentDownsample = 8;

/// Stand-in encoder: 8x8 average pool per frame and channel.
LatentBlock mock_encode(const std::vector<Image>& frames);
LatentBlock mock_encode(const GeoVideo& video);

struct FusionContexts {
  ConditioningContext forward;
  ConditioningContext backward;  ///< geo latent in rendered (reversed) frame order
};

/// Renders the cache along traj and reverse(traj), encodes both, and encodes
/// the anchor8 crops of the first/last keyframe as semantic blocks.
FusionContexts build_contexts(const PointCloud& cloud, const std::vector<ErpFrame>& keyframes,
                              const Trajectory& traj, int width, int height,
                              const SplatConfig& splat = {});

/// Flips a backward context's geo latent to forward frame order.
ConditioningContext to_forward_order(const ConditioningContext& backward);

/// "<stem>.json" {"shape": [T,C,H,W], "dtype": "float32", "data": "<stem>.f32"}
/// plus raw little-endian float32 values in "<stem>.f32".
void write_latent(const std::filesystem::path& json_path, const LatentBlock& block);
LatentBlock read_latent(const std::filesystem::path& json_path);

/// Delegates each step to an external program through a file pair:
/// writes request_<step>_<label>.json/.f32 (with "t" and "label" in the
/// header) into `exchange_dir`, runs `command <request.json> <response.json>`,
/// and reads the response latent.
class ExternalDenoiser : public Denoiser {
 public:
  ExternalDenoiser(std::filesystem::path exchange_dir, std::string command);
  LatentBlock step(const LatentBlock& x, double t, const ConditioningContext& ctx) const override;

 private:
  std::filesystem::path dir_;
  std::string command_;
  mutable std::size_t calls_ = 0;
};

}  // namespace pano
