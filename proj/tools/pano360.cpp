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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pano/cache.hpp"
#include "pano/config.hpp"
#include "pano/curate.hpp"
#include "pano/error.hpp"
#include "pano/fusion.hpp"
#include "pano/image_io.hpp"
#include "pano/metrics.hpp"
#include "pano/parallel.hpp"
#include "pano/render.hpp"
#include "pano/sphere.hpp"
#include "pano/trajectory.hpp"

namespace fs = std::filesystem;

namespace pano {
namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

struct Run {
  std::string command;
  RunConfig cfg;
  std::string hash;
};

Run load_run(const std::string& command, const Common& common) {
  Run run{command, {}, {}};
  if (!common.config_path.empty()) {
    if (!fs::is_regular_file(common.config_path)) throw UsageError("config not found: " + common.config_path);
    run.cfg = config_from_json(read_text(common.config_path));
  }
  if (common.seed) run.cfg.seed = *common.seed;
  run.hash = config_hash(run.cfg);
  return run;
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw UsageError(what + " not found: " + p.string());
}

void require_dir(const fs::path& p, const std::string& what) {
  if (!fs::is_directory(p)) throw UsageError(what + " is not a directory: " + p.string());
}

// Sidecar next to a file output, or inside a directory output.
void write_run_record(const Run& run, const fs::path& out, bool is_dir) {
  const nlohmann::json record = {{"command", run.command},
                                 {"config", nlohmann::json::parse(config_to_json(run.cfg))},
                                 {"config_hash", run.hash}};
  const fs::path path = is_dir ? out / "run.json" : fs::path(out.string() + ".run.json");
  write_text_atomic(path, record.dump(2) + "\n");
}

std::vector<fs::path> list_pngs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw UsageError("no PNG frames in " + dir.string());
  return out;
}

std::vector<ErpFrame> load_erps(const fs::path& dir) {
  std::vector<ErpFrame> frames;
  for (const auto& p : list_pngs(dir)) frames.emplace_back(read_png(p));
  return frames;
}

std::string indexed(const char* prefix, std::size_t i) {
  char name[48];
  std::snprintf(name, sizeof(name), "%s_%02zu.png", prefix, i);
  return name;
}

void cmd_reproject(const Run& run, const fs::path& in, const fs::path& out, const std::string& grid,
                   bool inverse) {
  if (inverse) {
    require_dir(in, "--in");
    require_file(in / "cameras.json", "cameras.json");
    const auto cams = cameras_from_json(read_text(in / "cameras.json"));
    std::vector<PerspectiveView> views(cams.size());
    for (std::size_t i = 0; i < cams.size(); ++i) {
      views[i] = {cams[i], read_png(in / indexed("view", i))};
    }
    const auto back = pers_to_equi(views, run.cfg.sphere.erp_width, run.cfg.sphere.erp_height);
    fs::create_directories(out.parent_path().empty() ? fs::path(".") : out.parent_path());
    write_png(out, back.frame.image());
    fs::path mask = out;
    mask.replace_extension(".coverage.png");
    write_mask_png(mask, back.frame.width(), back.frame.height(), back.coverage);
    write_run_record(run, out, false);
    return;
  }
  require_file(in, "--in");
  CropGrid kind;
  if (grid == "cache16") {
    kind = CropGrid::kCache16;
  } else if (grid == "anchor8") {
    kind = CropGrid::kAnchor8;
  } else {
    throw UsageError("unknown grid: " + grid);
  }
  const ErpFrame erp(read_png(in));
  const auto cams = crop_grid(kind);
  fs::create_directories(out);
  std::vector<Image> images(cams.size());
  parallel_for(cams.size(), [&](std::size_t i) { images[i] = equi_to_pers(erp, cams[i]).image; });
  for (std::size_t i = 0; i < cams.size(); ++i) write_png(out / indexed("view", i), images[i]);
  write_text_atomic(out / "cameras.json", cameras_to_json(cams));
  write_run_record(run, out, true);
}

void cmd_crop8(const Run& run, const fs::path& in, const fs::path& out) {
  require_file(in, "--in");
  const auto crops = crops8(ErpFrame(read_png(in)), run.cfg.metrics);
  fs::create_directories(out);
  for (std::size_t i = 0; i < crops.size(); ++i) write_png(out / indexed("crop", i), crops[i]);
  write_run_record(run, out, true);
}

void cmd_build_cache(const Run& run, const fs::path& in, const fs::path& depth, const fs::path& out) {
  require_dir(in, "--in");
  require_file(depth, "--depth");
  const ManifestDepthProvider provider(depth);
  const PointCloud cloud = build_cache(load_erps(in), provider, run.cfg.cache);
  write_ply(out, cloud);
  write_run_record(run, out, false);
  std::cout << nlohmann::json{{"points", cloud.size()}, {"config_hash", run.hash}}.dump() << "\n";
}

void cmd_render(const Run& run, const fs::path& cache, const fs::path& traj, const fs::path& out) {
  require_file(cache, "--cache");
  require_file(traj, "--traj");
  const PointCloud cloud = read_ply(cache);
  const Trajectory t = trajectory_from_json(read_text(traj));
  const auto& r = run.cfg.render;
  const GeoVideo video = render_video(cloud, t, r.width, r.height, r.splat);
  write_geo_video(out, video, r.splat, traj.filename().string(), run.hash);
  write_run_record(run, out, true);
}

void cmd_traj(const Run& run, const std::string& op, const fs::path& in, const fs::path& out,
              std::optional<int> count) {
  require_file(in, "--in");
  const Trajectory t = trajectory_from_json(read_text(in));
  if (op == "validate") {
    const auto d = validate(t);
    std::cout << nlohmann::json{{"ok", d.ok}, {"messages", d.messages}}.dump() << "\n";
    if (!d.ok) throw DataError("trajectory failed validation");
    return;
  }
  if (out.empty()) throw UsageError("--out is required for traj " + op);
  Trajectory result;
  if (op == "interp") {
    result = interpolate(t, count.value_or(run.cfg.trajectory.interp_count));
  } else if (op == "smooth") {
    result = smooth(t, run.cfg.trajectory.smoothing);
  } else {
    result = reverse(t);
  }
  write_text_atomic(out, trajectory_to_json(result));
  write_run_record(run, out, false);
}

struct FuseOptions {
  std::string mode = "dual";
  std::string mock;
  std::string denoiser_cmd;
  fs::path cache;
  fs::path traj;
  fs::path keyframes;
  fs::path out;
};

LatentBlock seeded_block(LatentBlock::Shape shape, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  LatentBlock b(shape);
  for (double& v : b.values()) v = normal(rng);
  return b;
}

void cmd_fuse_sim(const Run& run, const FuseOptions& o) {
  if (o.mode != "single" && o.mode != "dual") throw UsageError("--mode must be single or dual");
  const auto& f = run.cfg.fusion;
  const std::string mock = o.mock.empty() ? f.mock : o.mock;
  std::mt19937_64 rng(run.cfg.seed);

  FusionContexts ctx;
  if (!o.cache.empty()) {
    require_file(o.cache, "--cache");
    require_file(o.traj, "--traj");
    require_dir(o.keyframes, "--keyframes");
    const auto keys = load_erps(o.keyframes);
    if (keys.size() != 2) throw UsageError("--keyframes must hold exactly two frames");
    ctx = build_contexts(read_ply(o.cache), keys, trajectory_from_json(read_text(o.traj)), run.cfg.render.width,
                         run.cfg.render.height, run.cfg.render.splat);
  } else {
    const LatentBlock::Shape shape = f.latent_shape;
    ctx.forward = {seeded_block(shape, rng), seeded_block({1, shape[1], shape[2], shape[3]}, rng),
                   StreamLabel::kForward};
    ctx.backward = {seeded_block(shape, rng), seeded_block({1, shape[1], shape[2], shape[3]}, rng),
                    StreamLabel::kBackward};
  }
  const LatentBlock x_T = seeded_block(ctx.forward.geo_latent.shape(), rng);

  fs::create_directories(o.out);
  std::unique_ptr<Denoiser> phi;
  if (mock == "affine") {
    phi = std::make_unique<AffineDenoiser>(f.affine_scale, f.affine_bias_weight, f.guidance);
  } else if (mock == "identity") {
    phi = std::make_unique<IdentityDenoiser>();
  } else if (mock == "external") {
    if (o.denoiser_cmd.empty()) throw UsageError("--mock external needs --denoiser-cmd");
    phi = std::make_unique<ExternalDenoiser>(o.out / "exchange", o.denoiser_cmd);
  } else {
    throw UsageError("unknown mock: " + mock);
  }

  std::string log;
  const StepObserver observer = [&](std::size_t i, double t, const LatentBlock& x) {
    double sum = 0.0, sq = 0.0;
    for (double v : x.values()) {
      sum += v;
      sq += v * v;
    }
    const double n = static_cast<double>(x.size());
    log += nlohmann::json{{"step", i}, {"t", t}, {"mean", sum / n}, {"rms", std::sqrt(sq / n)}}.dump() + "\n";
  };
  const auto sched = NoiseSchedule::uniform(f.steps);
  const LatentBlock x0 = o.mode == "single" ? single_anchor_sample(*phi, x_T, ctx.forward, sched, observer)
                                            : dual_anchor_sample(*phi, x_T, ctx.forward, ctx.backward, sched, observer);
  write_latent(o.out / "fused.json", x0);
  write_text_atomic(o.out / "steps.jsonl", log);
  write_run_record(run, o.out, true);
}

void cmd_curate(const Run& run, const fs::path& in, const fs::path& corpus, const fs::path& report,
                const fs::path& csv) {
  if (in.empty() == corpus.empty()) throw UsageError("give exactly one of --in or --corpus");
  if (!in.empty()) {
    require_dir(in, "--in");
    const auto r = curate_directory(in, run.cfg.curate);
    const std::string json = report_to_json(r, run.hash);
    if (report.empty()) {
      std::cout << json;
    } else {
      write_text_atomic(report, json);
      write_run_record(run, report, false);
    }
    return;
  }
  require_dir(corpus, "--corpus");
  std::vector<fs::path> clips;
  for (const auto& e : fs::directory_iterator(corpus)) {
    if (e.is_directory()) clips.push_back(e.path());
  }
  std::sort(clips.begin(), clips.end());
  std::vector<CurationReport> reports(clips.size());
  parallel_for(clips.size(), [&](std::size_t i) { reports[i] = curate_directory(clips[i], run.cfg.curate); });
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : reports) all.push_back(nlohmann::json::parse(report_to_json(r, run.hash)));
  const std::string json = nlohmann::json{{"config_hash", run.hash}, {"reports", all}}.dump(2) + "\n";
  if (report.empty()) {
    std::cout << json;
  } else {
    write_text_atomic(report, json);
    write_run_record(run, report, false);
  }
  if (!csv.empty()) write_text_atomic(csv, "# config_hash=" + run.hash + "\n" + corpus_csv(reports));
}

void cmd_metrics(const Run& run, const fs::path& gen, const fs::path& gt, const fs::path& out, const fs::path& csv,
                 bool no_stwe) {
  require_dir(gen, "--gen");
  require_dir(gt, "--gt");
  const MetricReport r = evaluate(load_erps(gen), load_erps(gt), run.cfg.metrics, !no_stwe);
  write_text_atomic(out, metrics_to_json(r, run.hash));
  write_run_record(run, out, false);
  if (!csv.empty()) write_text_atomic(csv, "# config_hash=" + run.hash + "\n" + metrics_to_csv(r));
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace
}  // namespace pano

int main(int argc, char** argv) {
  using namespace pano;
  CLI::App app{"pano360: panorama geometry, caching, fusion simulation, curation and metrics"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "JSON run configuration");
  app.add_option("--seed", common.seed, "Overrides the config seed");

  std::string in, out, grid = "cache16", depth, cache, traj, report, csv, corpus, gen, gt;
  bool inverse = false, no_stwe = false;
  std::optional<int> count;
  FuseOptions fuse;

  auto* reproject = app.add_subcommand("reproject", "ERP to perspective views, or back with --inverse");
  reproject->add_option("--in", in, "ERP PNG, or a view directory with --inverse")->required();
  reproject->add_option("--out", out, "View directory, or ERP PNG with --inverse")->required();
  reproject->add_option("--grid", grid, "cache16 or anchor8");
  reproject->add_flag("--inverse", inverse, "Stitch views back into an ERP");

  auto* crop8 = app.add_subcommand("crop8", "Eight horizontal metric crops of one ERP");
  crop8->add_option("--in", in, "ERP PNG")->required();
  crop8->add_option("--out", out, "Output directory")->required();

  auto* build = app.add_subcommand("build-cache", "Lift ERP frames and depth views into a point cloud");
  build->add_option("--in", in, "Directory of ERP PNG frames")->required();
  build->add_option("--depth", depth, "Depth manifest JSON")->required();
  build->add_option("--out", out, "Output PLY")->required();

  auto* render = app.add_subcommand("render", "Render a cache along a trajectory");
  render->add_option("--cache", cache, "Cache PLY")->required();
  render->add_option("--traj", traj, "Trajectory JSON")->required();
  render->add_option("--out", out, "Output directory")->required();

  auto* traj_cmd = app.add_subcommand("traj", "Trajectory operations");
  traj_cmd->require_subcommand(1);
  for (const char* op : {"interp", "smooth", "reverse", "validate"}) {
    auto* sub = traj_cmd->add_subcommand(op);
    sub->fallthrough();
    sub->add_option("--in", in, "Trajectory JSON")->required();
    if (std::string(op) != "validate") sub->add_option("--out", out, "Output trajectory JSON")->required();
    if (std::string(op) == "interp") sub->add_option("--count", count, "Output pose count");
  }

  auto* fuse_cmd = app.add_subcommand("fuse-sim", "Simulated single or dual anchor sampling");
  fuse_cmd->add_option("--mode", fuse.mode, "single or dual");
  fuse_cmd->add_option("--mock", fuse.mock, "affine, identity or external");
  fuse_cmd->add_option("--denoiser-cmd", fuse.denoiser_cmd, "Command run as: <cmd> <request> <response>");
  fuse_cmd->add_option("--cache", fuse.cache, "Cache PLY for rendered contexts");
  fuse_cmd->add_option("--traj", fuse.traj, "Trajectory JSON for rendered contexts");
  fuse_cmd->add_option("--keyframes", fuse.keyframes, "Directory with the two keyframe ERPs");
  fuse_cmd->add_option("--out", fuse.out, "Output directory")->required();

  auto* curate = app.add_subcommand("curate", "Filter one clip or a corpus of clips");
  curate->add_option("--in", in, "Clip directory (PNG frames + metadata.json)");
  curate->add_option("--corpus", corpus, "Directory of clip directories");
  curate->add_option("--report", report, "Report JSON (stdout when omitted)");
  curate->add_option("--csv", csv, "Corpus CSV");

  auto* metrics = app.add_subcommand("metrics", "Crop-based PSNR/SSIM and temporal warping error");
  metrics->add_option("--gen", gen, "Generated ERP frame directory")->required();
  metrics->add_option("--gt", gt, "Reference ERP frame directory")->required();
  metrics->add_option("--out", out, "Report JSON")->required();
  metrics->add_option("--csv", csv, "Report CSV");
  metrics->add_flag("--no-stwe", no_stwe, "Skip the temporal warping error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kExitUsage;
  }

  try {
    if (*reproject) {
      cmd_reproject(load_run("reproject", common), in, out, grid, inverse);
    } else if (*crop8) {
      cmd_crop8(load_run("crop8", common), in, out);
    } else if (*build) {
      cmd_build_cache(load_run("build-cache", common), in, depth, out);
    } else if (*render) {
      cmd_render(load_run("render", common), cache, traj, out);
    } else if (*traj_cmd) {
      const std::string op = traj_cmd->get_subcommands().front()->get_name();
      cmd_traj(load_run("traj " + op, common), op, in, out, count);
    } else if (*fuse_cmd) {
      cmd_fuse_sim(load_run("fuse-sim", common), fuse);
    } else if (*curate) {
      cmd_curate(load_run("curate", common), in, corpus, report, csv);
    } else if (*metrics) {
      cmd_metrics(load_run("metrics", common), gen, gt, out, csv, no_stwe);
    }
  } catch (const UsageError& e) {
    print_error(e.kind(), e.what());
    return kExitUsage;
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return kExitData;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kExitData;
  }
  return 0;
}
