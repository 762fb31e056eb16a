#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <iostream>

#include "primforge/config.hpp"
#include "primforge/error.hpp"
#include "primforge/image.hpp"
#include "primforge/pipeline.hpp"
#include "primforge/render.hpp"
#include "primforge/simd/kernels.hpp"

namespace {

std::pair<int, int> parse_shard(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) throw pf::Error(pf::Errc::invalid_parameter, "--shard expects i/n");
  try {
    return {std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1))};
  } catch (const std::exception&) {
    throw pf::Error(pf::Errc::invalid_parameter, "--shard expects i/n");
  }
}

pf::DatasetConfig load_config(const std::string& path) {
  return path.empty() ? pf::DatasetConfig{} : pf::DatasetConfig::load(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primforge: procedural multi-view dataset generator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, shard = "0/1", rig, texture_dir, upload_cmd;
  uint64_t count = 0, seed = 0, crash_after = 0;
  int workers = 1, resolution = 0, views = 0;
  bool depth = false, no_mesh = false, quiet = false;

  auto* gen = app.add_subcommand("generate", "generate (a shard of) a dataset");
  gen->add_option("--config", config_path, "JSON config");
  gen->add_option("--out", out_dir, "output directory")->required();
  auto* count_opt = gen->add_option("--count", count, "number of objects in the dataset");
  gen->add_option("--seed", seed, "dataset seed");
  gen->add_option("--shard", shard, "shard i/n")->capture_default_str();
  gen->add_option("--workers", workers, "worker threads")->capture_default_str();
  gen->add_option("--resolution", resolution, "render resolution");
  gen->add_option("--views", views, "random views per object");
  gen->add_option("--rig", rig, "random | struct4 | struct8");
  gen->add_option("--texture-dir", texture_dir, "directory of PNG textures");
  gen->add_option("--upload-cmd", upload_cmd, "command run per finished object directory");
  gen->add_flag("--depth", depth, "also write depth_###.bin");
  gen->add_flag("--no-mesh", no_mesh, "skip OBJ/MTL/texture export");
  gen->add_flag("--quiet", quiet, "no progress output");
  gen->add_option("--crash-after", crash_after)->group("");

  uint64_t index = 0;
  int view = 4;
  std::string image_out;
  auto* prev = app.add_subcommand("preview", "render one object from one structural camera");
  prev->add_option("--config", config_path, "JSON config");
  prev->add_option("--seed", seed, "dataset seed");
  prev->add_option("--index", index, "object index");
  prev->add_option("--view", view, "view of the 8-view structural rig (0-7)")->capture_default_str();
  prev->add_option("--resolution", resolution, "image size");
  prev->add_option("--out", image_out, "output PNG")->required();

  std::string manifest;
  auto* st = app.add_subcommand("stats", "summarize a manifest");
  st->add_option("--manifest", manifest, "manifest file or dataset directory")->required();

  size_t sample = 16;
  auto* ver = app.add_subcommand("verify", "re-derive a sample of objects and byte-compare");
  ver->add_option("--out", out_dir, "dataset directory")->required();
  ver->add_option("--sample", sample, "objects to check")->capture_default_str();

  auto* dump = app.add_subcommand("config", "print the default config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      pf::DatasetConfig cfg = load_config(config_path);
      if (resolution) cfg.resolution = resolution;
      if (views) cfg.views = views;
      if (!rig.empty()) {
        auto r = pf::parse_rig(rig);
        if (!r) throw pf::Error(pf::Errc::invalid_parameter, "--rig must be random, struct4 or struct8");
        cfg.rig = *r;
      }
      if (!texture_dir.empty()) cfg.texture_dir = texture_dir;
      if (depth) cfg.write_depth = true;
      if (no_mesh) cfg.export_mesh = false;
      if (*count_opt) cfg.count = count;
      cfg.validate();

      pf::ShardOptions opts;
      opts.out = out_dir;
      opts.dataset_seed = seed;
      opts.count = cfg.count;
      std::tie(opts.shard_index, opts.shard_count) = parse_shard(shard);
      opts.workers = workers;
      opts.upload_cmd = upload_cmd;
      opts.quiet = quiet;
      opts.crash_after = crash_after;
      pf::ShardSummary s = pf::run_shard(cfg, opts);
      std::printf("assigned %" PRIu64 ", skipped %" PRIu64 ", produced %" PRIu64 ", failed %" PRIu64
                  "\nmanifest %s\n",
                  s.assigned, s.skipped, s.produced, s.failed, s.manifest.c_str());
      return 0;
    }
    if (*prev) {
      pf::DatasetConfig cfg = load_config(config_path);
      if (resolution) cfg.resolution = resolution;
      if (view < 0 || view > 7) throw pf::Error(pf::Errc::invalid_parameter, "--view must be in [0, 7]");
      pf::TextureLibrary textures = pf::dataset_textures(seed, cfg);
      pf::JobSpec job = pf::derive_job(seed, index, cfg.digest());
      pf::SynthesizedObject s = pf::synthesize(job, cfg, textures.size());
      auto cams = pf::structural_rig(8, cfg.struct_distance, cfg.fov_y_deg, cfg.resolution, cfg.resolution);
      std::vector<std::shared_ptr<const pf::Texture>> held;
      std::vector<const pf::Texture*> tex;
      for (uint32_t id : s.object.textures) tex.push_back(held.emplace_back(textures.get(id)).get());
      pf::RenderOptions ro;
      ro.lambert = cfg.lambert;
      pf::RenderOut out = pf::render(s.object.mesh, tex, cams[size_t(view)], ro);
      pf::write_png(image_out, out.rgba);
      std::printf("uuid %s, %zu triangles, augmentation %s, kernels %s\n", job.uuid.hex().c_str(),
                  s.object.mesh.triangle_count(), std::string(pf::to_string(s.object.augmentation.kind)).c_str(),
                  std::string(pf::simd::active_kernels().name).c_str());
      return 0;
    }
    if (*st) {
      std::fputs(pf::format_stats(pf::compute_stats(pf::read_manifest(manifest))).c_str(), stdout);
      return 0;
    }
    if (*ver) {
      pf::VerifyReport r = pf::verify_dataset(out_dir, sample);
      for (const auto& p : r.problems) std::printf("%s\n", p.c_str());
      std::printf("checked %zu, mismatched %zu\n", r.checked, r.mismatched);
      return r.mismatched == 0 ? 0 : 1;
    }
    if (*dump) {
      std::printf("%s\n", pf::DatasetConfig{}.to_json().c_str());
      return 0;
    }
  } catch (const pf::Error& e) {
    std::fprintf(stderr, "primforge: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "primforge: %s\n", e.what());
    return 2;
  }
  return 0;
}
