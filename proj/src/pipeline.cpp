#include "primforge/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "primforge/augment.hpp"
#include "primforge/error.hpp"
#include "primforge/export.hpp"
#include "primforge/image.hpp"
#include "primforge/mesh.hpp"
#include "primforge/render.hpp"
#include "primforge/rng.hpp"
#include "primforge/sampler.hpp"

namespace pf {

namespace fs = std::filesystem;
using nlohmann::json;
using clk = std::chrono::steady_clock;

std::string Uuid::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64 "%016" PRIx64, hi, lo);
  return buf;
}

std::optional<Uuid> Uuid::parse(std::string_view hex) {
  if (hex.size() != 32) return std::nullopt;
  Uuid u;
  for (size_t i = 0; i < 32; ++i) {
    char c = hex[i];
    uint64_t d;
    if (c >= '0' && c <= '9')
      d = uint64_t(c - '0');
    else if (c >= 'a' && c <= 'f')
      d = uint64_t(c - 'a' + 10);
    else
      return std::nullopt;
    uint64_t& word = i < 16 ? u.hi : u.lo;
    word = (word << 4) | d;
  }
  return u;
}

JobSpec derive_job(uint64_t dataset_seed, uint64_t index, uint64_t config_hash) {
  JobSpec j;
  j.dataset_seed = dataset_seed;
  j.index = index;
  j.seed = hash64(dataset_seed, index);
  // mix64 is a bijection, so the low word alone already separates indices.
  j.uuid.hi = hash64(dataset_seed, index, 0x75756964ull);
  j.uuid.lo = mix64(index + mix64(dataset_seed ^ 0xA0761D6478BD642Full));
  j.config_hash = config_hash;
  return j;
}

TextureLibrary dataset_textures(uint64_t dataset_seed, const DatasetConfig& cfg) {
  if (!cfg.texture_dir.empty()) return TextureLibrary::from_directory(cfg.texture_dir, cfg.texture_res);
  return TextureLibrary::procedural(hash64(dataset_seed, 0x746578ull), cfg.texture_count, cfg.texture_res);
}

std::vector<Camera> job_cameras(const JobSpec& job, const DatasetConfig& cfg) {
  int res = cfg.resolution;
  switch (cfg.rig) {
    case Rig::struct4: return structural_rig(4, cfg.struct_distance, cfg.fov_y_deg, res, res);
    case Rig::struct8: return structural_rig(8, cfg.struct_distance, cfg.fov_y_deg, res, res);
    case Rig::random: break;
  }
  Rng rng = Rng(job.seed).fork(4);
  std::vector<Camera> cams;
  for (int v = 0; v < cfg.views; ++v)
    cams.push_back(sample_camera(rng, cfg.fov_y_deg, res, res, cfg.distance_lo, cfg.distance_hi));
  return cams;
}

SynthesizedObject synthesize(const JobSpec& job, const DatasetConfig& cfg, uint32_t library_size) {
  Rng root(job.seed);
  Rng shape = root.fork(1);
  Rng aug = root.fork(2);
  Rng tex = root.fork(3);
  SynthesizedObject s;
  s.object = compose(shape, cfg.sampler);
  augment_object(aug, s.object, cfg.augment);
  assign_textures(tex, s.object, library_size);
  s.object.mesh = normalize_to_sphere(s.object.mesh, cfg.normalize_radius);
  s.cameras = job_cameras(job, cfg);
  return s;
}

std::string_view to_string(RowStatus status) {
  switch (status) {
    case RowStatus::done: return "done";
    case RowStatus::failed_boolean_fallback: return "failed-boolean-fallback";
    case RowStatus::failed: return "failed";
  }
  return "?";
}

namespace {

[[noreturn]] void io_error(const std::string& msg) { throw Error(Errc::io, msg); }

std::optional<AugKind> parse_aug(std::string_view s) {
  for (AugKind k : {AugKind::none, AugKind::boolean, AugKind::wireframe})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::optional<RowStatus> parse_status(std::string_view s) {
  for (RowStatus r : {RowStatus::done, RowStatus::failed_boolean_fallback, RowStatus::failed})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

json vec_json(Vec3 v) { return {v.x, v.y, v.z}; }

json instance_json(const PrimitiveInstance& p) {
  const Transform& t = p.transform;
  return {{"kind", std::string(to_string(p.kind))},
          {"scale", vec_json(t.scale)},
          {"rotation_wxyz", {t.rotation.w, t.rotation.x, t.rotation.y, t.rotation.z}},
          {"translation", vec_json(t.translation)}};
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

std::string object_json(const JobSpec& job, const ComposedObject& obj) {
  const AugRecord& a = obj.augmentation;
  json prims = json::array();
  for (const auto& p : obj.instances) prims.push_back(instance_json(p));
  json aug = {{"kind", std::string(to_string(a.kind))},
              {"drawn", std::string(to_string(a.drawn))},
              {"heightfield_surfaces", std::vector<int32_t>(a.heightfield_surfaces.begin(),
                                                            a.heightfield_surfaces.end())},
              {"boolean_fallback", a.boolean_fallback}};
  if (a.cutter) aug["cutter"] = instance_json(*a.cutter);
  if (a.solidify_thickness) aug["solidify_thickness"] = *a.solidify_thickness;
  if (a.wire_thickness) aug["wire_thickness"] = *a.wire_thickness;
  json j = {{"uuid", job.uuid.hex()},
            {"index", job.index},
            {"dataset_seed", job.dataset_seed},
            {"seed", job.seed},
            {"config_hash", hex64(job.config_hash)},
            {"primitives", prims},
            {"augmentation", aug},
            {"textures", obj.textures},
            {"vertex_count", obj.mesh.vertex_count()},
            {"triangle_count", obj.mesh.triangle_count()}};
  return j.dump(2) + "\n";
}

std::string cameras_json(const std::vector<Camera>& cams, double fov_y_deg) {
  json views = json::array();
  for (const Camera& c : cams)
    views.push_back({{"c2w", c.c2w}, {"width", c.width}, {"height", c.height}});
  json j = {{"fov_y_deg", fov_y_deg}, {"views", views}};
  return j.dump(2) + "\n";
}

std::string view_name(const char* stem, size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03zu.%s", stem, i, ext);
  return buf;
}

void write_depth(const fs::path& path, const std::vector<float>& depth) {
  static_assert(std::endian::native == std::endian::little, "depth files are little-endian");
  write_file(path, std::string_view(reinterpret_cast<const char*>(depth.data()), depth.size() * sizeof(float)));
}

double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

}  // namespace

std::string ManifestRow::to_json_line() const {
  json j = {{"uuid", uuid.hex()},
            {"index", index},
            {"status", std::string(to_string(status))},
            {"synth_ms", synth_ms},
            {"render_ms", render_ms},
            {"triangle_count", triangle_count},
            {"aug_kind", std::string(to_string(aug_kind))},
            {"aug_drawn", std::string(to_string(aug_drawn))},
            {"primitive_count", primitive_count},
            {"surface_count", surface_count},
            {"heightfield_surfaces", heightfield_surfaces}};
  if (!error.empty()) j["error"] = error;
  return j.dump();
}

ManifestRow ManifestRow::from_json_line(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::invalid_input, "malformed manifest row");
  try {
    ManifestRow r;
    auto uuid = Uuid::parse(j.at("uuid").get<std::string>());
    auto status = parse_status(j.at("status").get<std::string>());
    auto kind = parse_aug(j.at("aug_kind").get<std::string>());
    auto drawn = parse_aug(j.value("aug_drawn", j.at("aug_kind").get<std::string>()));
    if (!uuid || !status || !kind || !drawn) throw Error(Errc::invalid_input, "malformed manifest row");
    r.uuid = *uuid;
    r.status = *status;
    r.aug_kind = *kind;
    r.aug_drawn = *drawn;
    r.index = j.value("index", uint64_t(0));
    r.synth_ms = j.at("synth_ms").get<double>();
    r.render_ms = j.at("render_ms").get<double>();
    r.triangle_count = j.at("triangle_count").get<uint64_t>();
    r.primitive_count = j.value("primitive_count", 0);
    r.surface_count = j.value("surface_count", 0);
    r.heightfield_surfaces = j.value("heightfield_surfaces", 0);
    r.error = j.value("error", std::string());
    return r;
  } catch (const json::exception&) {
    throw Error(Errc::invalid_input, "malformed manifest row");
  }
}

ManifestRow produce_object(const JobSpec& job, const DatasetConfig& cfg, const TextureLibrary& textures,
                           const fs::path& dir, TexturePngCache* pngs) {
  ManifestRow row;
  row.uuid = job.uuid;
  row.index = job.index;

  auto t0 = clk::now();
  SynthesizedObject s = synthesize(job, cfg, textures.size());
  const ComposedObject& obj = s.object;
  write_file(dir / "object.json", object_json(job, obj));
  if (cfg.export_mesh) {
    if (pngs)
      export_mesh(dir, obj.mesh, obj.textures, *pngs);
    else
      export_mesh(dir, obj.mesh, obj.textures, textures);
  }
  row.synth_ms = ms_since(t0);

  auto t1 = clk::now();
  std::vector<std::shared_ptr<const Texture>> held;
  std::vector<const Texture*> group_tex;
  for (uint32_t id : obj.textures) {
    held.push_back(textures.get(id));
    group_tex.push_back(held.back().get());
  }
  RenderOptions ropts;
  ropts.lambert = cfg.lambert;
  fs::create_directories(dir / "renders");
  for (size_t v = 0; v < s.cameras.size(); ++v) {
    RenderOut out = render(obj.mesh, group_tex, s.cameras[v], ropts);
    write_png(dir / "renders" / view_name("view", v, "png"), out.rgba);
    if (cfg.write_depth) write_depth(dir / "renders" / view_name("depth", v, "bin"), out.depth);
  }
  write_file(dir / "cameras.json", cameras_json(s.cameras, cfg.fov_y_deg));
  row.render_ms = ms_since(t1);

  const AugRecord& a = obj.augmentation;
  row.status = a.boolean_fallback ? RowStatus::failed_boolean_fallback : RowStatus::done;
  row.triangle_count = obj.mesh.triangle_count();
  row.aug_kind = a.kind;
  row.aug_drawn = a.drawn;
  row.primitive_count = int(obj.instances.size());
  row.surface_count = obj.surface_count();
  row.heightfield_surfaces = int(a.heightfield_surfaces.size());
  write_file(dir / "done.marker", job.uuid.hex() + "\n");
  return row;
}

std::string manifest_name(int shard_index, int shard_count) {
  return "manifest.shard-" + std::to_string(shard_index) + "-of-" + std::to_string(shard_count) + ".jsonl";
}

namespace {

struct DatasetHeader {
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  DatasetConfig config;
};

std::string header_json(uint64_t seed, const DatasetConfig& cfg) {
  json j = {{"seed", seed},
            {"config_hash", hex64(cfg.digest())},
            {"config", json::parse(cfg.to_json())}};
  return j.dump(2) + "\n";
}

DatasetHeader read_header(const fs::path& out) {
  fs::path p = out / "dataset.json";
  json j = json::parse(read_file(p), nullptr, false);
  if (j.is_discarded() || !j.contains("seed") || !j.contains("config"))
    throw Error(Errc::invalid_input, "malformed " + p.string());
  DatasetHeader h;
  h.seed = j.at("seed").get<uint64_t>();
  h.config = DatasetConfig::from_json(j.at("config").dump());
  h.config_hash = h.config.digest();
  return h;
}

// Creates dataset.json, or checks that an existing one matches.
void ensure_header(const fs::path& out, uint64_t seed, const DatasetConfig& cfg) {
  fs::path p = out / "dataset.json";
  if (fs::exists(p)) {
    DatasetHeader h = read_header(out);
    if (h.seed != seed || h.config_hash != cfg.digest())
      throw Error(Errc::invalid_config, out.string() + " holds a dataset with a different seed or config");
    return;
  }
  fs::path tmp = out / (".dataset.json." + std::to_string(::getpid()));
  write_file(tmp, header_json(seed, cfg));
  fs::rename(tmp, p);
}

class ManifestWriter {
 public:
  explicit ManifestWriter(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd_ < 0) io_error("cannot open manifest " + path.string());
    // A crash can leave a torn last line; start on a fresh one.
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (in && in.tellg() > 0) {
      in.seekg(-1, std::ios::end);
      char last = 0;
      in.get(last);
      if (last != '\n') put("");
    }
  }
  ~ManifestWriter() { ::close(fd_); }
  ManifestWriter(const ManifestWriter&) = delete;
  ManifestWriter& operator=(const ManifestWriter&) = delete;

  void put(const std::string& line) {
    std::string buf = line + "\n";
    std::lock_guard lock(mutex_);
    const char* p = buf.data();
    size_t left = buf.size();
    while (left > 0) {
      ssize_t n = ::write(fd_, p, left);
      if (n < 0) io_error("manifest write failed");
      p += n;
      left -= size_t(n);
    }
  }

 private:
  int fd_ = -1;
  std::mutex mutex_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

}  // namespace

ShardSummary run_shard(const DatasetConfig& cfg, const ShardOptions& opts) {
  if (opts.shard_count < 1 || opts.shard_index < 0 || opts.shard_index >= opts.shard_count)
    throw Error(Errc::invalid_parameter, "shard index must satisfy 0 <= i < n");
  if (opts.workers < 1) throw Error(Errc::invalid_parameter, "workers must be at least 1");
  cfg.validate();

  const fs::path& out = opts.out;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) io_error("cannot create output directory " + out.string());
  {
    fs::path probe = out / (".probe." + std::to_string(::getpid()));
    std::ofstream f(probe);
    if (!f) io_error("output directory " + out.string() + " is not writable");
    f.close();
    fs::remove(probe);
  }
  ensure_header(out, opts.dataset_seed, cfg);

  fs::path staging = out / ".tmp" / ("shard-" + std::to_string(opts.shard_index) + "-of-" +
                                     std::to_string(opts.shard_count));
  fs::remove_all(staging);
  fs::create_directories(staging);

  ShardSummary summary;
  summary.manifest = out / manifest_name(opts.shard_index, opts.shard_count);

  std::unordered_map<Uuid, RowStatus, UuidHash> recorded;
  for (const ManifestRow& r : read_manifest(out)) recorded[r.uuid] = r.status;

  const uint64_t config_hash = cfg.digest();
  std::vector<JobSpec> todo;
  for (uint64_t i = uint64_t(opts.shard_index); i < opts.count; i += uint64_t(opts.shard_count)) {
    ++summary.assigned;
    JobSpec job = derive_job(opts.dataset_seed, i, config_hash);
    fs::path dir = out / job.uuid.hex();
    auto it = recorded.find(job.uuid);
    if (it != recorded.end()) {
      if (it->second == RowStatus::failed || fs::exists(dir / "done.marker")) {
        ++summary.skipped;
        continue;
      }
    }
    todo.push_back(job);
  }

  TextureLibrary textures = dataset_textures(opts.dataset_seed, cfg);
  TexturePngCache pngs(textures);
  ManifestWriter manifest(summary.manifest);

  std::atomic<size_t> next{0};
  std::atomic<uint64_t> started{0};
  std::atomic<uint64_t> produced{0};
  std::atomic<uint64_t> failed{0};
  std::mutex log_mutex;
  std::exception_ptr fatal;

  auto worker = [&] {
    for (;;) {
      size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      const JobSpec& job = todo[k];
      uint64_t nth = started.fetch_add(1) + 1;
      std::string hex = job.uuid.hex();
      fs::path tmp = staging / hex;
      fs::path dir = out / hex;
      ManifestRow row;
      try {
        fs::remove_all(tmp);
        fs::create_directories(tmp);
        row = produce_object(job, cfg, textures, tmp, &pngs);
        if (opts.crash_after && nth > opts.crash_after) std::_Exit(75);
        fs::remove_all(dir);
        fs::rename(tmp, dir);
      } catch (const Error& e) {
        if (e.code() == Errc::io) {
          std::lock_guard lock(log_mutex);
          if (!fatal) fatal = std::current_exception();
          next.store(todo.size());
          return;
        }
        std::error_code ignore;
        fs::remove_all(tmp, ignore);
        row = ManifestRow{};
        row.uuid = job.uuid;
        row.index = job.index;
        row.status = RowStatus::failed;
        row.error = e.what();
      } catch (const fs::filesystem_error& e) {
        std::lock_guard lock(log_mutex);
        if (!fatal) fatal = std::current_exception();
        next.store(todo.size());
        return;
      } catch (const std::exception& e) {
        std::error_code ignore;
        fs::remove_all(tmp, ignore);
        row = ManifestRow{};
        row.uuid = job.uuid;
        row.index = job.index;
        row.status = RowStatus::failed;
        row.error = e.what();
      }
      manifest.put(row.to_json_line());
      if (row.status == RowStatus::failed) {
        failed.fetch_add(1);
      } else {
        produced.fetch_add(1);
        if (!opts.upload_cmd.empty()) {
          int rc = std::system((opts.upload_cmd + " " + shell_quote(dir.string())).c_str());
          if (rc != 0) {
            std::lock_guard lock(log_mutex);
            std::fprintf(stderr, "upload hook failed for %s (status %d)\n", hex.c_str(), rc);
          }
        }
      }
      if (!opts.quiet) {
        uint64_t done = produced.load() + failed.load();
        if (done % 100 == 0 || done == todo.size()) {
          std::lock_guard lock(log_mutex);
          std::fprintf(stderr, "shard %d/%d: %" PRIu64 "/%zu objects\n", opts.shard_index,
                       opts.shard_count, done, todo.size());
        }
      }
    }
  };

  int nworkers = int(std::min<size_t>(size_t(opts.workers), std::max<size_t>(todo.size(), 1)));
  if (nworkers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);
  fs::remove_all(staging);

  summary.produced = produced.load();
  summary.failed = failed.load();
  return summary;
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      std::string name = e.path().filename().string();
      if (e.is_regular_file() && name.starts_with("manifest.") && name.ends_with(".jsonl"))
        files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else {
    throw Error(Errc::io, "no manifest at " + path.string());
  }

  std::vector<ManifestRow> rows;
  std::unordered_set<Uuid, UuidHash> seen;
  for (const fs::path& f : files) {
    std::ifstream in(f);
    if (!in) throw Error(Errc::io, "cannot read " + f.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ManifestRow r;
      try {
        r = ManifestRow::from_json_line(line);
      } catch (const Error&) {
        continue;  // torn line from an interrupted append
      }
      if (seen.insert(r.uuid).second) rows.push_back(std::move(r));
    }
  }
  return rows;
}

Stats compute_stats(const std::vector<ManifestRow>& rows) {
  if (rows.empty()) throw Error(Errc::invalid_input, "manifest is empty");
  Stats s;
  s.rows = rows.size();
  size_t not_done = 0;
  for (const ManifestRow& r : rows) {
    s.synth_ms += r.synth_ms;
    s.render_ms += r.render_ms;
    ++s.status[std::string(to_string(r.status))];
    if (r.status == RowStatus::failed) {
      ++not_done;
      continue;
    }
    if (r.status != RowStatus::done) ++not_done;
    ++s.aug_kind[std::string(to_string(r.aug_kind))];
    ++s.aug_drawn[std::string(to_string(r.aug_drawn))];
    ++s.primitive_count[r.primitive_count];
    s.surfaces += size_t(r.surface_count);
    s.heightfield_surfaces += size_t(r.heightfield_surfaces);
  }
  double total = s.synth_ms + s.render_ms;
  if (total > 0) {
    s.synth_fraction = s.synth_ms / total;
    s.render_fraction = s.render_ms / total;
  }
  s.failure_rate = double(not_done) / double(s.rows);
  return s;
}

std::string format_stats(const Stats& s) {
  std::ostringstream o;
  char buf[256];
  size_t counted = 0;
  for (auto& [k, n] : s.aug_drawn) counted += n;
  auto frac = [](size_t n, size_t d) { return d ? double(n) / double(d) : 0.0; };

  o << "rows: " << s.rows << "\n";
  std::snprintf(buf, sizeof(buf), "time: synthesis %.1f ms (%.1f%%), rendering %.1f ms (%.1f%%)\n", s.synth_ms,
                100 * s.synth_fraction, s.render_ms, 100 * s.render_fraction);
  o << buf;
  o << "time reference (published split): synthesis 5.0%, rendering 95.0%\n";
  if (s.rows) {
    std::snprintf(buf, sizeof(buf), "time per object: synthesis %.2f ms, rendering %.2f ms\n",
                  s.synth_ms / double(s.rows), s.render_ms / double(s.rows));
    o << buf;
  }
  o << "augmentation drawn:";
  for (auto& [k, n] : s.aug_drawn) {
    std::snprintf(buf, sizeof(buf), " %s=%zu (%.4f)", k.c_str(), n, frac(n, counted));
    o << buf;
  }
  o << "\naugmentation applied:";
  for (auto& [k, n] : s.aug_kind) {
    std::snprintf(buf, sizeof(buf), " %s=%zu (%.4f)", k.c_str(), n, frac(n, counted));
    o << buf;
  }
  o << "\nprimitive count:";
  for (auto& [k, n] : s.primitive_count) {
    std::snprintf(buf, sizeof(buf), " %d=%zu (%.4f)", k, n, frac(n, counted));
    o << buf;
  }
  std::snprintf(buf, sizeof(buf), "\nheight-field surfaces: %zu of %zu (%.4f)\n", s.heightfield_surfaces,
                s.surfaces, frac(s.heightfield_surfaces, s.surfaces));
  o << buf;
  o << "status:";
  for (auto& [k, n] : s.status) o << " " << k << "=" << n;
  std::snprintf(buf, sizeof(buf), "\nfailure rate: %.4f\n", s.failure_rate);
  o << buf;
  return o.str();
}

std::map<std::string, uint64_t> directory_digest(const fs::path& dir) {
  std::map<std::string, uint64_t> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string bytes = read_file(e.path());
    out[fs::relative(e.path(), dir).generic_string()] =
        fnv1a64({reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()});
  }
  return out;
}

std::map<std::string, uint64_t> dataset_digest(const fs::path& out) {
  std::map<std::string, uint64_t> digest;
  std::string header = read_file(out / "dataset.json");
  digest["dataset.json"] = fnv1a64({reinterpret_cast<const unsigned char*>(header.data()), header.size()});
  for (const auto& e : fs::directory_iterator(out)) {
    std::string name = e.path().filename().string();
    if (!e.is_directory() || !Uuid::parse(name)) continue;
    for (auto& [file, d] : directory_digest(e.path())) digest[name + "/" + file] = d;
  }
  return digest;
}

VerifyReport verify_dataset(const fs::path& out, size_t sample) {
  DatasetHeader h = read_header(out);
  std::vector<fs::path> finished;
  for (const auto& e : fs::directory_iterator(out)) {
    if (!e.is_directory()) continue;
    if (!Uuid::parse(e.path().filename().string())) continue;
    if (fs::exists(e.path() / "done.marker")) finished.push_back(e.path());
  }
  std::sort(finished.begin(), finished.end());

  VerifyReport report;
  if (finished.empty() || sample == 0) return report;
  size_t n = std::min(sample, finished.size());
  TextureLibrary textures = dataset_textures(h.seed, h.config);
  TexturePngCache pngs(textures);
  fs::path scratch = out / ".tmp" / ("verify-" + std::to_string(::getpid()));
  fs::remove_all(scratch);

  for (size_t k = 0; k < n; ++k) {
    const fs::path& dir = finished[k * finished.size() / n];
    std::string name = dir.filename().string();
    ++report.checked;
    json meta = json::parse(read_file(dir / "object.json"), nullptr, false);
    if (meta.is_discarded() || !meta.contains("index")) {
      ++report.mismatched;
      report.problems.push_back(name + ": unreadable object.json");
      continue;
    }
    JobSpec job = derive_job(h.seed, meta.at("index").get<uint64_t>(), h.config_hash);
    if (job.uuid.hex() != name) {
      ++report.mismatched;
      report.problems.push_back(name + ": uuid does not match its index");
      continue;
    }
    fs::path redo = scratch / name;
    fs::create_directories(redo);
    produce_object(job, h.config, textures, redo, &pngs);
    auto want = directory_digest(redo);
    auto have = directory_digest(dir);
    if (want != have) {
      ++report.mismatched;
      for (auto& [file, d] : want) {
        auto it = have.find(file);
        if (it == have.end())
          report.problems.push_back(name + "/" + file + ": missing");
        else if (it->second != d)
          report.problems.push_back(name + "/" + file + ": differs");
      }
      for (auto& [file, d] : have)
        if (!want.count(file)) report.problems.push_back(name + "/" + file + ": unexpected");
    }
    fs::remove_all(redo);
  }
  fs::remove_all(scratch);
  return report;
}

}  // namespace pf
