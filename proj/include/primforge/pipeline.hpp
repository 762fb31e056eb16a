#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "primforge/camera.hpp"
#include "primforge/config.hpp"
#include "primforge/export.hpp"
#include "primforge/object.hpp"
#include "primforge/texture.hpp"

namespace pf {

struct Uuid {
  uint64_t hi = 0;
  uint64_t lo = 0;
  friend constexpr bool operator==(const Uuid&, const Uuid&) = default;
  friend constexpr auto operator<=>(const Uuid&, const Uuid&) = default;
  std::string hex() const;  // 32 lowercase hex digits
  static std::optional<Uuid> parse(std::string_view hex);
};

struct UuidHash {
  size_t operator()(const Uuid& u) const { return size_t(u.hi ^ (u.lo * 0x9E3779B97F4A7C15ull)); }
};

struct JobSpec {
  uint64_t dataset_seed = 0;
  uint64_t index = 0;
  Uuid uuid;
  uint64_t seed = 0;  // the object's Rng seed
  uint64_t config_hash = 0;
};

JobSpec derive_job(uint64_t dataset_seed, uint64_t index, uint64_t config_hash = 0);

/// Synthesized object, normalized and textured, ready to render.
struct SynthesizedObject {
  ComposedObject object;
  std::vector<Camera> cameras;
};

SynthesizedObject synthesize(const JobSpec& job, const DatasetConfig& cfg, uint32_t library_size);
std::vector<Camera> job_cameras(const JobSpec& job, const DatasetConfig& cfg);

// The texture library a dataset uses: the PNG directory if configured,
// else the procedural library keyed by the dataset seed.
TextureLibrary dataset_textures(uint64_t dataset_seed, const DatasetConfig& cfg);

enum class RowStatus : uint8_t { done, failed_boolean_fallback, failed };
std::string_view to_string(RowStatus status);

struct ManifestRow {
  Uuid uuid;
  uint64_t index = 0;
  RowStatus status = RowStatus::done;
  double synth_ms = 0;
  double render_ms = 0;
  uint64_t triangle_count = 0;
  AugKind aug_kind = AugKind::none;
  AugKind aug_drawn = AugKind::none;
  int primitive_count = 0;
  int surface_count = 0;
  int heightfield_surfaces = 0;
  std::string error;  // set when status is failed

  std::string to_json_line() const;  // no trailing newline
  static ManifestRow from_json_line(std::string_view line);
};

// Writes one object's directory contents into `dir` (which must exist) and
// returns its manifest row. Rows carry timings; files never do.
// `pngs` may be null; a run passes one cache shared by all objects.
ManifestRow produce_object(const JobSpec& job, const DatasetConfig& cfg, const TextureLibrary& textures,
                           const std::filesystem::path& dir, TexturePngCache* pngs = nullptr);

struct ShardOptions {
  std::filesystem::path out;
  uint64_t dataset_seed = 0;
  uint64_t count = 0;
  int shard_index = 0;
  int shard_count = 1;
  int workers = 1;
  // Run per finished object with the object directory appended as the last
  // argument. A nonzero exit is reported but does not fail the object.
  std::string upload_cmd;
  bool quiet = true;
  // Testing hook: terminate the process abruptly once this many objects of
  // this invocation have been started (0 = never).
  uint64_t crash_after = 0;
};

struct ShardSummary {
  uint64_t assigned = 0;
  uint64_t skipped = 0;
  uint64_t produced = 0;
  uint64_t failed = 0;
  std::filesystem::path manifest;
};

std::string manifest_name(int shard_index, int shard_count);

// Generates the shard's objects under opts.out. Objects whose directory has a
// done.marker and a manifest row are skipped. Throws io if the output
// directory is unusable and invalid-config if it holds a different config.
ShardSummary run_shard(const DatasetConfig& cfg, const ShardOptions& opts);

// Every row of every manifest in `path` (a file or a dataset directory),
// deduplicated by uuid keeping the first row.
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

struct Stats {
  size_t rows = 0;
  double synth_ms = 0;
  double render_ms = 0;
  double synth_fraction = 0;
  double render_fraction = 0;
  std::map<std::string, size_t> aug_kind;   // final kind
  std::map<std::string, size_t> aug_drawn;  // drawn kind
  std::map<int, size_t> primitive_count;
  std::map<std::string, size_t> status;
  size_t surfaces = 0;
  size_t heightfield_surfaces = 0;
  double failure_rate = 0;  // rows not done
};

// Throws invalid-input for an empty manifest.
Stats compute_stats(const std::vector<ManifestRow>& rows);
std::string format_stats(const Stats& s);

struct VerifyReport {
  size_t checked = 0;
  size_t mismatched = 0;
  std::vector<std::string> problems;
};

// Re-derives up to `sample` finished objects into a scratch directory and
// byte-compares every file.
VerifyReport verify_dataset(const std::filesystem::path& out, size_t sample);

// Relative path -> 64-bit content digest for every regular file under `dir`.
std::map<std::string, uint64_t> directory_digest(const std::filesystem::path& dir);

// Content digest of a dataset: dataset.json plus every finished object
// directory. Manifests (which carry timings) and staging are left out.
std::map<std::string, uint64_t> dataset_digest(const std::filesystem::path& out);

}  // namespace pf
