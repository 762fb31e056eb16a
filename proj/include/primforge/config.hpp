#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "primforge/augment.hpp"
#include "primforge/sampler.hpp"

namespace pf {

enum class Rig : uint8_t { random, struct4, struct8 };
std::string_view to_string(Rig rig);
std::optional<Rig> parse_rig(std::string_view name);

/// Everything that determines a dataset's bytes apart from the seed.
struct DatasetConfig {
  uint64_t count = 400000;  // not part of the digest
  int views = 32;
  int resolution = 512;
  Rig rig = Rig::random;
  double fov_y_deg = 60;
  double distance_lo = 2.0;
  double distance_hi = 3.0;
  double struct_distance = 2.5;
  double normalize_radius = 0.9;
  bool lambert = false;
  bool write_depth = false;
  bool export_mesh = true;
  int texture_res = 256;
  uint32_t texture_count = 256;
  std::string texture_dir;  // empty: procedural library
  SamplerConfig sampler;
  AugmentConfig augment;

  // Throws invalid-config.
  void validate() const;
  // Canonical JSON (sorted keys, all fields).
  std::string to_json() const;
  // Parses a JSON document; missing keys keep defaults, unknown keys and
  // wrong types throw invalid-config.
  static DatasetConfig from_json(std::string_view text);
  static DatasetConfig load(const std::filesystem::path& path);
  // FNV-1a of the canonical JSON with `count` removed.
  uint64_t digest() const;
};

}  // namespace pf
