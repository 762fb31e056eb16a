#include "primforge/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "primforge/error.hpp"
#include "primforge/rng.hpp"
#include "primforge/texture.hpp"

namespace pf {

using nlohmann::json;

std::string_view to_string(Rig rig) {
  switch (rig) {
    case Rig::random: return "random";
    case Rig::struct4: return "struct4";
    case Rig::struct8: return "struct8";
  }
  return "?";
}

std::optional<Rig> parse_rig(std::string_view name) {
  for (Rig r : {Rig::random, Rig::struct4, Rig::struct8})
    if (to_string(r) == name) return r;
  return std::nullopt;
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(Errc::invalid_config, msg); }

json tess_json(const Tessellation& t) {
  return {{"cube", t.cube},
          {"sphere_rings", t.sphere_rings},
          {"sphere_segments", t.sphere_segments},
          {"round_segments", t.round_segments},
          {"round_bands", t.round_bands},
          {"cap_rings", t.cap_rings},
          {"torus_major", t.torus_major},
          {"torus_minor", t.torus_minor},
          {"torus_major_radius", t.torus_major_radius},
          {"torus_minor_radius", t.torus_minor_radius}};
}

json kinds_json(const std::vector<PrimitiveKind>& kinds) {
  json out = json::array();
  for (PrimitiveKind k : kinds) out.push_back(std::string(to_string(k)));
  return out;
}

json to_tree(const DatasetConfig& c) {
  const SamplerConfig& s = c.sampler;
  const AugmentConfig& a = c.augment;
  return {
      {"count", c.count},
      {"views", c.views},
      {"resolution", c.resolution},
      {"rig", std::string(to_string(c.rig))},
      {"fov_y_deg", c.fov_y_deg},
      {"camera_distance_range", {c.distance_lo, c.distance_hi}},
      {"struct_distance", c.struct_distance},
      {"normalize_radius", c.normalize_radius},
      {"lambert", c.lambert},
      {"depth", c.write_depth},
      {"export_mesh", c.export_mesh},
      {"texture_res", c.texture_res},
      {"texture_count", c.texture_count},
      {"texture_dir", c.texture_dir},
      {"scale_lo", s.scale_lo},
      {"scale_hi", s.scale_hi},
      {"count_weights", s.count_weights},
      {"primitive_pool", kinds_json(s.primitive_pool)},
      {"tessellation", tess_json(s.tessellation)},
      {"p_boolean", a.p_boolean},
      {"p_wireframe", a.p_wireframe},
      {"p_none", a.p_none},
      {"p_heightfield", a.p_heightfield},
      {"k_hf", a.k_hf},
      {"hf_grid", a.hf_grid},
      {"wire_thickness_range", {a.wire_thickness_lo, a.wire_thickness_hi}},
      {"wire_subdiv", a.wire_subdiv},
      {"solidify_range", {a.solidify_lo, a.solidify_hi}},
      {"cutter_pool", kinds_json(a.cutter_pool)},
      {"cutter_scale_range", {a.cutter_scale_lo, a.cutter_scale_hi}},
      {"cutter_tessellation", tess_json(a.cutter_tessellation)},
      {"wire_tessellation", tess_json(a.wire_tessellation)},
      {"csg",
       {{"plane_epsilon", a.csg.plane_epsilon},
        {"weld_tolerance", a.csg.weld_tolerance},
        {"jitter", a.csg.jitter},
        {"max_retries", a.csg.max_retries}}},
  };
}

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return true;
  return a.type() == b.type();
}

// Overlays `in` onto the defaults, rejecting keys the defaults lack.
void overlay(json& base, const json& in, const std::string& where) {
  if (!in.is_object()) bad(where.empty() ? "config must be a JSON object" : where + " must be an object");
  for (auto it = in.begin(); it != in.end(); ++it) {
    std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) bad("unknown config key '" + key + "'");
    json& slot = base[it.key()];
    if (!same_kind(slot, it.value())) bad("config key '" + key + "' has the wrong type");
    if (slot.is_object())
      overlay(slot, it.value(), key);
    else
      slot = it.value();
  }
}

double num(const json& j, const char* key) { return j.at(key).get<double>(); }

int64_t integer(const json& j, const char* key) {
  double v = j.at(key).get<double>();
  if (v != std::floor(v) || std::abs(v) > 9.0e15) bad(std::string("config key '") + key + "' must be an integer");
  return int64_t(v);
}

int small_int(const json& j, const char* key) {
  int64_t v = integer(j, key);
  if (v < INT32_MIN || v > INT32_MAX) bad(std::string("config key '") + key + "' is out of range");
  return int(v);
}

std::pair<double, double> range(const json& j, const char* key) {
  const json& r = j.at(key);
  if (r.size() != 2 || !r[0].is_number() || !r[1].is_number())
    bad(std::string("config key '") + key + "' must be [lo, hi]");
  return {r[0].get<double>(), r[1].get<double>()};
}

std::vector<PrimitiveKind> kinds(const json& j, const char* key) {
  std::vector<PrimitiveKind> out;
  for (const json& e : j.at(key)) {
    if (!e.is_string()) bad(std::string("config key '") + key + "' must list primitive names");
    auto k = parse_primitive_kind(e.get<std::string>());
    if (!k) bad("unknown primitive '" + e.get<std::string>() + "' in " + key);
    out.push_back(*k);
  }
  return out;
}

Tessellation tess(const json& j) {
  Tessellation t;
  t.cube = small_int(j, "cube");
  t.sphere_rings = small_int(j, "sphere_rings");
  t.sphere_segments = small_int(j, "sphere_segments");
  t.round_segments = small_int(j, "round_segments");
  t.round_bands = small_int(j, "round_bands");
  t.cap_rings = small_int(j, "cap_rings");
  t.torus_major = small_int(j, "torus_major");
  t.torus_minor = small_int(j, "torus_minor");
  t.torus_major_radius = num(j, "torus_major_radius");
  t.torus_minor_radius = num(j, "torus_minor_radius");
  return t;
}

void check_tess(const Tessellation& t, const char* name) {
  bool ok = t.cube >= 1 && t.sphere_rings >= 2 && t.sphere_segments >= 3 && t.round_segments >= 3 &&
            t.round_bands >= 1 && t.cap_rings >= 1 && t.torus_major >= 3 && t.torus_minor >= 3 &&
            t.torus_minor_radius > 0 && t.torus_major_radius > t.torus_minor_radius;
  if (!ok) bad(std::string("invalid ") + name);
}

DatasetConfig from_tree(const json& j) {
  DatasetConfig c;
  int64_t count = integer(j, "count");
  if (count < 0) bad("count must be non-negative");
  c.count = uint64_t(count);
  c.views = small_int(j, "views");
  c.resolution = small_int(j, "resolution");
  auto rig = parse_rig(j.at("rig").get<std::string>());
  if (!rig) bad("rig must be random, struct4 or struct8");
  c.rig = *rig;
  c.fov_y_deg = num(j, "fov_y_deg");
  std::tie(c.distance_lo, c.distance_hi) = range(j, "camera_distance_range");
  c.struct_distance = num(j, "struct_distance");
  c.normalize_radius = num(j, "normalize_radius");
  c.lambert = j.at("lambert").get<bool>();
  c.write_depth = j.at("depth").get<bool>();
  c.export_mesh = j.at("export_mesh").get<bool>();
  c.texture_res = small_int(j, "texture_res");
  int64_t tc = integer(j, "texture_count");
  if (tc < 1 || tc > UINT32_MAX) bad("texture_count out of range");
  c.texture_count = uint32_t(tc);
  c.texture_dir = j.at("texture_dir").get<std::string>();

  SamplerConfig& s = c.sampler;
  s.scale_lo = num(j, "scale_lo");
  s.scale_hi = num(j, "scale_hi");
  s.count_weights.clear();
  for (const json& w : j.at("count_weights")) {
    if (!w.is_number()) bad("count_weights must be numbers");
    s.count_weights.push_back(w.get<double>());
  }
  s.primitive_pool = kinds(j, "primitive_pool");
  s.tessellation = tess(j.at("tessellation"));

  AugmentConfig& a = c.augment;
  a.p_boolean = num(j, "p_boolean");
  a.p_wireframe = num(j, "p_wireframe");
  a.p_none = num(j, "p_none");
  a.p_heightfield = num(j, "p_heightfield");
  a.k_hf = num(j, "k_hf");
  a.hf_grid = small_int(j, "hf_grid");
  std::tie(a.wire_thickness_lo, a.wire_thickness_hi) = range(j, "wire_thickness_range");
  a.wire_subdiv = small_int(j, "wire_subdiv");
  std::tie(a.solidify_lo, a.solidify_hi) = range(j, "solidify_range");
  a.cutter_pool = kinds(j, "cutter_pool");
  std::tie(a.cutter_scale_lo, a.cutter_scale_hi) = range(j, "cutter_scale_range");
  a.cutter_tessellation = tess(j.at("cutter_tessellation"));
  a.wire_tessellation = tess(j.at("wire_tessellation"));
  const json& csg = j.at("csg");
  a.csg.plane_epsilon = num(csg, "plane_epsilon");
  a.csg.weld_tolerance = num(csg, "weld_tolerance");
  a.csg.jitter = num(csg, "jitter");
  a.csg.max_retries = small_int(csg, "max_retries");
  return c;
}

}  // namespace

void DatasetConfig::validate() const {
  if (views < 1) bad("views must be at least 1");
  if (resolution < 8 || resolution > 8192) bad("resolution must be in [8, 8192]");
  if (!(fov_y_deg > 0 && fov_y_deg < 120)) bad("fov_y_deg must be in (0, 120)");
  if (!(distance_lo > 0 && distance_lo <= distance_hi)) bad("camera_distance_range must satisfy 0 < lo <= hi");
  if (!(struct_distance > 0)) bad("struct_distance must be positive");
  if (!(normalize_radius > 0)) bad("normalize_radius must be positive");
  if (!valid_texture_res(texture_res)) bad("texture_res must be a power of two in [64, 1024]");
  if (texture_count < 1) bad("texture_count must be at least 1");
  check_tess(sampler.tessellation, "tessellation");
  check_tess(augment.cutter_tessellation, "cutter_tessellation");
  check_tess(augment.wire_tessellation, "wire_tessellation");
  if (!(augment.csg.plane_epsilon > 0 && augment.csg.weld_tolerance > 0 && augment.csg.jitter >= 0 &&
        augment.csg.max_retries >= 0))
    bad("invalid csg options");
  try {
    sampler.validate();
  } catch (const Error& e) {
    if (e.code() == Errc::invalid_config) throw;
    bad(e.what());
  }
  augment.validate();
}

std::string DatasetConfig::to_json() const { return to_tree(*this).dump(2); }

DatasetConfig DatasetConfig::from_json(std::string_view text) {
  json in = json::parse(text.begin(), text.end(), nullptr, false);
  if (in.is_discarded()) bad("config is not valid JSON");
  json tree = to_tree(DatasetConfig{});
  overlay(tree, in, "");
  DatasetConfig c = from_tree(tree);
  c.validate();
  return c;
}

DatasetConfig DatasetConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot read config " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)), {});
  return from_json(text);
}

uint64_t DatasetConfig::digest() const {
  json tree = to_tree(*this);
  tree.erase("count");
  std::string text = tree.dump();
  return fnv1a64({reinterpret_cast<const unsigned char*>(text.data()), text.size()});
}

}  // namespace pf
