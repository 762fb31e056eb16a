#include "primforge/augment.hpp"

#include <algorithm>
#include <cmath>

#include "primforge/error.hpp"
#include "primforge/modifiers.hpp"
#include "primforge/sampler.hpp"

namespace pf {

namespace {

enum StreamTag : uint64_t { hf_stream = 1, kind_stream, cutter_stream, wire_stream };

void check_range(double lo, double hi, const char* what) {
  if (!(lo > 0 && lo <= hi))
    throw Error(Errc::invalid_config, std::string(what) + " must satisfy 0 < lo <= hi");
}

}  // namespace

Tessellation AugmentConfig::default_cutter_tessellation() {
  Tessellation t;
  t.cube = 1;
  t.sphere_rings = 12;
  t.sphere_segments = 24;
  t.round_segments = 24;
  t.round_bands = 1;
  t.cap_rings = 1;
  return t;
}

void AugmentConfig::validate() const {
  for (double p : {p_boolean, p_wireframe, p_none})
    if (!(p >= 0)) throw Error(Errc::invalid_config, "augmentation probabilities must be >= 0");
  if (std::abs(p_boolean + p_wireframe + p_none - 1) > 1e-9)
    throw Error(Errc::invalid_config, "p_boolean + p_wireframe + p_none must equal 1");
  if (!(p_heightfield >= 0 && p_heightfield <= 1))
    throw Error(Errc::invalid_config, "p_heightfield must be in [0, 1]");
  if (!(k_hf >= 0)) throw Error(Errc::invalid_config, "k_hf must be >= 0");
  if (hf_grid < 4) throw Error(Errc::invalid_config, "hf_grid must be >= 4");
  check_range(wire_thickness_lo, wire_thickness_hi, "wire_thickness_range");
  check_range(solidify_lo, solidify_hi, "solidify_range");
  check_range(cutter_scale_lo, cutter_scale_hi, "cutter_scale_range");
  if (wire_subdiv < 0) throw Error(Errc::invalid_config, "wire_subdiv must be >= 0");
  if (cutter_pool.empty()) throw Error(Errc::invalid_config, "cutter_pool is empty");
  if (std::find(cutter_pool.begin(), cutter_pool.end(), PrimitiveKind::torus) != cutter_pool.end())
    throw Error(Errc::invalid_config, "the torus cannot be a cutter");
}

AugKind choose_augmentation(Rng& rng, const AugmentConfig& cfg) {
  const double w[3] = {cfg.p_boolean, cfg.p_wireframe, cfg.p_none};
  static constexpr AugKind kinds[3] = {AugKind::boolean, AugKind::wireframe, AugKind::none};
  return kinds[rng.categorical(w)];
}

double bounding_radius(const TriMesh& mesh) {
  if (mesh.positions.empty()) return 0;
  Vec3 c = bounds(mesh).center();
  double r = 0;
  for (const auto& p : mesh.positions) r = std::max(r, length(p - c));
  return r;
}

void augment_object(Rng& rng, ComposedObject& obj, const AugmentConfig& cfg) {
  cfg.validate();
  AugRecord rec;

  Rng hf_rng = rng.fork(hf_stream);
  std::map<int32_t, HeightField> fields;
  for (int32_t g = 0; g < obj.surface_count(); ++g) {
    Rng r = hf_rng.fork(uint64_t(g));
    if (!r.bernoulli(cfg.p_heightfield)) continue;
    double extent = surface_extent(obj.mesh, g);
    fields.emplace(g, make_heightfield(r, cfg.hf_grid, cfg.hf_grid, extent, cfg.k_hf));
    rec.heightfield_surfaces.insert(g);
  }
  TriMesh displaced = displace_surfaces(obj.mesh, fields);

  Rng kind_rng = rng.fork(kind_stream);
  rec.drawn = choose_augmentation(kind_rng, cfg);
  rec.kind = rec.drawn;

  if (rec.drawn == AugKind::boolean) {
    Rng r = rng.fork(cutter_stream);
    PrimitiveInstance cutter;
    cutter.kind = cfg.cutter_pool[r.uniform_int(cfg.cutter_pool.size())];
    cutter.transform = sample_transform(r, cfg.cutter_scale_lo, cfg.cutter_scale_hi);
    // centered on a vertex of the shape as composed, before any displacement
    cutter.transform.translation = obj.mesh.positions[r.uniform_int(obj.mesh.positions.size())];
    TriMesh cutter_mesh = apply_transform(make_primitive(cutter.kind, cfg.cutter_tessellation),
                                          cutter.transform);
    double thickness = r.uniform(cfg.solidify_lo, cfg.solidify_hi) * bounding_radius(cutter_mesh);
    rec.cutter = cutter;
    try {
      TriMesh cut = boolean_difference(displaced, cutter_mesh, cfg.csg);
      if (cut.empty()) throw Error(Errc::invalid_input, "cutter removed the whole object");
      obj.mesh = solidify(cut, thickness);
      rec.solidify_thickness = thickness;
    } catch (const Error&) {
      rec.kind = AugKind::none;
      rec.cutter.reset();
      rec.boolean_fallback = true;
      obj.mesh = std::move(displaced);
    }
  } else if (rec.drawn == AugKind::wireframe) {
    Rng r = rng.fork(wire_stream);
    double thickness = r.uniform(cfg.wire_thickness_lo, cfg.wire_thickness_hi) *
                       bounding_radius(displaced);
    // beams follow a coarse lattice of the same shape; the dense mesh would
    // fuse into a solid
    TriMesh lattice = displace_surfaces(build_mesh(obj.instances, cfg.wire_tessellation), fields);
    obj.mesh = wireframe(lattice, thickness, cfg.wire_subdiv);
    rec.wire_thickness = thickness;
  } else {
    obj.mesh = std::move(displaced);
  }
  obj.augmentation = std::move(rec);
}

}  // namespace pf
