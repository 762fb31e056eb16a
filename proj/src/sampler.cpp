#include "primforge/sampler.hpp"

#include "primforge/error.hpp"

namespace pf {

std::string_view to_string(AugKind kind) {
  switch (kind) {
    case AugKind::none: return "none";
    case AugKind::boolean: return "boolean";
    case AugKind::wireframe: return "wireframe";
  }
  return "?";
}

int32_t ComposedObject::surface_count() const {
  int32_t n = 0;
  for (const auto& inst : instances) n += surface_group_count(inst.kind);
  return n;
}

std::vector<ChartKind> surface_charts(std::span<const PrimitiveInstance> instances) {
  std::vector<ChartKind> charts;
  for (const auto& inst : instances)
    for (int g = 0; g < surface_group_count(inst.kind); ++g)
      charts.push_back(chart_kind(inst.kind, g));
  return charts;
}

void SamplerConfig::validate() const {
  if (!(scale_lo > 0 && scale_lo <= scale_hi))
    throw Error(Errc::invalid_parameter, "scale range must satisfy 0 < lo <= hi");
  if (count_weights.empty()) throw Error(Errc::invalid_config, "count_weights is empty");
  double total = 0;
  for (double w : count_weights) {
    if (!(w >= 0)) throw Error(Errc::invalid_config, "count_weights must be non-negative");
    total += w;
  }
  if (!(total > 0)) throw Error(Errc::invalid_config, "count_weights sum to zero");
  if (primitive_pool.empty()) throw Error(Errc::invalid_config, "primitive_pool is empty");
}

int sample_primitive_count(Rng& rng, const SamplerConfig& cfg) {
  return int(rng.categorical(cfg.count_weights)) + 1;
}

Transform sample_transform(Rng& rng, double scale_lo, double scale_hi) {
  if (!(scale_lo > 0 && scale_lo <= scale_hi))
    throw Error(Errc::invalid_parameter, "scale range must satisfy 0 < lo <= hi");
  Transform t;
  t.scale = {rng.uniform(scale_lo, scale_hi), rng.uniform(scale_lo, scale_hi),
             rng.uniform(scale_lo, scale_hi)};
  t.translation = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  t.rotation = rng.uniform_rotation();
  return t;
}

std::vector<PrimitiveInstance> sample_instances(Rng& rng, const SamplerConfig& cfg) {
  cfg.validate();
  int count = sample_primitive_count(rng, cfg);
  std::vector<PrimitiveInstance> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    PrimitiveInstance inst;
    inst.kind = cfg.primitive_pool[rng.uniform_int(cfg.primitive_pool.size())];
    inst.transform = sample_transform(rng, cfg.scale_lo, cfg.scale_hi);
    out.push_back(inst);
  }
  return out;
}

TriMesh build_mesh(std::span<const PrimitiveInstance> instances, const Tessellation& tess) {
  std::vector<TriMesh> parts;
  parts.reserve(instances.size());
  for (const auto& inst : instances)
    parts.push_back(apply_transform(make_primitive(inst.kind, tess), inst.transform));
  return merge(parts);
}

ComposedObject compose(Rng& rng, const SamplerConfig& cfg) {
  ComposedObject obj;
  obj.instances = sample_instances(rng, cfg);
  obj.mesh = build_mesh(obj.instances, cfg.tessellation);
  return obj;
}

}  // namespace pf
