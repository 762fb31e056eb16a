#pragma once

#include <vector>

#include "primforge/object.hpp"
#include "primforge/rng.hpp"

namespace pf {

struct SamplerConfig {
  double scale_lo = 0.15;
  double scale_hi = 0.6;
  // Unnormalized weights for 1..9 primitives.
  std::vector<double> count_weights{5, 5, 5, 5, 5, 4, 3, 2, 1};
  std::vector<PrimitiveKind> primitive_pool{all_primitive_kinds.begin(),
                                            all_primitive_kinds.end()};
  Tessellation tessellation;

  void validate() const;
};

// Returns a count in [1, count_weights.size()].
int sample_primitive_count(Rng& rng, const SamplerConfig& cfg);

// Per-axis scale ~ U[lo, hi], translation ~ U[-1, 1]^3, uniform rotation.
Transform sample_transform(Rng& rng, double scale_lo, double scale_hi);

std::vector<PrimitiveInstance> sample_instances(Rng& rng, const SamplerConfig& cfg);

// Meshes each instance at the given tessellation and concatenates them.
TriMesh build_mesh(std::span<const PrimitiveInstance> instances, const Tessellation& tess);

ComposedObject compose(Rng& rng, const SamplerConfig& cfg);

}  // namespace pf
