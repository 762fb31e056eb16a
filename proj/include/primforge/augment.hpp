#pragma once

#include <map>
#include <vector>

#include "primforge/csg.hpp"
#include "primforge/heightfield.hpp"
#include "primforge/object.hpp"
#include "primforge/rng.hpp"

namespace pf {

struct AugmentConfig {
  double p_boolean = 0.4;
  double p_wireframe = 0.2;
  double p_none = 0.4;
  double p_heightfield = 0.5;
  double k_hf = 0.15;
  int hf_grid = 8;
  // Fractions of the object's bounding-sphere radius.
  double wire_thickness_lo = 0.01;
  double wire_thickness_hi = 0.04;
  int wire_subdiv = 1;
  // Fractions of the cutter's bounding-sphere radius.
  double solidify_lo = 0.02;
  double solidify_hi = 0.08;
  std::vector<PrimitiveKind> cutter_pool{PrimitiveKind::cube, PrimitiveKind::sphere,
                                         PrimitiveKind::cylinder, PrimitiveKind::cone};
  // Per-axis cutter scale ~ U[lo, hi].
  double cutter_scale_lo = 0.2;
  double cutter_scale_hi = 0.6;
  Tessellation cutter_tessellation = default_cutter_tessellation();
  Tessellation wire_tessellation = pf::wire_tessellation();
  CsgOptions csg;

  static Tessellation default_cutter_tessellation();
  // Throws invalid-config.
  void validate() const;
};

AugKind choose_augmentation(Rng& rng, const AugmentConfig& cfg);

// Bounding-sphere radius about the box center.
double bounding_radius(const TriMesh& mesh);

// Height fields on a random subset of surfaces, then at most one of boolean
// difference (plus solidify) or wireframe. A boolean that throws or removes
// everything falls back to no second augmentation and sets
// augmentation.boolean_fallback.
void augment_object(Rng& rng, ComposedObject& obj, const AugmentConfig& cfg);

}  // namespace pf
