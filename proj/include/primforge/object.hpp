#pragma once

#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "primforge/mesh.hpp"
#include "primforge/primitives.hpp"

namespace pf {

struct PrimitiveInstance {
  PrimitiveKind kind = PrimitiveKind::cube;
  Transform transform;
};

enum class AugKind : uint8_t { none, boolean, wireframe };

std::string_view to_string(AugKind kind);

struct AugRecord {
  AugKind kind = AugKind::none;
  // Kind that was drawn; differs from `kind` only when a boolean failed and
  // fell back to none.
  AugKind drawn = AugKind::none;
  std::set<int32_t> heightfield_surfaces;
  std::optional<PrimitiveInstance> cutter;
  std::optional<double> solidify_thickness;
  std::optional<double> wire_thickness;
  bool boolean_fallback = false;
};

/// A generated object: the mesh plus everything needed to explain it.
struct ComposedObject {
  TriMesh mesh;
  std::vector<PrimitiveInstance> instances;
  AugRecord augmentation;
  std::vector<uint32_t> textures;  // texture id per surface group

  // Surface group count implied by the instances; augmentations never add
  // groups, so this stays the texture table size.
  int32_t surface_count() const;
};

// Chart kind of every surface group, in merge order.
std::vector<ChartKind> surface_charts(std::span<const PrimitiveInstance> instances);

}  // namespace pf
