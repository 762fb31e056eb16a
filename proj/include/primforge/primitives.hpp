#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "primforge/mesh.hpp"

namespace pf {

enum class PrimitiveKind : uint8_t { cube, sphere, cylinder, cone, torus };

inline constexpr std::array<PrimitiveKind, 5> all_primitive_kinds = {
    PrimitiveKind::cube, PrimitiveKind::sphere, PrimitiveKind::cylinder,
    PrimitiveKind::cone, PrimitiveKind::torus};

std::string_view to_string(PrimitiveKind kind);
std::optional<PrimitiveKind> parse_primitive_kind(std::string_view name);

// Number of surface groups each generator emits.
int surface_group_count(PrimitiveKind kind);

// Which native UV chart a surface group uses; the same charts carry height
// fields.
enum class ChartKind : uint8_t { planar, spherical, cylindrical, conical, toroidal };
ChartKind chart_kind(PrimitiveKind kind, int group);

// Axis-aligned unit cube centered at the origin, one group per face, each face a
// tess x tess grid.
TriMesh gen_cube(int tess);

// Unit-radius UV sphere; `rings` latitude bands, `segments` longitude slices.
TriMesh gen_sphere(int rings, int segments);

// Unit radius, unit height, axis +y, centered at the origin. Groups: side, top
// cap, bottom cap. `bands` splits the side along the axis and `cap_rings`
// splits each cap radially; both default to the minimal closed solid.
TriMesh gen_cylinder(int segments, int bands = 1, int cap_rings = 1);

// Unit base radius, unit height, apex at +y. Groups: side, base.
TriMesh gen_cone(int segments, int bands = 1, int cap_rings = 1);

// Torus around the +y axis, single group.
TriMesh gen_torus(int major_segments, int minor_segments, double major_radius,
                  double minor_radius);

struct Tessellation {
  int cube = 4;
  int sphere_rings = 32;
  int sphere_segments = 64;
  int round_segments = 64;  // cylinder and cone
  int round_bands = 8;
  int cap_rings = 4;
  int torus_major = 48;
  int torus_minor = 24;
  double torus_major_radius = 1.0;
  double torus_minor_radius = 0.35;
};

// Coarse tessellation used as the lattice for wireframe conversion.
Tessellation wire_tessellation();

TriMesh make_primitive(PrimitiveKind kind, const Tessellation& tess);

}  // namespace pf
