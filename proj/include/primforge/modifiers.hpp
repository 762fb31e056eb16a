#pragma once

#include "primforge/mesh.hpp"

namespace pf {

inline constexpr double weld_tolerance = 1e-6;

// Offsets a copy of the surface inward by `thickness` along vertex normals,
// flips it, and closes every boundary loop with a rim strip. The result is a
// closed shell whenever the input is an edge-manifold surface.
TriMesh solidify(const TriMesh& mesh, double thickness);

// Splits every triangle into four at its edge midpoints, `levels` times.
// Midpoints are shared between neighbors so closed meshes stay closed.
TriMesh subdivide_midpoint(const TriMesh& mesh, int levels);

// Replaces the mesh by one closed square beam per unique edge after
// `subdiv_level` rounds of midpoint subdivision. Each beam has side
// `thickness`, spans its edge exactly, and takes the group and endpoint UVs of
// the first triangle that uses the edge.
TriMesh wireframe(const TriMesh& mesh, double thickness, int subdiv_level);

}  // namespace pf
