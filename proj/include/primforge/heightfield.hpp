#pragma once

#include <map>
#include <vector>

#include "primforge/mesh.hpp"
#include "primforge/rng.hpp"

namespace pf {

/// Grid of signed displacement amplitudes over a surface's [0,1]^2 UV chart.
/// Node (r, c) sits at u = c / (cols - 1), v = r / (rows - 1).
struct HeightField {
  int rows = 0;
  int cols = 0;
  std::vector<double> grid;  // row-major
  double amp_max = 0;

  double at(int r, int c) const { return grid[size_t(r) * cols + c]; }
};

// Amplitudes ~ U[-amp_max, amp_max] with amp_max = k_hf * face_size.
HeightField make_heightfield(Rng& rng, int rows, int cols, double face_size, double k_hf);

// Piecewise bicubic Hermite interpolant with fourth-order finite-difference
// tangents (one-sided at the borders). Interpolates the nodes, is C1, and
// reproduces polynomials of degree <= 3 in each axis exactly. UVs outside
// [0,1] are clamped.
double eval_bicubic(const HeightField& hf, double u, double v);

// Saturates |value| smoothly above amp_max towards 1.25 * amp_max, which is
// reached only by rounding for huge inputs.
// Identity on [-amp_max, amp_max] and C1 everywhere.
double soft_cap(double value, double amp_max);

// The displacement applied to the surface: soft_cap(eval_bicubic(...)).
double displacement_at(const HeightField& hf, double u, double v);

// Longest side of the bounding box of the triangles in `group`.
double surface_extent(const TriMesh& mesh, int32_t group);

// Each vertex belongs to the group of the first triangle that references it;
// its chart coordinates are that triangle corner's UV. A vertex on a seam
// between groups is therefore displaced at most once.
struct VertexOwner {
  int32_t group = -1;
  Vec2 uv;
};
std::vector<VertexOwner> vertex_owners(const TriMesh& mesh);

// Moves every vertex owned by `surface_id` along its normal by the field's
// displacement at the vertex UV.
TriMesh displace_surface(const TriMesh& mesh, int32_t surface_id, const HeightField& hf);

// Same, for several surfaces at once (normals taken from the input mesh).
TriMesh displace_surfaces(const TriMesh& mesh, const std::map<int32_t, HeightField>& fields);

}  // namespace pf
