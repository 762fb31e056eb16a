#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "primforge/math.hpp"

namespace pf {

using Tri = std::array<uint32_t, 3>;
using TriUv = std::array<Vec2, 3>;

/// Indexed triangle mesh. Positions are welded (shared between triangles) so
/// topology queries work on indices; UVs are stored per corner so charts may
/// have seams without splitting vertices.
struct TriMesh {
  std::vector<Vec3> positions;
  std::vector<Tri> triangles;
  std::vector<TriUv> uvs;       // one entry per triangle
  std::vector<int32_t> groups;  // surface-group id per triangle
  std::vector<Vec3> normals;    // per vertex, see compute_normals

  size_t vertex_count() const { return positions.size(); }
  size_t triangle_count() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }

  // One past the largest group id, or 0 for an empty mesh.
  int32_t group_count() const;

  void add_triangle(Tri t, TriUv uv, int32_t group) {
    triangles.push_back(t);
    uvs.push_back(uv);
    groups.push_back(group);
  }
};

// Area-weighted vertex normals, stored in mesh.normals.
void compute_normals(TriMesh& mesh);

// V - E + F with E counting unique undirected edges.
int64_t euler_characteristic(const TriMesh& mesh);

// Divergence-theorem volume. Meaningful only for closed oriented meshes.
double signed_volume(const TriMesh& mesh);

double surface_area(const TriMesh& mesh);

Aabb bounds(const TriMesh& mesh);
Aabb bounds(std::span<const Vec3> points);

TriMesh apply_transform(const TriMesh& mesh, const Transform& t);

// Concatenates meshes. Group ids of each input are offset by the group counts
// of the inputs before it.
TriMesh merge(std::span<const TriMesh> meshes);

// Uniform scale and translation so that the vertex farthest from the box
// center ends at `radius` from the origin.
TriMesh normalize_to_sphere(const TriMesh& mesh, double radius);

// Number of triangles sharing each undirected edge, keyed by (min, max).
struct EdgeStats {
  size_t edges = 0;
  size_t boundary = 0;      // degree 1
  size_t manifold = 0;      // degree 2
  size_t non_manifold = 0;  // degree > 2
};
EdgeStats edge_stats(const TriMesh& mesh);

// Every undirected edge is shared by exactly two triangles.
bool is_closed_manifold(const TriMesh& mesh);

// Every edge is shared by an even number of triangles: no cracks, though the
// surface may pinch along edges.
bool is_watertight(const TriMesh& mesh);

// Connected components through shared vertex indices; returns the component
// id per triangle and the component count.
std::vector<uint32_t> triangle_components(const TriMesh& mesh, uint32_t& count);

// Sub-mesh made of the listed triangles, with unused vertices dropped.
TriMesh extract(const TriMesh& mesh, std::span<const uint32_t> triangle_ids);

// Merges vertices closer than `tolerance` and drops triangles that collapse.
TriMesh weld(const TriMesh& mesh, double tolerance);

double triangle_area(Vec3 a, Vec3 b, Vec3 c);

}  // namespace pf
