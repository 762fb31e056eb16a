#include "primforge/primitives.hpp"

#include <cmath>
#include <map>

#include "primforge/error.hpp"

namespace pf {

std::string_view to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::cube: return "cube";
    case PrimitiveKind::sphere: return "sphere";
    case PrimitiveKind::cylinder: return "cylinder";
    case PrimitiveKind::cone: return "cone";
    case PrimitiveKind::torus: return "torus";
  }
  return "?";
}

std::optional<PrimitiveKind> parse_primitive_kind(std::string_view name) {
  for (auto k : all_primitive_kinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

int surface_group_count(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::cube: return 6;
    case PrimitiveKind::sphere: return 1;
    case PrimitiveKind::cylinder: return 3;
    case PrimitiveKind::cone: return 2;
    case PrimitiveKind::torus: return 1;
  }
  return 0;
}

ChartKind chart_kind(PrimitiveKind kind, int group) {
  switch (kind) {
    case PrimitiveKind::cube: return ChartKind::planar;
    case PrimitiveKind::sphere: return ChartKind::spherical;
    case PrimitiveKind::cylinder: return group == 0 ? ChartKind::cylindrical : ChartKind::planar;
    case PrimitiveKind::cone: return group == 0 ? ChartKind::conical : ChartKind::planar;
    case PrimitiveKind::torus: return ChartKind::toroidal;
  }
  return ChartKind::planar;
}

TriMesh gen_cube(int tess) {
  if (tess < 1) throw Error(Errc::invalid_parameter, "cube tessellation must be >= 1");
  // Face frames (normal axis, sign, u axis, v axis) with u x v = outward normal.
  struct Face {
    int axis, sign, u, v;
  };
  static constexpr Face faces[6] = {{0, +1, 1, 2}, {0, -1, 2, 1}, {1, +1, 2, 0},
                                    {1, -1, 0, 2}, {2, +1, 0, 1}, {2, -1, 1, 0}};
  TriMesh mesh;
  // Surface lattice points are keyed by integer coordinates in [0, 2*tess] so
  // vertices on shared cube edges are welded.
  std::map<std::array<int, 3>, uint32_t> lattice;
  auto vertex = [&](std::array<int, 3> key) {
    auto [it, inserted] = lattice.try_emplace(key, uint32_t(mesh.positions.size()));
    if (inserted)
      mesh.positions.push_back({key[0] / double(tess) - 0.5, key[1] / double(tess) - 0.5,
                                key[2] / double(tess) - 0.5});
    return it->second;
  };
  for (int f = 0; f < 6; ++f) {
    const Face& face = faces[f];
    std::vector<uint32_t> grid((tess + 1) * (tess + 1));
    for (int j = 0; j <= tess; ++j)
      for (int i = 0; i <= tess; ++i) {
        std::array<int, 3> key{};
        key[face.axis] = face.sign > 0 ? tess : 0;
        key[face.u] = i;
        key[face.v] = j;
        grid[j * (tess + 1) + i] = vertex(key);
      }
    double inv = 1.0 / tess;
    for (int j = 0; j < tess; ++j)
      for (int i = 0; i < tess; ++i) {
        uint32_t a = grid[j * (tess + 1) + i], b = grid[j * (tess + 1) + i + 1];
        uint32_t c = grid[(j + 1) * (tess + 1) + i + 1], d = grid[(j + 1) * (tess + 1) + i];
        Vec2 ua{i * inv, j * inv}, ub{(i + 1) * inv, j * inv};
        Vec2 uc{(i + 1) * inv, (j + 1) * inv}, ud{i * inv, (j + 1) * inv};
        mesh.add_triangle({a, b, c}, {ua, ub, uc}, f);
        mesh.add_triangle({a, c, d}, {ua, uc, ud}, f);
      }
  }
  compute_normals(mesh);
  return mesh;
}

TriMesh gen_sphere(int rings, int segments) {
  if (rings < 2 || segments < 3)
    throw Error(Errc::invalid_parameter, "sphere needs rings >= 2 and segments >= 3");
  TriMesh mesh;
  auto ring_vertex = [&](int k, int j) {
    return uint32_t(1 + (k - 1) * segments + (j % segments));
  };
  mesh.positions.push_back({0, 1, 0});
  for (int k = 1; k < rings; ++k) {
    double theta = pi * k / rings;
    for (int j = 0; j < segments; ++j) {
      double phi = 2 * pi * j / segments;
      mesh.positions.push_back(
          {std::sin(theta) * std::cos(phi), std::cos(theta), std::sin(theta) * std::sin(phi)});
    }
  }
  auto south = uint32_t(mesh.positions.size());
  mesh.positions.push_back({0, -1, 0});

  auto uv = [&](int k, int j) { return Vec2{double(j) / segments, 1.0 - double(k) / rings}; };
  for (int j = 0; j < segments; ++j) {
    Vec2 pole{(j + 0.5) / segments, 1.0};
    mesh.add_triangle({0, ring_vertex(1, j + 1), ring_vertex(1, j)},
                      {pole, uv(1, j + 1), uv(1, j)}, 0);
  }
  for (int k = 1; k < rings - 1; ++k)
    for (int j = 0; j < segments; ++j) {
      uint32_t a = ring_vertex(k, j), b = ring_vertex(k, j + 1);
      uint32_t c = ring_vertex(k + 1, j + 1), d = ring_vertex(k + 1, j);
      mesh.add_triangle({a, b, c}, {uv(k, j), uv(k, j + 1), uv(k + 1, j + 1)}, 0);
      mesh.add_triangle({a, c, d}, {uv(k, j), uv(k + 1, j + 1), uv(k + 1, j)}, 0);
    }
  for (int j = 0; j < segments; ++j) {
    Vec2 pole{(j + 0.5) / segments, 0.0};
    mesh.add_triangle({south, ring_vertex(rings - 1, j), ring_vertex(rings - 1, j + 1)},
                      {pole, uv(rings - 1, j), uv(rings - 1, j + 1)}, 0);
  }
  compute_normals(mesh);
  return mesh;
}

namespace {

// Planar disk at height y with `rings` radial bands; `rim` holds the already
// emitted outer-ring vertex ids. `up` selects the +y facing winding.
void add_cap(TriMesh& mesh, double y, int segments, int rings, const std::vector<uint32_t>& rim,
             bool up, int32_t group) {
  auto disk_uv = [](Vec3 p) { return Vec2{(p.x + 1) * 0.5, (p.z + 1) * 0.5}; };
  auto center = uint32_t(mesh.positions.size());
  mesh.positions.push_back({0, y, 0});
  // ring_ids[k] are the vertices of radial ring k (k = 1..rings), k = rings is the rim
  std::vector<std::vector<uint32_t>> ring_ids(rings + 1);
  for (int k = 1; k < rings; ++k) {
    double r = double(k) / rings;
    for (int j = 0; j < segments; ++j) {
      double phi = 2 * pi * j / segments;
      ring_ids[k].push_back(uint32_t(mesh.positions.size()));
      mesh.positions.push_back({r * std::cos(phi), y, r * std::sin(phi)});
    }
  }
  ring_ids[rings] = rim;
  auto pos = [&](uint32_t i) { return mesh.positions[i]; };
  for (int j = 0; j < segments; ++j) {
    uint32_t a = ring_ids[1][j], b = ring_ids[1][(j + 1) % segments];
    if (up)
      mesh.add_triangle({center, b, a}, {disk_uv(pos(center)), disk_uv(pos(b)), disk_uv(pos(a))},
                        group);
    else
      mesh.add_triangle({center, a, b}, {disk_uv(pos(center)), disk_uv(pos(a)), disk_uv(pos(b))},
                        group);
  }
  for (int k = 1; k < rings; ++k)
    for (int j = 0; j < segments; ++j) {
      uint32_t a = ring_ids[k][j], b = ring_ids[k + 1][j];
      uint32_t c = ring_ids[k + 1][(j + 1) % segments], d = ring_ids[k][(j + 1) % segments];
      TriUv t0, t1;
      Tri f0, f1;
      if (up) {
        f0 = {a, d, c};
        f1 = {a, c, b};
      } else {
        f0 = {a, b, c};
        f1 = {a, c, d};
      }
      t0 = {disk_uv(pos(f0[0])), disk_uv(pos(f0[1])), disk_uv(pos(f0[2]))};
      t1 = {disk_uv(pos(f1[0])), disk_uv(pos(f1[1])), disk_uv(pos(f1[2]))};
      mesh.add_triangle(f0, t0, group);
      mesh.add_triangle(f1, t1, group);
    }
}

void check_round(int segments, int bands, int cap_rings) {
  if (segments < 3) throw Error(Errc::invalid_parameter, "segments must be >= 3");
  if (bands < 1 || cap_rings < 1)
    throw Error(Errc::invalid_parameter, "bands and cap rings must be >= 1");
}

}  // namespace

TriMesh gen_cylinder(int segments, int bands, int cap_rings) {
  check_round(segments, bands, cap_rings);
  TriMesh mesh;
  // side rings b = 0..bands from y = -0.5 to +0.5
  std::vector<std::vector<uint32_t>> ring(bands + 1);
  for (int b = 0; b <= bands; ++b) {
    double y = -0.5 + double(b) / bands;
    for (int j = 0; j < segments; ++j) {
      double phi = 2 * pi * j / segments;
      ring[b].push_back(uint32_t(mesh.positions.size()));
      mesh.positions.push_back({std::cos(phi), y, std::sin(phi)});
    }
  }
  for (int b = 0; b < bands; ++b)
    for (int j = 0; j < segments; ++j) {
      uint32_t a = ring[b][j], bb = ring[b + 1][j];
      uint32_t c = ring[b + 1][(j + 1) % segments], d = ring[b][(j + 1) % segments];
      double u0 = double(j) / segments, u1 = double(j + 1) / segments;
      double v0 = double(b) / bands, v1 = double(b + 1) / bands;
      mesh.add_triangle({a, bb, c}, {Vec2{u0, v0}, Vec2{u0, v1}, Vec2{u1, v1}}, 0);
      mesh.add_triangle({a, c, d}, {Vec2{u0, v0}, Vec2{u1, v1}, Vec2{u1, v0}}, 0);
    }
  add_cap(mesh, 0.5, segments, cap_rings, ring[bands], true, 1);
  add_cap(mesh, -0.5, segments, cap_rings, ring[0], false, 2);
  compute_normals(mesh);
  return mesh;
}

TriMesh gen_cone(int segments, int bands, int cap_rings) {
  check_round(segments, bands, cap_rings);
  TriMesh mesh;
  std::vector<std::vector<uint32_t>> ring(bands);
  for (int b = 0; b < bands; ++b) {
    double t = double(b) / bands;
    double y = -0.5 + t, r = 1.0 - t;
    for (int j = 0; j < segments; ++j) {
      double phi = 2 * pi * j / segments;
      ring[b].push_back(uint32_t(mesh.positions.size()));
      mesh.positions.push_back({r * std::cos(phi), y, r * std::sin(phi)});
    }
  }
  auto apex = uint32_t(mesh.positions.size());
  mesh.positions.push_back({0, 0.5, 0});
  for (int b = 0; b < bands - 1; ++b)
    for (int j = 0; j < segments; ++j) {
      uint32_t a = ring[b][j], bb = ring[b + 1][j];
      uint32_t c = ring[b + 1][(j + 1) % segments], d = ring[b][(j + 1) % segments];
      double u0 = double(j) / segments, u1 = double(j + 1) / segments;
      double v0 = double(b) / bands, v1 = double(b + 1) / bands;
      mesh.add_triangle({a, bb, c}, {Vec2{u0, v0}, Vec2{u0, v1}, Vec2{u1, v1}}, 0);
      mesh.add_triangle({a, c, d}, {Vec2{u0, v0}, Vec2{u1, v1}, Vec2{u1, v0}}, 0);
    }
  for (int j = 0; j < segments; ++j) {
    uint32_t a = ring[bands - 1][j], d = ring[bands - 1][(j + 1) % segments];
    double u0 = double(j) / segments, u1 = double(j + 1) / segments;
    double v0 = double(bands - 1) / bands;
    mesh.add_triangle({a, apex, d}, {Vec2{u0, v0}, Vec2{(u0 + u1) * 0.5, 1.0}, Vec2{u1, v0}}, 0);
  }
  add_cap(mesh, -0.5, segments, cap_rings, ring[0], false, 1);
  compute_normals(mesh);
  return mesh;
}

TriMesh gen_torus(int major_segments, int minor_segments, double major_radius,
                  double minor_radius) {
  if (major_segments < 3 || minor_segments < 3)
    throw Error(Errc::invalid_parameter, "torus segments must be >= 3");
  if (!(minor_radius > 0) || !(minor_radius < major_radius))
    throw Error(Errc::invalid_parameter, "torus needs 0 < minor_r < major_r");
  TriMesh mesh;
  const int M = major_segments, m = minor_segments;
  for (int i = 0; i < M; ++i) {
    double phi = 2 * pi * i / M;
    for (int j = 0; j < m; ++j) {
      double psi = 2 * pi * j / m;
      double rho = major_radius + minor_radius * std::cos(psi);
      mesh.positions.push_back(
          {rho * std::cos(phi), minor_radius * std::sin(psi), rho * std::sin(phi)});
    }
  }
  auto id = [&](int i, int j) { return uint32_t((i % M) * m + (j % m)); };
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < m; ++j) {
      uint32_t a = id(i, j), b = id(i, j + 1), c = id(i + 1, j + 1), d = id(i + 1, j);
      double u0 = double(i) / M, u1 = double(i + 1) / M;
      double v0 = double(j) / m, v1 = double(j + 1) / m;
      mesh.add_triangle({a, b, c}, {Vec2{u0, v0}, Vec2{u0, v1}, Vec2{u1, v1}}, 0);
      mesh.add_triangle({a, c, d}, {Vec2{u0, v0}, Vec2{u1, v1}, Vec2{u1, v0}}, 0);
    }
  compute_normals(mesh);
  return mesh;
}

Tessellation wire_tessellation() {
  Tessellation t;
  t.cube = 2;
  t.sphere_rings = 6;
  t.sphere_segments = 12;
  t.round_segments = 12;
  t.round_bands = 2;
  t.cap_rings = 1;
  t.torus_major = 12;
  t.torus_minor = 6;
  return t;
}

TriMesh make_primitive(PrimitiveKind kind, const Tessellation& tess) {
  switch (kind) {
    case PrimitiveKind::cube: return gen_cube(tess.cube);
    case PrimitiveKind::sphere: return gen_sphere(tess.sphere_rings, tess.sphere_segments);
    case PrimitiveKind::cylinder:
      return gen_cylinder(tess.round_segments, tess.round_bands, tess.cap_rings);
    case PrimitiveKind::cone:
      return gen_cone(tess.round_segments, tess.round_bands, tess.cap_rings);
    case PrimitiveKind::torus:
      return gen_torus(tess.torus_major, tess.torus_minor, tess.torus_major_radius,
                       tess.torus_minor_radius);
  }
  throw Error(Errc::invalid_parameter, "unknown primitive kind");
}

}  // namespace pf
