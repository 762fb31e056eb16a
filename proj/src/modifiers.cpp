#include "primforge/modifiers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "primforge/error.hpp"

namespace pf {

namespace {

uint64_t edge_key(uint32_t a, uint32_t b) {
  if (a > b) std::swap(a, b);
  return (uint64_t(a) << 32) | b;
}

}  // namespace

TriMesh solidify(const TriMesh& mesh, double thickness) {
  if (!(thickness > 0)) throw Error(Errc::invalid_parameter, "solidify thickness must be positive");
  if (thickness < weld_tolerance)
    throw Error(Errc::invalid_parameter, "solidify thickness is below the weld tolerance");
  TriMesh src = mesh;
  compute_normals(src);
  const auto n = uint32_t(src.positions.size());

  TriMesh out;
  out.positions = src.positions;
  out.positions.reserve(2 * size_t(n));
  for (uint32_t i = 0; i < n; ++i) out.positions.push_back(src.positions[i] - src.normals[i] * thickness);

  std::unordered_map<uint64_t, int> degree;
  degree.reserve(src.triangles.size() * 3);
  for (const auto& t : src.triangles)
    for (int k = 0; k < 3; ++k) ++degree[edge_key(t[k], t[(k + 1) % 3])];

  for (size_t i = 0; i < src.triangles.size(); ++i) {
    const auto& t = src.triangles[i];
    const auto& uv = src.uvs[i];
    out.add_triangle(t, uv, src.groups[i]);
    out.add_triangle({t[0] + n, t[2] + n, t[1] + n}, {uv[0], uv[2], uv[1]}, src.groups[i]);
  }
  for (size_t i = 0; i < src.triangles.size(); ++i) {
    const auto& t = src.triangles[i];
    const auto& uv = src.uvs[i];
    for (int k = 0; k < 3; ++k) {
      uint32_t a = t[k], b = t[(k + 1) % 3];
      if (degree[edge_key(a, b)] != 1) continue;
      Vec2 ua = uv[k], ub = uv[(k + 1) % 3];
      // rim quad (b, a, a', b') faces away from the surface interior
      out.add_triangle({b, a, a + n}, {ub, ua, ua}, src.groups[i]);
      out.add_triangle({b, a + n, b + n}, {ub, ua, ub}, src.groups[i]);
    }
  }
  compute_normals(out);
  return out;
}

TriMesh subdivide_midpoint(const TriMesh& mesh, int levels) {
  if (levels < 0) throw Error(Errc::invalid_parameter, "subdivision level must be >= 0");
  TriMesh cur = mesh;
  for (int level = 0; level < levels; ++level) {
    TriMesh next;
    next.positions = cur.positions;
    std::unordered_map<uint64_t, uint32_t> mid;
    mid.reserve(cur.triangles.size() * 2);
    auto midpoint = [&](uint32_t a, uint32_t b) {
      auto [it, inserted] = mid.try_emplace(edge_key(a, b), uint32_t(next.positions.size()));
      if (inserted) next.positions.push_back((cur.positions[a] + cur.positions[b]) * 0.5);
      return it->second;
    };
    for (size_t i = 0; i < cur.triangles.size(); ++i) {
      const auto& t = cur.triangles[i];
      const auto& uv = cur.uvs[i];
      uint32_t m01 = midpoint(t[0], t[1]), m12 = midpoint(t[1], t[2]), m20 = midpoint(t[2], t[0]);
      Vec2 u01 = lerp(uv[0], uv[1], 0.5), u12 = lerp(uv[1], uv[2], 0.5), u20 = lerp(uv[2], uv[0], 0.5);
      int32_t g = cur.groups[i];
      next.add_triangle({t[0], m01, m20}, {uv[0], u01, u20}, g);
      next.add_triangle({m01, t[1], m12}, {u01, uv[1], u12}, g);
      next.add_triangle({m20, m12, t[2]}, {u20, u12, uv[2]}, g);
      next.add_triangle({m01, m12, m20}, {u01, u12, u20}, g);
    }
    cur = std::move(next);
  }
  compute_normals(cur);
  return cur;
}

TriMesh wireframe(const TriMesh& mesh, double thickness, int subdiv_level) {
  if (!(thickness > 0)) throw Error(Errc::invalid_parameter, "wire thickness must be positive");
  if (subdiv_level < 0) throw Error(Errc::invalid_parameter, "subdivision level must be >= 0");
  TriMesh src = subdivide_midpoint(mesh, subdiv_level);

  struct Edge {
    uint32_t a, b;
    Vec2 ua, ub;
    int32_t group;
  };
  std::vector<Edge> edges;
  std::unordered_map<uint64_t, size_t> seen;
  seen.reserve(src.triangles.size() * 2);
  for (size_t i = 0; i < src.triangles.size(); ++i) {
    const auto& t = src.triangles[i];
    for (int k = 0; k < 3; ++k) {
      uint32_t a = t[k], b = t[(k + 1) % 3];
      if (seen.try_emplace(edge_key(a, b), edges.size()).second)
        edges.push_back({a, b, src.uvs[i][k], src.uvs[i][(k + 1) % 3], src.groups[i]});
    }
  }

  TriMesh out;
  out.positions.reserve(edges.size() * 8);
  out.triangles.reserve(edges.size() * 12);
  double h = 0.5 * thickness;
  for (const auto& e : edges) {
    Vec3 pa = src.positions[e.a], pb = src.positions[e.b];
    Vec3 axis = normalize(pb - pa);
    if (length(pb - pa) == 0) continue;
    // frame (u, v, axis) right-handed
    Vec3 helper = std::abs(axis.x) <= std::abs(axis.y) && std::abs(axis.x) <= std::abs(axis.z)
                      ? Vec3{1, 0, 0}
                      : (std::abs(axis.y) <= std::abs(axis.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    Vec3 u = normalize(cross(axis, helper));
    Vec3 v = cross(axis, u);
    const Vec3 ring[4] = {(-u - v) * h, (u - v) * h, (u + v) * h, (-u + v) * h};
    auto base = uint32_t(out.positions.size());
    for (int k = 0; k < 4; ++k) out.positions.push_back(pa + ring[k]);
    for (int k = 0; k < 4; ++k) out.positions.push_back(pb + ring[k]);
    auto A = [&](int k) { return base + uint32_t(k % 4); };
    auto B = [&](int k) { return base + 4 + uint32_t(k % 4); };
    const Vec2 ua = e.ua, ub = e.ub;
    out.add_triangle({B(0), B(1), B(2)}, {ub, ub, ub}, e.group);
    out.add_triangle({B(0), B(2), B(3)}, {ub, ub, ub}, e.group);
    out.add_triangle({A(0), A(2), A(1)}, {ua, ua, ua}, e.group);
    out.add_triangle({A(0), A(3), A(2)}, {ua, ua, ua}, e.group);
    for (int k = 0; k < 4; ++k) {
      out.add_triangle({A(k), A(k + 1), B(k + 1)}, {ua, ua, ub}, e.group);
      out.add_triangle({A(k), B(k + 1), B(k)}, {ua, ub, ub}, e.group);
    }
  }
  compute_normals(out);
  return out;
}

}  // namespace pf
