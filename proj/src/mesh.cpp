#include "primforge/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "primforge/error.hpp"

namespace pf {

namespace {

uint64_t edge_key(uint32_t a, uint32_t b) {
  if (a > b) std::swap(a, b);
  return (uint64_t(a) << 32) | b;
}

std::vector<uint64_t> sorted_edge_keys(const TriMesh& mesh) {
  std::vector<uint64_t> keys;
  keys.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles) {
    keys.push_back(edge_key(t[0], t[1]));
    keys.push_back(edge_key(t[1], t[2]));
    keys.push_back(edge_key(t[2], t[0]));
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

int32_t TriMesh::group_count() const {
  int32_t n = 0;
  for (auto g : groups) n = std::max(n, g + 1);
  return n;
}

double triangle_area(Vec3 a, Vec3 b, Vec3 c) {
  return 0.5 * length(cross(b - a, c - a));
}

void compute_normals(TriMesh& mesh) {
  mesh.normals.assign(mesh.positions.size(), Vec3{});
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.positions[t[0]];
    const Vec3& b = mesh.positions[t[1]];
    const Vec3& c = mesh.positions[t[2]];
    // cross product length is twice the area, so this is area weighting
    Vec3 n = cross(b - a, c - a);
    for (auto i : t) mesh.normals[i] += n;
  }
  for (auto& n : mesh.normals) n = normalize(n);
}

int64_t euler_characteristic(const TriMesh& mesh) {
  auto keys = sorted_edge_keys(mesh);
  auto edges = std::unique(keys.begin(), keys.end()) - keys.begin();
  return int64_t(mesh.positions.size()) - int64_t(edges) +
         int64_t(mesh.triangles.size());
}

double signed_volume(const TriMesh& mesh) {
  // relative to the first vertex so translated copies sum identically
  if (mesh.triangles.empty()) return 0;
  Vec3 o = mesh.positions[mesh.triangles[0][0]];
  double vol = 0;
  for (const auto& t : mesh.triangles) {
    Vec3 a = mesh.positions[t[0]] - o;
    Vec3 b = mesh.positions[t[1]] - o;
    Vec3 c = mesh.positions[t[2]] - o;
    vol += dot(a, cross(b, c));
  }
  return vol / 6.0;
}

double surface_area(const TriMesh& mesh) {
  double area = 0;
  for (const auto& t : mesh.triangles)
    area += triangle_area(mesh.positions[t[0]], mesh.positions[t[1]],
                          mesh.positions[t[2]]);
  return area;
}

Aabb bounds(std::span<const Vec3> points) {
  Aabb box;
  for (const auto& p : points) box.expand(p);
  return box;
}

Aabb bounds(const TriMesh& mesh) { return bounds(mesh.positions); }

TriMesh apply_transform(const TriMesh& mesh, const Transform& t) {
  if (!t.valid()) throw Error(Errc::invalid_parameter, "transform is not rigid+scale");
  TriMesh out = mesh;
  for (auto& p : out.positions) p = t.apply(p);
  compute_normals(out);
  return out;
}

TriMesh merge(std::span<const TriMesh> meshes) {
  if (meshes.empty()) throw Error(Errc::invalid_parameter, "merge of zero meshes");
  TriMesh out;
  size_t nv = 0, nt = 0;
  for (const auto& m : meshes) {
    nv += m.positions.size();
    nt += m.triangles.size();
  }
  out.positions.reserve(nv);
  out.triangles.reserve(nt);
  out.uvs.reserve(nt);
  out.groups.reserve(nt);
  int32_t group_offset = 0;
  for (const auto& m : meshes) {
    auto base = uint32_t(out.positions.size());
    out.positions.insert(out.positions.end(), m.positions.begin(), m.positions.end());
    for (const auto& t : m.triangles)
      out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    out.uvs.insert(out.uvs.end(), m.uvs.begin(), m.uvs.end());
    for (auto g : m.groups) out.groups.push_back(g + group_offset);
    group_offset += m.group_count();
  }
  compute_normals(out);
  return out;
}

TriMesh normalize_to_sphere(const TriMesh& mesh, double radius) {
  if (!(radius > 0)) throw Error(Errc::invalid_parameter, "radius must be positive");
  TriMesh out = mesh;
  if (out.positions.empty()) return out;
  Vec3 c = bounds(out).center();
  double r = 0;
  for (const auto& p : out.positions) r = std::max(r, length(p - c));
  double s = r > 0 ? radius / r : 1.0;
  for (auto& p : out.positions) p = (p - c) * s;
  compute_normals(out);
  return out;
}

EdgeStats edge_stats(const TriMesh& mesh) {
  auto keys = sorted_edge_keys(mesh);
  EdgeStats st;
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    size_t deg = j - i;
    ++st.edges;
    if (deg == 1) ++st.boundary;
    else if (deg == 2) ++st.manifold;
    else ++st.non_manifold;
    i = j;
  }
  return st;
}

bool is_closed_manifold(const TriMesh& mesh) {
  if (mesh.triangles.empty()) return true;
  auto st = edge_stats(mesh);
  return st.boundary == 0 && st.non_manifold == 0;
}

bool is_watertight(const TriMesh& mesh) {
  std::unordered_map<uint64_t, int> degree;
  degree.reserve(mesh.triangles.size() * 2);
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      uint32_t a = t[k], b = t[(k + 1) % 3];
      if (a == b) return false;
      ++degree[(uint64_t(std::min(a, b)) << 32) | std::max(a, b)];
    }
  for (const auto& [edge, d] : degree)
    if (d % 2) return false;
  return true;
}

std::vector<uint32_t> triangle_components(const TriMesh& mesh, uint32_t& count) {
  std::vector<uint32_t> parent(mesh.positions.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& t : mesh.triangles) {
    for (int k = 1; k < 3; ++k) {
      uint32_t a = find(t[0]), b = find(t[k]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<uint32_t> label(mesh.positions.size(), UINT32_MAX);
  std::vector<uint32_t> out(mesh.triangles.size());
  count = 0;
  for (size_t i = 0; i < mesh.triangles.size(); ++i) {
    uint32_t root = find(mesh.triangles[i][0]);
    if (label[root] == UINT32_MAX) label[root] = count++;
    out[i] = label[root];
  }
  return out;
}

TriMesh extract(const TriMesh& mesh, std::span<const uint32_t> triangle_ids) {
  TriMesh out;
  std::vector<uint32_t> remap(mesh.positions.size(), UINT32_MAX);
  for (auto ti : triangle_ids) {
    Tri t = mesh.triangles[ti];
    for (auto& i : t) {
      if (remap[i] == UINT32_MAX) {
        remap[i] = uint32_t(out.positions.size());
        out.positions.push_back(mesh.positions[i]);
      }
      i = remap[i];
    }
    out.add_triangle(t, mesh.uvs[ti], mesh.groups[ti]);
  }
  compute_normals(out);
  return out;
}

TriMesh weld(const TriMesh& mesh, double tolerance) {
  if (!(tolerance > 0)) throw Error(Errc::invalid_parameter, "weld tolerance must be positive");
  struct CellHash {
    size_t operator()(const std::array<int64_t, 3>& c) const {
      uint64_t h = uint64_t(c[0]) * 0x9E3779B97F4A7C15ull;
      h ^= uint64_t(c[1]) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
      h ^= uint64_t(c[2]) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
      return size_t(h);
    }
  };
  std::unordered_map<std::array<int64_t, 3>, std::vector<uint32_t>, CellHash> grid;
  grid.reserve(mesh.positions.size());
  auto cell_of = [&](Vec3 p) {
    return std::array<int64_t, 3>{int64_t(std::floor(p.x / tolerance)),
                                  int64_t(std::floor(p.y / tolerance)),
                                  int64_t(std::floor(p.z / tolerance))};
  };
  TriMesh out;
  std::vector<uint32_t> remap(mesh.positions.size());
  double tol2 = tolerance * tolerance;
  for (size_t i = 0; i < mesh.positions.size(); ++i) {
    Vec3 p = mesh.positions[i];
    auto c = cell_of(p);
    uint32_t found = UINT32_MAX;
    for (int dx = -1; dx <= 1 && found == UINT32_MAX; ++dx)
      for (int dy = -1; dy <= 1 && found == UINT32_MAX; ++dy)
        for (int dz = -1; dz <= 1 && found == UINT32_MAX; ++dz) {
          auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == grid.end()) continue;
          for (auto j : it->second) {
            Vec3 d = out.positions[j] - p;
            if (dot(d, d) <= tol2) {
              found = j;
              break;
            }
          }
        }
    if (found == UINT32_MAX) {
      found = uint32_t(out.positions.size());
      out.positions.push_back(p);
      grid[c].push_back(found);
    }
    remap[i] = found;
  }
  for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    Tri t = mesh.triangles[ti];
    for (auto& i : t) i = remap[i];
    if (t[0] == t[1] || t[1] == t[2] || t[2] == t[0]) continue;
    out.add_triangle(t, mesh.uvs[ti], mesh.groups[ti]);
  }
  compute_normals(out);
  return out;
}

}  // namespace pf
