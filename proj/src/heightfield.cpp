#include "primforge/heightfield.hpp"

#include <algorithm>
#include <cmath>

#include "primforge/error.hpp"

namespace pf {

namespace {

// Adds `scale` times the derivative stencil at node i (unit spacing) into w.
// Stencils are exact for cubics: central fourth-order inside, one-sided
// four-point at the two nodes nearest each border.
void add_tangent(std::vector<double>& w, int i, int n, double scale) {
  if (i >= 2 && i <= n - 3) {
    w[i - 2] += scale * (1.0 / 12);
    w[i - 1] += scale * (-8.0 / 12);
    w[i + 1] += scale * (8.0 / 12);
    w[i + 2] += scale * (-1.0 / 12);
  } else if (i == 0) {
    w[0] += scale * (-11.0 / 6);
    w[1] += scale * (18.0 / 6);
    w[2] += scale * (-9.0 / 6);
    w[3] += scale * (2.0 / 6);
  } else if (i == 1) {
    w[0] += scale * (-2.0 / 6);
    w[1] += scale * (-3.0 / 6);
    w[2] += scale * (6.0 / 6);
    w[3] += scale * (-1.0 / 6);
  } else if (i == n - 1) {
    w[n - 1] += scale * (11.0 / 6);
    w[n - 2] += scale * (-18.0 / 6);
    w[n - 3] += scale * (9.0 / 6);
    w[n - 4] += scale * (-2.0 / 6);
  } else {  // i == n - 2
    w[n - 1] += scale * (2.0 / 6);
    w[n - 2] += scale * (3.0 / 6);
    w[n - 3] += scale * (-6.0 / 6);
    w[n - 4] += scale * (1.0 / 6);
  }
}

// Interpolation weights over the n nodes of one axis at coordinate s in [0,1].
void axis_weights(double s, int n, std::vector<double>& w) {
  w.assign(n, 0.0);
  double x = std::clamp(s, 0.0, 1.0) * (n - 1);
  int k = std::min(int(std::floor(x)), n - 2);
  double t = x - k;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1;
  double h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2;
  double h11 = t3 - t2;
  w[k] += h00;
  w[k + 1] += h01;
  add_tangent(w, k, n, h10);
  add_tangent(w, k + 1, n, h11);
}

}  // namespace

HeightField make_heightfield(Rng& rng, int rows, int cols, double face_size, double k_hf) {
  if (rows < 4 || cols < 4) throw Error(Errc::invalid_parameter, "height field needs >= 4x4 nodes");
  if (!(face_size > 0)) throw Error(Errc::invalid_parameter, "face size must be positive");
  if (!(k_hf >= 0)) throw Error(Errc::invalid_parameter, "k_hf must be non-negative");
  HeightField hf;
  hf.rows = rows;
  hf.cols = cols;
  hf.amp_max = k_hf * face_size;
  hf.grid.resize(size_t(rows) * cols);
  for (auto& g : hf.grid) g = hf.amp_max > 0 ? rng.uniform(-hf.amp_max, hf.amp_max) : 0.0;
  return hf;
}

double eval_bicubic(const HeightField& hf, double u, double v) {
  thread_local std::vector<double> wu, wv;
  axis_weights(u, hf.cols, wu);
  axis_weights(v, hf.rows, wv);
  double sum = 0;
  for (int r = 0; r < hf.rows; ++r) {
    if (wv[r] == 0) continue;
    double row = 0;
    for (int c = 0; c < hf.cols; ++c)
      if (wu[c] != 0) row += wu[c] * hf.at(r, c);
    sum += wv[r] * row;
  }
  return sum;
}

double soft_cap(double value, double amp_max) {
  if (!(amp_max > 0)) return 0.0;
  double a = std::abs(value);
  if (a <= amp_max) return value;
  double knee = 0.25 * amp_max;
  double capped = amp_max + knee * std::tanh((a - amp_max) / knee);
  return std::copysign(capped, value);
}

double displacement_at(const HeightField& hf, double u, double v) {
  return soft_cap(eval_bicubic(hf, u, v), hf.amp_max);
}

double surface_extent(const TriMesh& mesh, int32_t group) {
  Aabb box;
  for (size_t i = 0; i < mesh.triangles.size(); ++i)
    if (mesh.groups[i] == group)
      for (auto v : mesh.triangles[i]) box.expand(mesh.positions[v]);
  if (box.empty()) return 0;
  Vec3 s = box.size();
  return std::max({s.x, s.y, s.z});
}

std::vector<VertexOwner> vertex_owners(const TriMesh& mesh) {
  std::vector<VertexOwner> owners(mesh.positions.size());
  for (size_t i = 0; i < mesh.triangles.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      auto& o = owners[mesh.triangles[i][k]];
      if (o.group < 0) {
        o.group = mesh.groups[i];
        o.uv = mesh.uvs[i][k];
      }
    }
  return owners;
}

TriMesh displace_surfaces(const TriMesh& mesh, const std::map<int32_t, HeightField>& fields) {
  int32_t groups = mesh.group_count();
  for (const auto& [id, hf] : fields)
    if (id < 0 || id >= groups) throw Error(Errc::invalid_parameter, "unknown surface id");
  TriMesh out = mesh;
  if (fields.empty()) return out;
  TriMesh with_normals = mesh;
  compute_normals(with_normals);
  auto owners = vertex_owners(mesh);
  for (size_t v = 0; v < out.positions.size(); ++v) {
    auto it = fields.find(owners[v].group);
    if (it == fields.end()) continue;
    double d = displacement_at(it->second, owners[v].uv.u, owners[v].uv.v);
    if (d == 0) continue;
    out.positions[v] += with_normals.normals[v] * d;
  }
  compute_normals(out);
  return out;
}

TriMesh displace_surface(const TriMesh& mesh, int32_t surface_id, const HeightField& hf) {
  bool present = std::find(mesh.groups.begin(), mesh.groups.end(), surface_id) != mesh.groups.end();
  if (!present) throw Error(Errc::invalid_parameter, "unknown surface id");
  return displace_surfaces(mesh, {{surface_id, hf}});
}

}  // namespace pf
