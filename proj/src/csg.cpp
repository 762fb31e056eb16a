#include "primforge/csg.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "primforge/error.hpp"
#include "primforge/rng.hpp"

namespace pf {

namespace {

struct PolyVertex {
  Vec3 p;
  Vec2 uv;
};

struct Polygon {
  std::vector<PolyVertex> verts;
  Vec3 normal;
  double w = 0;
  int32_t group = 0;
};

struct Plane {
  Vec3 normal;
  double w = 0;
};

enum Side : int { coplanar = 0, front = 1, back = 2, spanning = 3 };

// How coplanar polygons are routed relative to a node plane. Front is the
// outside of the solid the tree encodes; `coplanar` drops the polygon.
struct CoplanarPolicy {
  Side same = front;
  Side opposite = front;
};

void split_polygon(Polygon&& poly, const Plane& plane, double eps, CoplanarPolicy policy,
                   std::vector<Polygon>& fronts, std::vector<Polygon>& backs) {
  thread_local std::vector<int> types;
  types.resize(poly.verts.size());
  int poly_type = coplanar;
  for (size_t i = 0; i < poly.verts.size(); ++i) {
    double t = dot(plane.normal, poly.verts[i].p) - plane.w;
    int type = t < -eps ? back : (t > eps ? front : coplanar);
    poly_type |= type;
    types[i] = type;
  }
  switch (poly_type) {
    case coplanar: {
      Side side = dot(plane.normal, poly.normal) > 0 ? policy.same : policy.opposite;
      if (side != coplanar) (side == front ? fronts : backs).push_back(std::move(poly));
      break;
    }
    case front: fronts.push_back(std::move(poly)); break;
    case back: backs.push_back(std::move(poly)); break;
    default: {
      Polygon f, b;
      f.normal = b.normal = poly.normal;
      f.w = b.w = poly.w;
      f.group = b.group = poly.group;
      size_t n = poly.verts.size();
      for (size_t i = 0; i < n; ++i) {
        size_t j = (i + 1) % n;
        int ti = types[i], tj = types[j];
        const PolyVertex& vi = poly.verts[i];
        const PolyVertex& vj = poly.verts[j];
        if (ti != back) f.verts.push_back(vi);
        if (ti != front) b.verts.push_back(vi);
        if ((ti | tj) == spanning) {
          double t = (plane.w - dot(plane.normal, vi.p)) / dot(plane.normal, vj.p - vi.p);
          PolyVertex v{lerp(vi.p, vj.p, t), lerp(vi.uv, vj.uv, t)};
          f.verts.push_back(v);
          b.verts.push_back(v);
        }
      }
      if (f.verts.size() >= 3) fronts.push_back(std::move(f));
      if (b.verts.size() >= 3) backs.push_back(std::move(b));
    }
  }
}

// Plane-only BSP tree; the solid is the union of back leaves.
class BspTree {
 public:
  BspTree(std::vector<Polygon> polys, double eps) : eps_(eps) {
    if (polys.empty()) return;
    struct Work {
      int node;
      std::vector<Polygon> polys;
    };
    std::vector<Work> stack;
    nodes_.push_back({});
    stack.push_back({0, std::move(polys)});
    while (!stack.empty()) {
      Work work = std::move(stack.back());
      stack.pop_back();
      Plane plane{work.polys.front().normal, work.polys.front().w};
      nodes_[work.node].plane = plane;
      std::vector<Polygon> fronts, backs;
      // polygons lying on the node plane are consumed by it
      for (auto& p : work.polys)
        split_polygon(std::move(p), plane, eps_, {coplanar, coplanar}, fronts, backs);
      if (!fronts.empty()) {
        int child = int(nodes_.size());
        nodes_.push_back({});
        nodes_[work.node].front = child;
        stack.push_back({child, std::move(fronts)});
      }
      if (!backs.empty()) {
        int child = int(nodes_.size());
        nodes_.push_back({});
        nodes_[work.node].back = child;
        stack.push_back({child, std::move(backs)});
      }
    }
  }

  // Keeps the parts of `polys` outside (keep_inside = false) or inside the
  // solid.
  std::vector<Polygon> clip(std::vector<Polygon> polys, bool keep_inside,
                            CoplanarPolicy policy) const {
    std::vector<Polygon> out;
    if (nodes_.empty()) {
      if (!keep_inside) out = std::move(polys);
      return out;
    }
    struct Work {
      int node;
      std::vector<Polygon> polys;
    };
    std::vector<Work> stack;
    stack.push_back({0, std::move(polys)});
    while (!stack.empty()) {
      Work work = std::move(stack.back());
      stack.pop_back();
      const Node& node = nodes_[work.node];
      std::vector<Polygon> fronts, backs;
      for (auto& p : work.polys)
        split_polygon(std::move(p), node.plane, eps_, policy, fronts, backs);
      if (!backs.empty()) {
        if (node.back >= 0) stack.push_back({node.back, std::move(backs)});
        else if (keep_inside) std::move(backs.begin(), backs.end(), std::back_inserter(out));
      }
      if (!fronts.empty()) {
        if (node.front >= 0) stack.push_back({node.front, std::move(fronts)});
        else if (!keep_inside) std::move(fronts.begin(), fronts.end(), std::back_inserter(out));
      }
    }
    return out;
  }

  // Every leaf fragment of `polys`, inside or outside.
  std::vector<Polygon> split(std::vector<Polygon> polys, CoplanarPolicy policy) const {
    if (nodes_.empty()) return polys;
    std::vector<Polygon> out;
    std::vector<std::pair<int, std::vector<Polygon>>> stack;
    stack.emplace_back(0, std::move(polys));
    while (!stack.empty()) {
      auto [index, work] = std::move(stack.back());
      stack.pop_back();
      const Node& node = nodes_[index];
      std::vector<Polygon> fronts, backs;
      for (auto& p : work) split_polygon(std::move(p), node.plane, eps_, policy, fronts, backs);
      for (auto [child, list] : {std::pair{node.back, &backs}, std::pair{node.front, &fronts}}) {
        if (list->empty()) continue;
        if (child >= 0) stack.emplace_back(child, std::move(*list));
        else std::move(list->begin(), list->end(), std::back_inserter(out));
      }
    }
    return out;
  }

 private:
  struct Node {
    Plane plane;
    int front = -1;
    int back = -1;
  };

  double eps_;
  std::vector<Node> nodes_;
};

// Crossing parity of a +z ray against a closed mesh, bucketed on an xy grid.
// Odd parity means inside, also for meshes that pass through themselves.
class ParityGrid {
 public:
  explicit ParityGrid(const TriMesh& mesh) : mesh_(mesh) {
    box_ = bounds(mesh);
    n_ = std::clamp(int(std::sqrt(double(mesh.triangles.size()))), 1, 128);
    cells_.resize(size_t(n_) * n_);
    for (uint32_t t = 0; t < mesh.triangles.size(); ++t) {
      Aabb b;
      for (auto v : mesh.triangles[t]) b.expand(mesh.positions[v]);
      auto [i0, j0] = cell(b.min);
      auto [i1, j1] = cell(b.max);
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) cells_[size_t(j) * n_ + i].push_back(t);
    }
  }

  bool inside(Vec3 p) const {
    if (p.x < box_.min.x || p.x > box_.max.x || p.y < box_.min.y || p.y > box_.max.y ||
        p.z > box_.max.z)
      return false;
    auto [i, j] = cell(p);
    bool odd = false;
    for (uint32_t t : cells_[size_t(j) * n_ + i]) {
      const auto& tri = mesh_.triangles[t];
      Vec3 a = mesh_.positions[tri[0]], b = mesh_.positions[tri[1]], c = mesh_.positions[tri[2]];
      double e0 = orient(b, c, p), e1 = orient(c, a, p), e2 = orient(a, b, p);
      bool pos = e0 >= 0 && e1 >= 0 && e2 >= 0 && (e0 > 0 || e1 > 0 || e2 > 0);
      bool neg = e0 <= 0 && e1 <= 0 && e2 <= 0 && (e0 < 0 || e1 < 0 || e2 < 0);
      if (!pos && !neg) continue;
      double sum = e0 + e1 + e2;
      double z = (e0 * a.z + e1 * b.z + e2 * c.z) / sum;
      if (z > p.z) odd = !odd;
    }
    return odd;
  }

 private:
  // 2D orientation of p against edge (a, b). Both triangles sharing an edge
  // evaluate it with the same operand order, so their signs are exact
  // opposites.
  static double orient(Vec3 a, Vec3 b, Vec3 p) {
    bool swap = b.x < a.x || (b.x == a.x && b.y < a.y);
    if (swap) std::swap(a, b);
    double d = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    return swap ? -d : d;
  }

  std::pair<int, int> cell(Vec3 p) const {
    auto index = [&](double v, double lo, double hi) {
      double t = hi > lo ? (v - lo) / (hi - lo) : 0;
      return std::clamp(int(t * n_), 0, n_ - 1);
    };
    return {index(p.x, box_.min.x, box_.max.x), index(p.y, box_.min.y, box_.max.y)};
  }

  const TriMesh& mesh_;
  Aabb box_;
  int n_ = 1;
  std::vector<std::vector<uint32_t>> cells_;
};

bool make_polygon(const TriMesh& mesh, size_t ti, Polygon& out) {
  const auto& t = mesh.triangles[ti];
  Vec3 a = mesh.positions[t[0]], b = mesh.positions[t[1]], c = mesh.positions[t[2]];
  Vec3 n = cross(b - a, c - a);
  double len = length(n);
  if (!(len > 0)) return false;
  out.normal = n / len;
  out.w = dot(out.normal, a);
  out.group = mesh.groups[ti];
  out.verts = {{a, mesh.uvs[ti][0]}, {b, mesh.uvs[ti][1]}, {c, mesh.uvs[ti][2]}};
  return true;
}

Aabb triangle_box(const TriMesh& mesh, size_t ti) {
  Aabb box;
  for (auto v : mesh.triangles[ti]) box.expand(mesh.positions[v]);
  return box;
}

// Appends without re-offsetting groups.
void append(TriMesh& dst, const TriMesh& src) {
  auto base = uint32_t(dst.positions.size());
  dst.positions.insert(dst.positions.end(), src.positions.begin(), src.positions.end());
  for (size_t i = 0; i < src.triangles.size(); ++i) {
    const auto& t = src.triangles[i];
    dst.add_triangle({t[0] + base, t[1] + base, t[2] + base}, src.uvs[i], src.groups[i]);
  }
}

void append_polygon(TriMesh& soup, const Polygon& poly, bool reverse) {
  auto base = uint32_t(soup.positions.size());
  size_t n = poly.verts.size();
  std::vector<Vec2> uv(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& v = poly.verts[reverse ? n - 1 - i : i];
    soup.positions.push_back(v.p);
    uv[i] = v.uv;
  }
  for (size_t i = 1; i + 1 < n; ++i)
    soup.add_triangle({base, base + uint32_t(i), base + uint32_t(i + 1)}, {uv[0], uv[i], uv[i + 1]},
                      poly.group);
}

// Nearest of a fixed point set, searched ring by ring on a uniform grid. Ties
// go to the lowest index.
class NearestPoint {
 public:
  explicit NearestPoint(const std::vector<Vec3>& points) : points_(points) {
    box_ = bounds(points);
    n_ = std::clamp(int(std::cbrt(double(points.size()) / 2)), 1, 64);
    Vec3 size = box_.size();
    cell_ = std::max({size.x, size.y, size.z, 1e-12}) / n_;
    for (int a = 0; a < 3; ++a) dims_[a] = std::clamp(int(size[a] / cell_) + 1, 1, n_ + 1);
    cells_.resize(size_t(dims_[0]) * dims_[1] * dims_[2]);
    for (uint32_t i = 0; i < points.size(); ++i) {
      auto c = coord(points[i]);
      cells_[index(c[0], c[1], c[2])].push_back(i);
    }
  }

  size_t find(Vec3 q) const {
    auto c = coord(q);
    size_t best = 0;
    double best_d2 = INFINITY;
    int max_ring = std::max({dims_[0], dims_[1], dims_[2]});
    for (int r = 0; r <= max_ring; ++r) {
      // every point outside rings < r is at least (r - 1) cells away
      if (r > 0 && std::isfinite(best_d2)) {
        double reach = (r - 1) * cell_;
        if (reach * reach > best_d2) break;
      }
      for (int z = c[2] - r; z <= c[2] + r; ++z)
        for (int y = c[1] - r; y <= c[1] + r; ++y)
          for (int x = c[0] - r; x <= c[0] + r; ++x) {
            if (std::max({std::abs(x - c[0]), std::abs(y - c[1]), std::abs(z - c[2])}) != r)
              continue;
            if (x < 0 || y < 0 || z < 0 || x >= dims_[0] || y >= dims_[1] || z >= dims_[2])
              continue;
            for (uint32_t i : cells_[index(x, y, z)]) {
              Vec3 d = points_[i] - q;
              double d2 = dot(d, d);
              if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
                best_d2 = d2;
                best = i;
              }
            }
          }
    }
    return best;
  }

 private:
  std::array<int, 3> coord(Vec3 p) const {
    std::array<int, 3> c;
    for (int a = 0; a < 3; ++a) c[a] = std::clamp(int((p[a] - box_.min[a]) / cell_), 0, dims_[a] - 1);
    return c;
  }
  size_t index(int x, int y, int z) const { return (size_t(z) * dims_[1] + y) * dims_[0] + x; }

  const std::vector<Vec3>& points_;
  Aabb box_;
  int n_ = 1;
  double cell_ = 1;
  int dims_[3] = {1, 1, 1};
  std::vector<std::vector<uint32_t>> cells_;
};

Vec3 centroid(const Polygon& poly) {
  Vec3 c;
  for (const auto& v : poly.verts) c += v.p;
  return c / double(poly.verts.size());
}

// Difference of one closed shell and the cutter. Returns a welded,
// T-junction-free mesh; `closed` reports whether it is watertight.
TriMesh cut_shell(const TriMesh& shell, const TriMesh& cutter, const CsgOptions& opts, bool& closed) {
  Aabb shell_box = bounds(shell), cutter_box = bounds(cutter);
  Aabb overlap = shell_box;
  overlap.min = max(shell_box.min, cutter_box.min);
  overlap.max = min(shell_box.max, cutter_box.max);
  overlap = overlap.inflated(10 * opts.plane_epsilon);

  TriMesh soup;
  std::vector<Polygon> shell_near, cutter_near, cutter_all;
  std::vector<size_t> shell_near_ids;
  for (size_t i = 0; i < shell.triangles.size(); ++i) {
    Polygon p;
    if (!make_polygon(shell, i, p)) continue;
    if (triangle_box(shell, i).overlaps(overlap)) {
      shell_near.push_back(p);
      shell_near_ids.push_back(i);
    } else {
      // entirely outside the cutter box, kept as is
      append_polygon(soup, p, false);
    }
  }
  for (size_t i = 0; i < cutter.triangles.size(); ++i) {
    Polygon p;
    if (!make_polygon(cutter, i, p)) continue;
    if (triangle_box(cutter, i).overlaps(overlap)) cutter_near.push_back(p);
    cutter_all.push_back(std::move(p));
  }

  // Shell faces coplanar with a cutter face of the same orientation are cut
  // away; faces merely touching the cutter from outside survive. Cutter faces
  // on the shell boundary never survive.
  BspTree cutter_tree(std::move(cutter_all), opts.plane_epsilon);
  // A cutter face can only cross shell faces whose boxes meet the overlap box,
  // so those are the only planes needed to split the cutter.
  std::vector<Polygon> splitters = shell_near;
  auto kept = cutter_tree.clip(std::move(shell_near), false, {back, front});
  // The shell tree only splits the cutter along the shell surface; a displaced
  // shell may pass through itself, so the tree's own in/out answer is not
  // trusted. Each leaf fragment is off the shell surface and is classified by
  // ray parity instead, which flips across every sheet.
  std::vector<Polygon> interior;
  if (!cutter_near.empty()) {
    BspTree shell_tree(std::move(splitters), opts.plane_epsilon);
    ParityGrid parity(shell);
    for (auto& p : shell_tree.split(std::move(cutter_near), {coplanar, coplanar}))
      if (parity.inside(centroid(p))) interior.push_back(std::move(p));
  }

  for (const auto& p : kept) append_polygon(soup, p, false);

  // candidates for group inheritance: shell triangles near the cut, else all
  std::vector<size_t> candidates = shell_near_ids;
  if (candidates.empty())
    for (size_t i = 0; i < shell.triangles.size(); ++i) candidates.push_back(i);
  std::vector<Vec3> cand_centers(candidates.size());
  for (size_t k = 0; k < candidates.size(); ++k) {
    const auto& t = shell.triangles[candidates[k]];
    cand_centers[k] = (shell.positions[t[0]] + shell.positions[t[1]] + shell.positions[t[2]]) / 3.0;
  }
  NearestPoint nearest(cand_centers);
  for (auto& p : interior) {
    p.group = shell.groups[candidates[nearest.find(centroid(p))]];
    append_polygon(soup, p, true);
  }

  TriMesh out = weld(soup, opts.weld_tolerance);
  out = repair_t_junctions(out, opts.weld_tolerance);
  closed = is_watertight(out);
  return out;
}

}  // namespace

TriMesh repair_t_junctions(const TriMesh& mesh, double tolerance) {
  TriMesh cur = mesh;
  for (int pass = 0; pass < 4; ++pass) {
    // boundary edges: directed edges without a twin
    std::unordered_map<uint64_t, int> degree;
    degree.reserve(cur.triangles.size() * 3);
    auto key = [](uint32_t a, uint32_t b) {
      if (a > b) std::swap(a, b);
      return (uint64_t(a) << 32) | b;
    };
    for (const auto& t : cur.triangles)
      for (int k = 0; k < 3; ++k) ++degree[key(t[k], t[(k + 1) % 3])];
    std::vector<uint32_t> boundary_verts;
    std::vector<char> is_bv(cur.positions.size(), 0);
    for (const auto& t : cur.triangles)
      for (int k = 0; k < 3; ++k)
        if (degree[key(t[k], t[(k + 1) % 3])] == 1)
          for (auto v : {t[k], t[(k + 1) % 3]})
            if (!is_bv[v]) {
              is_bv[v] = 1;
              boundary_verts.push_back(v);
            }
    if (boundary_verts.empty()) return cur;
    std::sort(boundary_verts.begin(), boundary_verts.end(), [&](uint32_t a, uint32_t b) {
      return cur.positions[a].x < cur.positions[b].x;
    });

    struct SplitPoint {
      int edge;
      double t;
      uint32_t vertex;
    };
    std::vector<std::vector<SplitPoint>> splits(cur.triangles.size());
    bool any = false;
    for (size_t ti = 0; ti < cur.triangles.size(); ++ti) {
      const auto& tri = cur.triangles[ti];
      for (int k = 0; k < 3; ++k) {
        uint32_t a = tri[k], b = tri[(k + 1) % 3];
        if (degree[key(a, b)] != 1) continue;
        Vec3 pa = cur.positions[a], pb = cur.positions[b];
        Vec3 ab = pb - pa;
        double len2 = dot(ab, ab);
        if (!(len2 > 0)) continue;
        Aabb seg;
        seg.expand(pa);
        seg.expand(pb);
        seg = seg.inflated(tolerance);
        auto first = std::lower_bound(
            boundary_verts.begin(), boundary_verts.end(), seg.min.x,
            [&](uint32_t v, double x) { return cur.positions[v].x < x; });
        for (auto it = first; it != boundary_verts.end(); ++it) {
          uint32_t v = *it;
          if (cur.positions[v].x > seg.max.x) break;
          if (v == a || v == b) continue;
          Vec3 p = cur.positions[v];
          if (p.x < seg.min.x || p.x > seg.max.x || p.y < seg.min.y || p.y > seg.max.y ||
              p.z < seg.min.z || p.z > seg.max.z)
            continue;
          double t = dot(p - pa, ab) / len2;
          if (t <= 0 || t >= 1) continue;
          Vec3 d = pa + ab * t - p;
          if (dot(d, d) > tolerance * tolerance) continue;
          splits[ti].push_back({k, t, v});
          any = true;
        }
      }
    }
    if (!any) return cur;

    TriMesh next;
    next.positions = cur.positions;
    // Recursively split a triangle at the first pending point.
    struct Corner {
      uint32_t v;
      Vec2 uv;
    };
    auto emit = [&](auto&& self, std::array<Corner, 3> c, std::vector<SplitPoint> pts,
                    int32_t group) -> void {
      if (pts.empty()) {
        next.add_triangle({c[0].v, c[1].v, c[2].v}, {c[0].uv, c[1].uv, c[2].uv}, group);
        return;
      }
      SplitPoint sp = pts.front();
      int i = sp.edge, j = (sp.edge + 1) % 3, k = (sp.edge + 2) % 3;
      Corner m{sp.vertex, lerp(c[i].uv, c[j].uv, sp.t)};
      // child A = (c_i, m, c_k), child B = (m, c_j, c_k) in the original winding
      std::array<Corner, 3> ca{}, cb{};
      ca[i] = c[i];
      ca[j] = m;
      ca[k] = c[k];
      cb[i] = m;
      cb[j] = c[j];
      cb[k] = c[k];
      std::vector<SplitPoint> pa, pb;
      for (size_t q = 1; q < pts.size(); ++q) {
        const auto& p = pts[q];
        if (p.edge == i) {
          if (p.t < sp.t) pa.push_back({i, p.t / sp.t, p.vertex});
          else if (p.t > sp.t) pb.push_back({i, (p.t - sp.t) / (1 - sp.t), p.vertex});
        } else if (p.edge == j) {
          pb.push_back(p);
        } else {
          pa.push_back(p);
        }
      }
      self(self, ca, std::move(pa), group);
      self(self, cb, std::move(pb), group);
    };
    for (size_t ti = 0; ti < cur.triangles.size(); ++ti) {
      const auto& t = cur.triangles[ti];
      std::array<Corner, 3> c{Corner{t[0], cur.uvs[ti][0]}, Corner{t[1], cur.uvs[ti][1]},
                              Corner{t[2], cur.uvs[ti][2]}};
      auto pts = splits[ti];
      std::sort(pts.begin(), pts.end(), [](const SplitPoint& x, const SplitPoint& y) {
        return x.edge != y.edge ? x.edge < y.edge : x.t < y.t;
      });
      emit(emit, c, std::move(pts), cur.groups[ti]);
    }
    compute_normals(next);
    cur = std::move(next);
  }
  return cur;
}

TriMesh boolean_difference(const TriMesh& target, const TriMesh& cutter, const CsgOptions& opts,
                           CsgStats* stats) {
  if (!is_closed_manifold(cutter)) throw Error(Errc::invalid_input, "cutter is not closed");
  if (target.empty()) return target;
  uint32_t ncomp = 0;
  auto comp = triangle_components(target, ncomp);
  std::vector<std::vector<uint32_t>> members(ncomp);
  for (uint32_t i = 0; i < comp.size(); ++i) members[comp[i]].push_back(i);

  Aabb cutter_box = bounds(cutter).inflated(opts.plane_epsilon);
  TriMesh out;
  size_t cut = 0;
  int retries_total = 0;
  for (uint32_t c = 0; c < ncomp; ++c) {
    TriMesh shell = extract(target, members[c]);
    if (!bounds(shell).overlaps(cutter_box)) {
      append(out, shell);
      continue;
    }
    if (!is_closed_manifold(shell)) throw Error(Errc::invalid_input, "target shell is not closed");
    ++cut;
    bool closed = false;
    TriMesh result = cut_shell(shell, cutter, opts, closed);
    Rng jitter_rng(hash64(shell.positions.size(), cutter.positions.size(), c));
    int attempt = 0;
    while (!closed && attempt < opts.max_retries) {
      ++attempt;
      Vec3 offset = jitter_rng.unit_vector() * opts.jitter;
      TriMesh moved = cutter;
      for (auto& p : moved.positions) p += offset;
      result = cut_shell(shell, moved, opts, closed);
    }
    retries_total += attempt;
    if (!closed)
      throw Error(Errc::invalid_input, "boolean difference stayed open after retries");
    append(out, result);
  }
  compute_normals(out);
  if (stats) {
    stats->retries = retries_total;
    stats->components_cut = cut;
  }
  return out;
}

}  // namespace pf
