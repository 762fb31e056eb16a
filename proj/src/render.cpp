#include "primforge/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "primforge/error.hpp"

namespace pf {

namespace {

constexpr uint32_t no_triangle = std::numeric_limits<uint32_t>::max();

// Round to nearest even without a libm call; exact for |x| < 2^51.
inline double round_even(double x) {
  constexpr double magic = 0x1.8p52;
  return x >= 0 ? (x + magic) - magic : (x - magic) + magic;
}

inline int floor_int(double x) {
  int i = int(x);
  return i > x ? i - 1 : i;
}

inline int ceil_int(double x) {
  int i = int(x);
  return i < x ? i + 1 : i;
}

// floor / ceil of (v - 8) / 16 for integer-valued v: the pixel centers at or
// right of / left of a 1/16-pixel coordinate.
inline int first_center(double v) { return -int((8 - int64_t(v)) >> 4); }
inline int last_center(double v) { return int((int64_t(v) - 8) >> 4); }

struct ClipVertex {
  Vec3 p;  // camera space
  Vec2 uv;
};

// Snapped 1/16-pixel position and 1 / w of a vertex in front of the near
// plane.
struct ScreenVertex {
  double X, Y, q;
};

// What the resolve pass needs to shade a pixel of one raster triangle.
struct RasterTri {
  simd::TriSetup setup;
  double ea[3], eb[3], ec[3];  // unbiased edge functions
  double area2;
  double q[3];  // 1 / w
  Vec2 uv[3];
  Vec3 normal;  // camera space, unit; lambert only
  int32_t group;
};

struct Projector {
  double sx, sy, ox, oy;  // pixel = o + s * (x / w, y / w)

  Projector(const Camera& cam) {
    double t = std::tan(cam.fov_y_deg * pi / 360);
    double aspect = double(cam.width) / cam.height;
    sx = 0.5 * cam.width / (t * aspect);
    sy = -0.5 * cam.height / t;
    ox = 0.5 * cam.width;
    oy = 0.5 * cam.height;
  }
};

class Rasterizer {
 public:
  Rasterizer(const Camera& cam, const RenderOptions& opts)
      : cam_(cam), proj_(cam), opts_(opts),
        kernels_(opts.kernels ? *opts.kernels : simd::active_kernels()),
        zbuf_(size_t(cam.width) * cam.height, 0.0f),
        ids_(size_t(cam.width) * cam.height, no_triangle) {}

  ScreenVertex project(Vec3 p) const {
    double q = -1 / p.z;
    return {round_even((proj_.ox + proj_.sx * p.x * q) * 16),
            round_even((proj_.oy + proj_.sy * p.y * q) * 16), q};
  }

  bool in_front(Vec3 p) const { return -p.z >= opts_.near_plane; }

  // `s` holds the projections of the three vertices when all are in front of
  // the near plane.
  void draw(const ClipVertex* v, const ScreenVertex* s, int32_t group) {
    const double near = opts_.near_plane;
    double w[3] = {-v[0].p.z, -v[1].p.z, -v[2].p.z};
    if (w[0] >= near && w[1] >= near && w[2] >= near) {
      emit(v, s, group);
      return;
    }
    if (w[0] < near && w[1] < near && w[2] < near) return;
    // Sutherland-Hodgman against w >= near
    ClipVertex poly[4];
    int n = 0;
    for (int i = 0; i < 3; ++i) {
      int j = (i + 1) % 3;
      bool in_i = w[i] >= near, in_j = w[j] >= near;
      if (in_i) poly[n++] = v[i];
      if (in_i != in_j) {
        double t = (w[i] - near) / (w[i] - w[j]);
        poly[n++] = {lerp(v[i].p, v[j].p, t), lerp(v[i].uv, v[j].uv, t)};
      }
    }
    ScreenVertex ps[4];
    for (int k = 0; k < n; ++k) ps[k] = project(poly[k].p);
    for (int k = 1; k + 1 < n; ++k) {
      const ClipVertex tv[3] = {poly[0], poly[k], poly[k + 1]};
      const ScreenVertex ts[3] = {ps[0], ps[k], ps[k + 1]};
      emit(tv, ts, group);
    }
  }

  RenderOut resolve(std::span<const Texture* const> textures) const {
    RenderOut out;
    out.camera = cam_;
    out.rgba = Image(cam_.width, cam_.height, 4);
    out.depth.assign(size_t(cam_.width) * cam_.height, 0.0f);
    for (int y = 0; y < cam_.height; ++y)
      for (int x = 0; x < cam_.width; ++x) {
        size_t idx = size_t(y) * cam_.width + x;
        uint32_t id = ids_[idx];
        if (id == no_triangle) continue;
        const RasterTri& t = tris_[id];
        const double px = 16.0 * x + 8.0, py = 16.0 * y + 8.0;
        double l[3], qsum = 0;
        for (int k = 0; k < 3; ++k) {
          l[k] = (t.ea[k] * px + t.eb[k] * py + t.ec[k]) / t.area2 * t.q[k];
          qsum += l[k];
        }
        double u = 0, v = 0;
        for (int k = 0; k < 3; ++k) {
          u += l[k] * t.uv[k].u;
          v += l[k] * t.uv[k].v;
        }
        u /= qsum;
        v /= qsum;
        const Texture* tex =
            t.group >= 0 && size_t(t.group) < textures.size() ? textures[t.group] : nullptr;
        Rgb albedo;
        if (tex)
          albedo = sample_texture(*tex, u, v);
        else
          for (int c = 0; c < 3; ++c) albedo[c] = float(opts_.fallback[c] / 255.0);
        double shade = 1;
        if (opts_.lambert) {
          // view ray through the pixel in camera space
          Vec3 ray = normalize({(x + 0.5 - proj_.ox) / proj_.sx, (y + 0.5 - proj_.oy) / proj_.sy, -1});
          shade = opts_.ambient + (1 - opts_.ambient) * std::abs(dot(t.normal, ray));
        }
        uint8_t* p = out.rgba.pixel(x, y);
        for (int c = 0; c < 3; ++c)
          p[c] = uint8_t(std::lround(std::clamp(albedo[c] * shade, 0.0, 1.0) * 255));
        p[3] = 255;
        out.depth[idx] = float(1 / qsum);
      }
    return out;
  }

 private:
  void emit(const ClipVertex* v, const ScreenVertex* s, int32_t group) {
    const double W16 = 16.0 * cam_.width, H16 = 16.0 * cam_.height;
    double minX = std::min({s[0].X, s[1].X, s[2].X}), maxX = std::max({s[0].X, s[1].X, s[2].X});
    double minY = std::min({s[0].Y, s[1].Y, s[2].Y}), maxY = std::max({s[0].Y, s[1].Y, s[2].Y});
    if (maxX < 0 || maxY < 0 || minX > W16 || minY > H16) return;
    // far outside any supported image; keeps edge products exact
    if (!(std::max(-minX, maxX) < 0x1p24 && std::max(-minY, maxY) < 0x1p24)) return;
    int x0 = std::max(0, first_center(minX));
    int x1 = std::min(cam_.width - 1, last_center(maxX));
    int y0 = std::max(0, first_center(minY));
    int y1 = std::min(cam_.height - 1, last_center(maxY));
    if (x0 > x1 || y0 > y1) return;

    double area2 = (s[1].X - s[0].X) * (s[2].Y - s[0].Y) - (s[2].X - s[0].X) * (s[1].Y - s[0].Y);
    if (area2 == 0) return;
    int order[3] = {0, 1, 2};
    if (area2 < 0) {
      std::swap(order[1], order[2]);
      area2 = -area2;
    }

    RasterTri& t = tris_.emplace_back();
    t.area2 = area2;
    t.group = group;
    for (int k = 0; k < 3; ++k) {
      const ScreenVertex& vi = s[order[(k + 1) % 3]];
      const ScreenVertex& vj = s[order[(k + 2) % 3]];
      double a = -(vj.Y - vi.Y), b = vj.X - vi.X;
      double c = (vj.Y - vi.Y) * vi.X - (vj.X - vi.X) * vi.Y;
      t.ea[k] = a;
      t.eb[k] = b;
      t.ec[k] = c;
      // samples exactly on an edge go to the side where (a, b) points first
      bool owns = a > 0 || (a == 0 && b > 0);
      t.setup.a[k] = a;
      t.setup.b[k] = b;
      t.setup.c[k] = c + (owns ? 1 : 0);
      t.q[k] = s[order[k]].q;
      t.uv[k] = v[order[k]].uv;
    }
    t.setup.za = (t.ea[0] * t.q[0] + t.ea[1] * t.q[1] + t.ea[2] * t.q[2]) / area2;
    t.setup.zb = (t.eb[0] * t.q[0] + t.eb[1] * t.q[1] + t.eb[2] * t.q[2]) / area2;
    t.setup.zc = (t.ec[0] * t.q[0] + t.ec[1] * t.q[1] + t.ec[2] * t.q[2]) / area2;
    if (opts_.lambert) t.normal = normalize(cross(v[1].p - v[0].p, v[2].p - v[0].p));

    const auto id = uint32_t(tris_.size() - 1);
    for (int y = y0; y <= y1; ++y) {
      // conservative per-row span from the three half-planes; the kernel
      // does the exact test
      const double py = 16.0 * y + 8.0;
      int lo = x0, hi = x1;
      for (int k = 0; k < 3 && lo <= hi; ++k) {
        double a = t.setup.a[k], r = t.setup.b[k] * py + t.setup.c[k];
        if (a == 0) {
          if (r <= 0) lo = hi + 1;
          continue;
        }
        double x = (-r / a - 8) / 16;  // pixel where the edge crosses this row
        if (!(std::abs(x) < 1e9)) continue;
        if (a > 0) lo = std::max(lo, floor_int(x) - 1);
        else hi = std::min(hi, ceil_int(x) + 1);
      }
      if (lo > hi) continue;
      size_t row = size_t(y) * cam_.width;
      kernels_.raster_span(t.setup, y, lo, hi + 1, zbuf_.data() + row, ids_.data() + row, id);
    }
  }

  const Camera& cam_;
  Projector proj_;
  const RenderOptions& opts_;
  const simd::Kernels& kernels_;
  std::vector<float> zbuf_;
  std::vector<uint32_t> ids_;
  std::vector<RasterTri> tris_;
};

}  // namespace

RenderOut render(const TriMesh& mesh, std::span<const Texture* const> group_textures,
                 const Camera& cam, const RenderOptions& opts) {
  if (!camera_valid(cam)) throw Error(Errc::invalid_parameter, "invalid camera");
  if (!(opts.near_plane > 0)) throw Error(Errc::invalid_parameter, "near plane must be positive");
  // world -> camera: R^T (p - eye)
  const Vec3 r = cam.right(), u = cam.up(), b = cam.back(), eye = cam.position();
  std::vector<Vec3> cp(mesh.positions.size());
  for (size_t i = 0; i < cp.size(); ++i) {
    Vec3 d = mesh.positions[i] - eye;
    cp[i] = {dot(r, d), dot(u, d), dot(b, d)};
  }
  Rasterizer raster(cam, opts);
  std::vector<ScreenVertex> sp(cp.size());
  for (size_t i = 0; i < cp.size(); ++i)
    if (raster.in_front(cp[i])) sp[i] = raster.project(cp[i]);
  for (size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const ClipVertex v[3] = {{cp[t[0]], mesh.uvs[i][0]},
                             {cp[t[1]], mesh.uvs[i][1]},
                             {cp[t[2]], mesh.uvs[i][2]}};
    const ScreenVertex s[3] = {sp[t[0]], sp[t[1]], sp[t[2]]};
    raster.draw(v, s, mesh.groups[i]);
  }
  return raster.resolve(group_textures);
}

Psnr psnr(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels)
    throw Error(Errc::invalid_parameter, "psnr needs images of the same shape");
  if (a.data.empty()) throw Error(Errc::invalid_parameter, "psnr of empty images");
  uint64_t sse = simd::active_kernels().sum_sq_diff_u8(a.data.data(), b.data.data(), a.data.size());
  if (sse == 0) return {true, 0};
  double mse = double(sse) / double(a.data.size());
  return {false, 20 * std::log10(255.0 / std::sqrt(mse))};
}

}  // namespace pf
