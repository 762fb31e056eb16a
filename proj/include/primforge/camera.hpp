#pragma once

#include <array>
#include <vector>

#include "primforge/math.hpp"
#include "primforge/rng.hpp"

namespace pf {

/// Pinhole camera. c2w is a row-major 4x4 rigid transform, camera-to-world,
/// right-handed, looking down its local -z with +y up.
struct Camera {
  std::array<double, 16> c2w{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  double fov_y_deg = 60;
  int width = 256;
  int height = 256;

  Vec3 position() const { return {c2w[3], c2w[7], c2w[11]}; }
  // Columns of the rotation block.
  Vec3 right() const { return {c2w[0], c2w[4], c2w[8]}; }
  Vec3 up() const { return {c2w[1], c2w[5], c2w[9]}; }
  Vec3 back() const { return {c2w[2], c2w[6], c2w[10]}; }
};

// Orthonormal rotation block (1e-6), fov in (0, 120), positive size.
bool camera_valid(const Camera& cam);

// Camera at `eye` looking at `target` with roll fixed by `up`.
Camera look_at(Vec3 eye, Vec3 target, Vec3 up, double fov_y_deg, int width, int height);

// Position at distance d: d * (cos(el) sin(az), sin(el), cos(el) cos(az)).
Vec3 orbit_position(double elevation_deg, double azimuth_deg, double distance);

struct RigView {
  double elevation_deg;
  double azimuth_deg;
};

// The fixed 4- or 8-view layouts. Other n throw invalid-parameter.
std::vector<RigView> structural_views(int n);

std::vector<Camera> structural_rig(int n, double distance, double fov_y_deg = 60,
                                   int width = 256, int height = 256);

// Direction uniform on the sphere (re-drawn within ~0.8 degrees of the poles,
// where a +y up vector is degenerate) and distance ~ U[dmin, dmax]; looks at
// the origin.
Camera sample_camera(Rng& rng, double fov_y_deg = 60, int width = 256, int height = 256,
                     double dmin = 2.0, double dmax = 3.0);

}  // namespace pf
