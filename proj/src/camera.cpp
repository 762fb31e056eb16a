#include "primforge/camera.hpp"

#include "primforge/error.hpp"

namespace pf {

bool camera_valid(const Camera& cam) {
  if (!(cam.fov_y_deg > 0 && cam.fov_y_deg < 120) || cam.width <= 0 || cam.height <= 0)
    return false;
  for (double v : cam.c2w)
    if (!std::isfinite(v)) return false;
  const Vec3 cols[3] = {cam.right(), cam.up(), cam.back()};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(dot(cols[i], cols[j]) - (i == j ? 1.0 : 0.0)) > 1e-6) return false;
  if (std::abs(dot(cross(cols[0], cols[1]), cols[2]) - 1) > 1e-6) return false;
  return cam.c2w[12] == 0 && cam.c2w[13] == 0 && cam.c2w[14] == 0 && cam.c2w[15] == 1;
}

Camera look_at(Vec3 eye, Vec3 target, Vec3 up, double fov_y_deg, int width, int height) {
  Vec3 back = normalize(eye - target);
  Vec3 right = normalize(cross(up, back));
  if (length(back) == 0 || length(right) == 0)
    throw Error(Errc::invalid_parameter, "degenerate look-at frame");
  Vec3 true_up = cross(back, right);
  Camera cam;
  cam.c2w = {right.x, true_up.x, back.x, eye.x,  //
             right.y, true_up.y, back.y, eye.y,  //
             right.z, true_up.z, back.z, eye.z,  //
             0,       0,         0,      1};
  cam.fov_y_deg = fov_y_deg;
  cam.width = width;
  cam.height = height;
  if (!camera_valid(cam)) throw Error(Errc::invalid_parameter, "invalid camera parameters");
  return cam;
}

Vec3 orbit_position(double elevation_deg, double azimuth_deg, double distance) {
  double el = elevation_deg * pi / 180, az = azimuth_deg * pi / 180;
  return Vec3{std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az)} * distance;
}

std::vector<RigView> structural_views(int n) {
  if (n == 8)
    return {{0, 0}, {0, 90}, {0, 180}, {0, 270}, {40, 45}, {40, 135}, {40, 225}, {40, 315}};
  if (n == 4) return {{20, 0}, {20, 90}, {20, 180}, {20, 270}};
  throw Error(Errc::invalid_parameter, "structural rig needs 4 or 8 views");
}

std::vector<Camera> structural_rig(int n, double distance, double fov_y_deg, int width,
                                   int height) {
  if (!(distance > 0)) throw Error(Errc::invalid_parameter, "rig distance must be positive");
  std::vector<Camera> cams;
  for (const auto& v : structural_views(n))
    cams.push_back(look_at(orbit_position(v.elevation_deg, v.azimuth_deg, distance), {},
                           {0, 1, 0}, fov_y_deg, width, height));
  return cams;
}

Camera sample_camera(Rng& rng, double fov_y_deg, int width, int height, double dmin,
                     double dmax) {
  if (!(dmin > 0 && dmin <= dmax))
    throw Error(Errc::invalid_parameter, "camera distance range must satisfy 0 < lo <= hi");
  Vec3 d = rng.unit_vector();
  while (std::abs(d.y) > 0.9999) d = rng.unit_vector();
  double dist = rng.uniform(dmin, dmax);
  return look_at(d * dist, {}, {0, 1, 0}, fov_y_deg, width, height);
}

}  // namespace pf
