#pragma once

// Small fixed-size vector and rigid-transform types used by every module.

#include <array>
#include <cmath>
#include <numbers>

namespace pf {

inline constexpr double pi = std::numbers::pi;

struct Vec2 {
  double u = 0;
  double v = 0;

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0;
  double y = 0;
  double z = 0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const {
    return i == 0 ? x : (i == 1 ? y : z);
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a * s; }
constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
constexpr Vec3 mul(Vec3 a, Vec3 b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }
constexpr Vec3& operator+=(Vec3& a, Vec3 b) { return a = a + b; }
constexpr Vec3& operator-=(Vec3& a, Vec3 b) { return a = a - b; }

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalize(Vec3 a) {
  double l = length(a);
  return l > 0 ? a / l : Vec3{};
}
constexpr Vec3 lerp(Vec3 a, Vec3 b, double t) { return a + (b - a) * t; }
constexpr Vec2 lerp(Vec2 a, Vec2 b, double t) {
  return {a.u + (b.u - a.u) * t, a.v + (b.v - a.v) * t};
}
constexpr Vec3 min(Vec3 a, Vec3 b) {
  return {a.x < b.x ? a.x : b.x, a.y < b.y ? a.y : b.y, a.z < b.z ? a.z : b.z};
}
constexpr Vec3 max(Vec3 a, Vec3 b) {
  return {a.x > b.x ? a.x : b.x, a.y > b.y ? a.y : b.y, a.z > b.z ? a.z : b.z};
}
inline bool is_finite(Vec3 a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

struct Quat {
  double w = 1;
  double x = 0;
  double y = 0;
  double z = 0;
};

inline double norm(const Quat& q) {
  return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

inline Vec3 rotate(const Quat& q, Vec3 v) {
  // v' = v + 2w(u x v) + 2 u x (u x v), u = vector part
  Vec3 u{q.x, q.y, q.z};
  if (u.x == 0 && u.y == 0 && u.z == 0) return v;
  Vec3 t = cross(u, v) * 2.0;
  return v + t * q.w + cross(u, t);
}

inline Quat axis_angle(Vec3 axis, double angle) {
  Vec3 a = normalize(axis);
  double s = std::sin(angle / 2);
  return {std::cos(angle / 2), a.x * s, a.y * s, a.z * s};
}

// Axis-aligned bounding box. A default-constructed box is empty (min > max).
struct Aabb {
  Vec3 min{INFINITY, INFINITY, INFINITY};
  Vec3 max{-INFINITY, -INFINITY, -INFINITY};

  bool empty() const { return min.x > max.x || min.y > max.y || min.z > max.z; }
  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 size() const { return max - min; }
  void expand(Vec3 p) {
    min = pf::min(min, p);
    max = pf::max(max, p);
  }
  void expand(const Aabb& b) {
    min = pf::min(min, b.min);
    max = pf::max(max, b.max);
  }
  bool overlaps(const Aabb& b) const {
    return min.x <= b.max.x && b.min.x <= max.x && min.y <= b.max.y &&
           b.min.y <= max.y && min.z <= b.max.z && b.min.z <= max.z;
  }
  Aabb inflated(double eps) const {
    return {min - Vec3{eps, eps, eps}, max + Vec3{eps, eps, eps}};
  }
};

// Composition order is scale, then rotation, then translation.
struct Transform {
  Vec3 scale{1, 1, 1};
  Quat rotation{};
  Vec3 translation{};

  Vec3 apply(Vec3 p) const { return rotate(rotation, mul(p, scale)) + translation; }
  bool valid() const {
    return std::abs(norm(rotation) - 1) <= 1e-9 && scale.x > 0 && scale.y > 0 &&
           scale.z > 0;
  }
};

}  // namespace pf
