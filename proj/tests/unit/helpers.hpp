#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>

#include "primforge/mesh.hpp"
#include "primforge/primitives.hpp"

namespace pf::test {

// Axis-aligned box [lo, hi] built from the unit cube generator.
inline TriMesh box(Vec3 lo, Vec3 hi, int tess = 1) {
  Transform t;
  t.scale = hi - lo;
  t.translation = (lo + hi) * 0.5;
  return apply_transform(gen_cube(tess), t);
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("primforge-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace pf::test
