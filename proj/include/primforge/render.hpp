#pragma once

#include <span>
#include <vector>

#include "primforge/camera.hpp"
#include "primforge/image.hpp"
#include "primforge/mesh.hpp"
#include "primforge/simd/kernels.hpp"
#include "primforge/texture.hpp"

namespace pf {

struct RenderOptions {
  // Unlit albedo by default. With lambert set, color is scaled by
  // ambient + (1 - ambient) * |n . v| with the light at the camera.
  bool lambert = false;
  double ambient = 0.3;
  double near_plane = 0.01;
  // Albedo for groups without a texture.
  Rgb8 fallback{200, 200, 200};
  // Overrides the process-wide kernel choice (tests).
  const simd::Kernels* kernels = nullptr;
};

struct RenderOut {
  Image rgba;                // alpha 255 where covered, 0 elsewhere
  std::vector<float> depth;  // view-space distance along -z, 0 where empty
  Camera camera;
};

// Rasterizes both faces of every triangle. `group_textures[g]` textures
// group g; null or missing entries use the fallback albedo.
RenderOut render(const TriMesh& mesh, std::span<const Texture* const> group_textures,
                 const Camera& cam, const RenderOptions& opts = {});

struct Psnr {
  bool identical = false;
  double db = 0;  // meaningless when identical
};

// 20 log10(255 / sqrt(MSE)) over all 8-bit channels. Shape mismatch throws
// invalid-parameter.
Psnr psnr(const Image& a, const Image& b);

}  // namespace pf
