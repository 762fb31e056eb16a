#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>

#include "primforge/mesh.hpp"
#include "primforge/texture.hpp"

namespace pf {

/// Wavefront OBJ text for `mesh`. Faces are grouped by surface group, each
/// group using material `group_<g>`; UV corners with identical printed values
/// share a `vt` line. Coordinates use six decimals.
std::string obj_text(const TriMesh& mesh, const std::string& mtl_name);

// One material per surface group; map_Kd points at tex_<id>.png.
std::string mtl_text(std::span<const uint32_t> group_textures);

std::string texture_file_name(uint32_t id);

// Texture as PNG with v pointing up, i.e. row j = v is written bottom-up.
void write_texture_png(const std::filesystem::path& path, const Texture& tex);

std::string encode_texture_png(const Texture& tex);

/// Encoded texture PNGs by id, so a dataset encodes each library texture
/// once. Thread-safe.
class TexturePngCache {
 public:
  explicit TexturePngCache(const TextureLibrary& textures) : textures_(&textures) {}
  std::shared_ptr<const std::string> get(uint32_t id);

 private:
  const TextureLibrary* textures_;
  std::mutex mutex_;
  std::unordered_map<uint32_t, std::shared_ptr<const std::string>> items_;
};

// mesh.obj, mesh.mtl and one PNG per distinct texture id into `dir`.
void export_mesh(const std::filesystem::path& dir, const TriMesh& mesh,
                 std::span<const uint32_t> group_textures, TexturePngCache& pngs);
void export_mesh(const std::filesystem::path& dir, const TriMesh& mesh,
                 std::span<const uint32_t> group_textures, const TextureLibrary& textures);

// Writes bytes to `path`, replacing any existing file. Throws io.
void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace pf
