#include "primforge/export.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <unordered_map>

#include "primforge/error.hpp"
#include "primforge/image.hpp"

namespace pf {
namespace {

void put_fixed(std::string& out, double v) {
  if (v == 0) v = 0;  // no "-0.000000"
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  if (r.ec != std::errc()) throw Error(Errc::invalid_input, "non-finite coordinate in export");
  // values like -0.0000001 print as -0.000000
  if (buf[0] == '-' && std::string_view(buf + 1, r.ptr) == std::string_view("0.000000")) {
    out += "0.000000";
    return;
  }
  out.append(buf, r.ptr);
}

void put_uint(std::string& out, uint64_t v) {
  char buf[24];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, r.ptr);
}

}  // namespace

std::string texture_file_name(uint32_t id) { return "tex_" + std::to_string(id) + ".png"; }

std::string obj_text(const TriMesh& mesh, const std::string& mtl_name) {
  std::string out;
  out.reserve(mesh.vertex_count() * 32 + mesh.triangle_count() * 60);
  out += "mtllib ";
  out += mtl_name;
  out += '\n';
  for (const Vec3& p : mesh.positions) {
    out += "v ";
    put_fixed(out, p.x);
    out += ' ';
    put_fixed(out, p.y);
    out += ' ';
    put_fixed(out, p.z);
    out += '\n';
  }

  // vt lines are deduplicated on their printed text.
  std::vector<std::array<uint32_t, 3>> corner_vt(mesh.triangle_count());
  std::unordered_map<std::string, uint32_t> vt_index;
  std::string line;
  for (size_t t = 0; t < mesh.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      line.clear();
      put_fixed(line, mesh.uvs[t][k].u);
      line += ' ';
      put_fixed(line, mesh.uvs[t][k].v);
      auto [it, fresh] = vt_index.try_emplace(line, uint32_t(vt_index.size() + 1));
      if (fresh) {
        out += "vt ";
        out += line;
        out += '\n';
      }
      corner_vt[t][k] = it->second;
    }
  }

  std::vector<std::vector<uint32_t>> by_group(size_t(std::max(mesh.group_count(), 0)));
  for (size_t t = 0; t < mesh.triangle_count(); ++t)
    by_group[size_t(mesh.groups[t])].push_back(uint32_t(t));
  for (size_t g = 0; g < by_group.size(); ++g) {
    if (by_group[g].empty()) continue;
    out += "usemtl group_";
    put_uint(out, g);
    out += '\n';
    for (uint32_t t : by_group[g]) {
      out += 'f';
      for (int k = 0; k < 3; ++k) {
        out += ' ';
        put_uint(out, uint64_t(mesh.triangles[t][k]) + 1);
        out += '/';
        put_uint(out, corner_vt[t][k]);
      }
      out += '\n';
    }
  }
  return out;
}

std::string mtl_text(std::span<const uint32_t> group_textures) {
  std::string out;
  for (size_t g = 0; g < group_textures.size(); ++g) {
    out += "newmtl group_" + std::to_string(g) + "\n";
    out += "Ka 1 1 1\nKd 1 1 1\nKs 0 0 0\nillum 1\n";
    out += "map_Kd " + texture_file_name(group_textures[g]) + "\n\n";
  }
  return out;
}

std::string encode_texture_png(const Texture& tex) {
  Image img(tex.res, tex.res, 3);
  for (int j = 0; j < tex.res; ++j) {
    uint8_t* row = img.pixel(0, tex.res - 1 - j);
    for (int i = 0; i < tex.res; ++i) {
      const Rgb8& c = tex.texel(i, j);
      row[3 * i] = c[0];
      row[3 * i + 1] = c[1];
      row[3 * i + 2] = c[2];
    }
  }
  return encode_png(img);
}

void write_texture_png(const std::filesystem::path& path, const Texture& tex) {
  write_file(path, encode_texture_png(tex));
}

std::shared_ptr<const std::string> TexturePngCache::get(uint32_t id) {
  {
    std::lock_guard lock(mutex_);
    auto it = items_.find(id);
    if (it != items_.end()) return it->second;
  }
  auto bytes = std::make_shared<const std::string>(encode_texture_png(*textures_->get(id)));
  std::lock_guard lock(mutex_);
  return items_.try_emplace(id, std::move(bytes)).first->second;
}

void export_mesh(const std::filesystem::path& dir, const TriMesh& mesh,
                 std::span<const uint32_t> group_textures, TexturePngCache& pngs) {
  if (int64_t(group_textures.size()) < mesh.group_count())
    throw Error(Errc::invalid_parameter, "fewer textures than surface groups");
  write_file(dir / "mesh.obj", obj_text(mesh, "mesh.mtl"));
  write_file(dir / "mesh.mtl", mtl_text(group_textures));
  std::set<uint32_t> ids(group_textures.begin(), group_textures.end());
  for (uint32_t id : ids) write_file(dir / texture_file_name(id), *pngs.get(id));
}

void export_mesh(const std::filesystem::path& dir, const TriMesh& mesh,
                 std::span<const uint32_t> group_textures, const TextureLibrary& textures) {
  TexturePngCache pngs(textures);
  export_mesh(dir, mesh, group_textures, pngs);
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(bytes.data(), std::streamsize(bytes.size()));
  f.close();
  if (!f) throw Error(Errc::io, "cannot write " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace pf
