#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "primforge/error.hpp"
#include "primforge/export.hpp"
#include "primforge/pipeline.hpp"

using namespace pf;
namespace fs = std::filesystem;

namespace {

DatasetConfig small_config() {
  DatasetConfig c;
  c.views = 2;
  c.resolution = 64;
  c.texture_count = 8;
  c.texture_res = 64;
  c.write_depth = true;
  return c;
}

ShardOptions options(const fs::path& out, uint64_t count, int shard = 0, int shards = 1) {
  ShardOptions o;
  o.out = out;
  o.dataset_seed = 77;
  o.count = count;
  o.shard_index = shard;
  o.shard_count = shards;
  o.workers = 2;
  return o;
}

// Merges per-shard datasets into one digest keyed like a single-directory run.
std::map<std::string, uint64_t> object_digest(const fs::path& out) {
  auto d = dataset_digest(out);
  d.erase("dataset.json");
  return d;
}

ManifestRow row(AugKind kind, double synth, double render, int prims = 3) {
  static uint64_t n = 0;
  ManifestRow r;
  r.uuid = derive_job(1, n).uuid;
  r.index = n++;
  r.aug_kind = r.aug_drawn = kind;
  r.synth_ms = synth;
  r.render_ms = render;
  r.primitive_count = prims;
  return r;
}

}  // namespace

TEST_CASE("derive_job") {
  JobSpec a = derive_job(5, 10), b = derive_job(5, 10), c = derive_job(5, 11), d = derive_job(6, 10);
  CHECK(a.uuid == b.uuid);
  CHECK(a.seed == b.seed);
  CHECK(a.uuid != c.uuid);
  CHECK(a.uuid != d.uuid);
  CHECK(a.seed != c.seed);
  CHECK(a.uuid.hex().size() == 32);
  CHECK(Uuid::parse(a.uuid.hex()) == a.uuid);
  CHECK_FALSE(Uuid::parse("xyz").has_value());
  CHECK_FALSE(Uuid::parse(std::string(32, 'G')).has_value());
}

TEST_CASE("ten million uuids are distinct") {
  std::vector<Uuid> ids;
  ids.reserve(10'000'000);
  for (uint64_t i = 0; i < 10'000'000; ++i) ids.push_back(derive_job(0xC0FFEE, i).uuid);
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("config parsing is strict") {
  DatasetConfig d;
  DatasetConfig back = DatasetConfig::from_json(d.to_json());
  CHECK(back.to_json() == d.to_json());
  CHECK(back.digest() == d.digest());

  DatasetConfig e = DatasetConfig::from_json(R"({"views": 4, "resolution": 256, "tessellation": {"cube": 3}})");
  CHECK(e.views == 4);
  CHECK(e.resolution == 256);
  CHECK(e.sampler.tessellation.cube == 3);
  CHECK(e.sampler.tessellation.sphere_rings == d.sampler.tessellation.sphere_rings);

  auto code = [](const char* text) {
    try {
      (void)DatasetConfig::from_json(text);
    } catch (const Error& err) {
      return err.code();
    }
    return Errc::io;  // sentinel: nothing thrown
  };
  CHECK(code(R"({"viewz": 4})") == Errc::invalid_config);
  CHECK(code(R"({"views": "4"})") == Errc::invalid_config);
  CHECK(code(R"({"views": 2.5})") == Errc::invalid_config);
  CHECK(code(R"({"tessellation": {"nope": 1}})") == Errc::invalid_config);
  CHECK(code(R"({"p_boolean": 0.9})") == Errc::invalid_config);
  CHECK(code(R"({"rig": "struct5"})") == Errc::invalid_config);
  CHECK(code(R"({"primitive_pool": ["cube", "pyramid"]})") == Errc::invalid_config);
  CHECK(code(R"({"texture_res": 100})") == Errc::invalid_config);
  CHECK(code("[1, 2]") == Errc::invalid_config);
  CHECK(code("{") == Errc::invalid_config);

  DatasetConfig f = d;
  f.count = 12;
  CHECK(f.digest() == d.digest());
  f.resolution = 128;
  CHECK(f.digest() != d.digest());
}

TEST_CASE("manifest rows round trip") {
  ManifestRow r = row(AugKind::boolean, 1.25, 30.5, 4);
  r.status = RowStatus::failed_boolean_fallback;
  r.triangle_count = 1234;
  r.aug_kind = AugKind::none;
  r.surface_count = 5;
  r.heightfield_surfaces = 2;
  ManifestRow b = ManifestRow::from_json_line(r.to_json_line());
  CHECK(b.to_json_line() == r.to_json_line());
  CHECK(b.uuid == r.uuid);
  CHECK(b.aug_drawn == AugKind::boolean);
  CHECK(b.status == RowStatus::failed_boolean_fallback);
  CHECK(r.to_json_line().find('\n') == std::string::npos);
  CHECK_THROWS_AS(ManifestRow::from_json_line("{\"uuid\": 3"), Error);
}

TEST_CASE("stats") {
  std::vector<ManifestRow> rows;
  for (int i = 0; i < 40; ++i) rows.push_back(row(AugKind::boolean, 5, 95));
  for (int i = 0; i < 20; ++i) rows.push_back(row(AugKind::wireframe, 5, 95));
  for (int i = 0; i < 40; ++i) rows.push_back(row(AugKind::none, 5, 95));
  Stats s = compute_stats(rows);
  CHECK(s.rows == 100);
  CHECK(s.aug_kind["boolean"] == 40);
  CHECK(s.aug_kind["wireframe"] == 20);
  CHECK(s.aug_kind["none"] == 40);
  CHECK(s.synth_fraction == doctest::Approx(0.05));
  CHECK(s.render_fraction == doctest::Approx(0.95));
  CHECK(s.failure_rate == 0);
  std::string text = format_stats(s);
  CHECK(text.find("0.400") != std::string::npos);
  CHECK(text.find("0.200") != std::string::npos);
  CHECK(text.find("5.0%") != std::string::npos);

  Stats one = compute_stats({row(AugKind::wireframe, 2, 6, 7)});
  CHECK(one.rows == 1);
  CHECK(one.synth_ms == 2);
  CHECK(one.render_ms == 6);
  CHECK(one.synth_fraction == doctest::Approx(0.25));
  CHECK(one.primitive_count[7] == 1);
  CHECK(one.aug_kind["wireframe"] == 1);

  try {
    (void)compute_stats({});
    FAIL("expected invalid-input");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
}

TEST_CASE("obj and mtl text") {
  TriMesh m = test::box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
  for (size_t t = 0; t < m.triangle_count(); ++t) m.groups[t] = t < 6 ? 0 : 1;
  std::string obj = obj_text(m, "mesh.mtl");
  std::istringstream in(obj);
  std::string line;
  size_t v = 0, vt = 0, f = 0, use = 0;
  std::getline(in, line);
  CHECK(line == "mtllib mesh.mtl");
  while (std::getline(in, line)) {
    if (line.starts_with("v ")) ++v;
    if (line.starts_with("vt ")) ++vt;
    if (line.starts_with("f ")) ++f;
    if (line.starts_with("usemtl ")) ++use;
  }
  CHECK(v == m.vertex_count());
  CHECK(f == m.triangle_count());
  CHECK(use == 2);
  CHECK(vt >= 1);
  CHECK(obj.find("-0.000000") == std::string::npos);
  CHECK(obj.find("v -0.500000 -0.500000 -0.500000") != std::string::npos);
  std::vector<uint32_t> ids{3, 9};
  std::string mtl = mtl_text(ids);
  CHECK(mtl.find("newmtl group_0") != std::string::npos);
  CHECK(mtl.find("map_Kd tex_9.png") != std::string::npos);
}

TEST_CASE("object output layout") {
  test::TempDir tmp("layout");
  DatasetConfig cfg = small_config();
  TextureLibrary lib = dataset_textures(77, cfg);
  JobSpec job = derive_job(77, 3, cfg.digest());
  ManifestRow r = produce_object(job, cfg, lib, tmp.path);
  CHECK(r.uuid == job.uuid);
  CHECK(r.status != RowStatus::failed);
  for (const char* name : {"object.json", "cameras.json", "mesh.obj", "mesh.mtl", "done.marker",
                           "renders/view_000.png", "renders/view_001.png", "renders/depth_000.bin"})
    CHECK_MESSAGE(fs::exists(tmp.path / name), name);
  CHECK(fs::file_size(tmp.path / "renders/depth_001.bin") == 64u * 64u * 4u);
  CHECK_FALSE(fs::exists(tmp.path / "renders/view_002.png"));
  std::string cams = read_file(tmp.path / "cameras.json");
  CHECK(cams.find("\"fov_y_deg\"") != std::string::npos);
  CHECK(cams.find("\"c2w\"") != std::string::npos);
  std::string obj = read_file(tmp.path / "object.json");
  CHECK(obj.find(job.uuid.hex()) != std::string::npos);
  CHECK(obj.find("_ms") == std::string::npos);  // timings live in the manifest only
}

TEST_CASE("shards partition a run and reruns are idempotent") {
  test::TempDir full("full"), split("split");
  DatasetConfig cfg = small_config();
  ShardSummary s = run_shard(cfg, options(full.path, 12));
  CHECK(s.assigned == 12);
  CHECK(s.produced + s.failed == 12);
  CHECK(read_manifest(full.path).size() == 12);

  uint64_t assigned = 0;
  for (int i = 0; i < 3; ++i) assigned += run_shard(cfg, options(split.path, 12, i, 3)).assigned;
  CHECK(assigned == 12);
  CHECK(dataset_digest(full.path) == dataset_digest(split.path));
  CHECK(read_manifest(split.path).size() == 12);

  ShardSummary again = run_shard(cfg, options(full.path, 12));
  CHECK(again.skipped == 12);
  CHECK(again.produced == 0);
  CHECK(read_manifest(full.path).size() == 12);

  // a directory without its manifest row is regenerated
  auto rows = read_manifest(full.path);
  fs::path victim = full.path / rows[0].uuid.hex();
  fs::remove(victim / "mesh.obj");
  std::string kept;
  {
    std::ifstream in(s.manifest);
    std::string line;
    while (std::getline(in, line))
      if (line.find(rows[0].uuid.hex()) == std::string::npos) kept += line + "\n";
  }
  write_file(s.manifest, kept);
  ShardSummary heal = run_shard(cfg, options(full.path, 12));
  CHECK(heal.produced + heal.failed == 1);
  CHECK(dataset_digest(full.path) == dataset_digest(split.path));

  ShardOptions bad = options(full.path, 12, 3, 3);
  CHECK_THROWS_AS(run_shard(cfg, bad), Error);
  DatasetConfig other = cfg;
  other.resolution = 32;
  try {
    run_shard(other, options(full.path, 12));
    FAIL("expected invalid-config");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_config);
  }
}

TEST_CASE("worker count does not change output") {
  test::TempDir one("w1"), four("w4");
  DatasetConfig cfg = small_config();
  ShardOptions a = options(one.path, 8);
  a.workers = 1;
  ShardOptions b = options(four.path, 8);
  b.workers = 4;
  run_shard(cfg, a);
  run_shard(cfg, b);
  CHECK(object_digest(one.path) == object_digest(four.path));
}

TEST_CASE("crash and restart converges") {
  test::TempDir ref("ref"), crash("crash");
  DatasetConfig cfg = small_config();
  run_shard(cfg, options(ref.path, 10));

  pid_t pid = ::fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    ShardOptions o = options(crash.path, 10);
    o.crash_after = 4;
    o.workers = 1;
    try {
      run_shard(cfg, o);
    } catch (...) {
    }
    ::_exit(0);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 75);
  size_t before = read_manifest(crash.path).size();
  CHECK(before == 4);

  // simulate a torn append as well
  {
    std::ofstream m(crash.path / manifest_name(0, 1), std::ios::app);
    m << "{\"uuid\":\"0123";
  }
  run_shard(cfg, options(crash.path, 10));
  CHECK(read_manifest(crash.path).size() == 10);
  CHECK(dataset_digest(ref.path) == dataset_digest(crash.path));
  CHECK_FALSE(fs::exists(crash.path / ".tmp" / "shard-0-of-1"));
}

TEST_CASE("verify detects tampering") {
  test::TempDir out("verify");
  DatasetConfig cfg = small_config();
  run_shard(cfg, options(out.path, 4));
  VerifyReport ok = verify_dataset(out.path, 4);
  CHECK(ok.checked == 4);
  CHECK(ok.mismatched == 0);
  auto rows = read_manifest(out.path);
  fs::path png = out.path / rows[1].uuid.hex() / "renders" / "view_000.png";
  std::string bytes = read_file(png);
  bytes[bytes.size() / 2] ^= 1;
  write_file(png, bytes);
  VerifyReport bad = verify_dataset(out.path, 4);
  CHECK(bad.mismatched == 1);
  CHECK_FALSE(bad.problems.empty());
}

TEST_CASE("unwritable output is fatal") {
  test::TempDir tmp("ro");
  fs::path file = tmp.path / "plain";
  write_file(file, "x");
  try {
    run_shard(small_config(), options(file / "sub", 2));
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }
}
