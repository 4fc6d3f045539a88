#include <gtest/gtest.h>

#include <cstring>
#include <fstream>

#include "oracles.hpp"
#include "scatterfield/error.hpp"
#include "scatterfield/io.hpp"
#include "scatterfield/refocus.hpp"
#include "scatterfield/scene.hpp"

using namespace scatterfield;
namespace fs = std::filesystem;

namespace {

CameraArrayGeometry rig3() {
  CameraArrayGeometry g;
  g.grid_u = 3;
  g.grid_v = 3;
  g.baseline = 0.02;
  g.focal_length = 0.004;
  g.pixel_pitch = 3.45e-6;
  g.object_depth = 0.7;
  return g;
}

LightField float_field(const CameraArrayGeometry& g, int w, int h, std::uint64_t seed) {
  std::vector<Image> views;
  for (int i = 0; i < g.view_count(); ++i) views.push_back(quantize_to_float(oracle::random_image(w, h, seed + i)));
  return LightField(g, views);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(Pfm, RoundTripIsBitIdentical) {
  const fs::path dir = oracle::scratch_dir("pfm");
  for (int channels : {1, 3}) {
    const Image img = quantize_to_float(oracle::random_image(13, 7, 1, channels, 0.0, 5.0));
    io::write_pfm(dir / "a.pfm", img);
    const Image back = io::read_pfm(dir / "a.pfm");
    ASSERT_TRUE(back.same_shape(img));
    for (std::size_t i = 0; i < img.samples().size(); ++i) {
      EXPECT_EQ(std::memcmp(&img.samples()[i], &back.samples()[i], sizeof(double)), 0);
    }
  }
}

TEST(Pfm, HeaderIsLittleEndianBottomUp) {
  const fs::path dir = oracle::scratch_dir("pfm_header");
  Image img(2, 2, 1);
  img.at(0, 0) = 0.25;  // top-left
  img.at(1, 1) = 0.5;   // bottom-right
  io::write_pfm(dir / "h.pfm", img);
  std::ifstream in(dir / "h.pfm", std::ios::binary);
  std::string magic, scale;
  int w = 0, h = 0;
  in >> magic >> w >> h >> scale;
  in.get();
  EXPECT_EQ(magic, "Pf");
  EXPECT_EQ(scale, "-1.0");
  float data[4];
  in.read(reinterpret_cast<char*>(data), sizeof(data));
  // First stored row is the bottom image row.
  EXPECT_EQ(data[1], 0.5f);
  EXPECT_EQ(data[2], 0.25f);
}

TEST(Pfm, ReadsBigEndianFiles) {
  const fs::path dir = oracle::scratch_dir("pfm_be");
  {
    std::ofstream out(dir / "be.pfm", std::ios::binary);
    out << "Pf\n1 1\n1.0\n";
    const float v = 0.75f;
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    bits = __builtin_bswap32(bits);
    out.write(reinterpret_cast<const char*>(&bits), 4);
  }
  EXPECT_EQ(io::read_pfm(dir / "be.pfm").at(0, 0), 0.75);
}

TEST(Pfm, MalformedAndMissing) {
  const fs::path dir = oracle::scratch_dir("pfm_bad");
  {
    std::ofstream out(dir / "bad.pfm", std::ios::binary);
    out << "P6\n1 1\n255\n";
  }
  EXPECT_EQ(code_of([&] { io::read_pfm(dir / "bad.pfm"); }), ErrorCode::parse_error);
  {
    std::ofstream out(dir / "short.pfm", std::ios::binary);
    out << "Pf\n4 4\n-1.0\nxx";
  }
  EXPECT_EQ(code_of([&] { io::read_pfm(dir / "short.pfm"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([&] { io::read_pfm(dir / "nope.pfm"); }), ErrorCode::missing_file);
  EXPECT_EQ(code_of([&] { io::write_pfm(dir / "no_dir" / "x.pfm", Image(2, 2)); }), ErrorCode::io_error);
}

TEST(Png, SixteenBitRoundTripWithinQuantisation) {
  const fs::path dir = oracle::scratch_dir("png");
  for (int channels : {1, 3}) {
    const Image img = oracle::random_image(17, 9, 2, channels);
    io::write_png(dir / "a.png", img);
    const Image back = io::read_png(dir / "a.png");
    ASSERT_TRUE(back.same_shape(img));
    EXPECT_LE(oracle::max_abs_diff(back, img), 1.0 / 65535.0);
  }
}

TEST(Png, ClampsAndNormalisesFullScale) {
  const fs::path dir = oracle::scratch_dir("png_clamp");
  Image img(2, 1, 1);
  img.at(0, 0) = 3.0;
  img.at(1, 0) = 0.0;
  io::save_image(dir / "c.png", img);
  const Image back = io::load_image(dir / "c.png");
  EXPECT_EQ(back.at(0, 0), 1.0);
  EXPECT_EQ(back.at(1, 0), 0.0);
}

TEST(LightFieldIo, SaveLoadRoundTripAndRefocus) {
  const fs::path dir = oracle::scratch_dir("lf");
  const LightField lf = float_field(rig3(), 24, 20, 10);
  io::LightFieldManifest m;
  m.medium = io::MediumBlock{{0.01, 3.0, 0.2}, 1.5};
  m.ground_truth = "truth.pfm";
  m.provenance = {{"seed", 7}};
  io::save_lightfield(dir, lf, m);
  EXPECT_TRUE(fs::exists(dir / "view_02_01.pfm"));
  const io::LoadedLightField back = io::load_lightfield(dir);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(oracle::max_abs_diff(back.field.view(i), lf.view(i)), 0.0);
  EXPECT_EQ(back.manifest.medium->medium.mu_s, 3.0);
  EXPECT_EQ(back.manifest.medium->slab_thickness, 1.5);
  EXPECT_EQ(*back.manifest.ground_truth, "truth.pfm");
  EXPECT_EQ(back.manifest.provenance["seed"], 7);
  const RefocusConfig cfg = RefocusConfig::at_depth(0.9);
  EXPECT_LE(oracle::max_abs_diff(refocus(back.field, cfg), refocus(lf, cfg)), 1e-12);
}

TEST(LightFieldIo, SingleViewConstant) {
  const fs::path dir = oracle::scratch_dir("lf_single");
  io::write_pfm(dir / "view_00_00.pfm", Image(2, 2, 1, 0.5));
  io::write_json(dir / "manifest.json", {{"schema_version", 1}, {"grid_u", 1}, {"grid_v", 1},
                                         {"baseline_m", 0.01}, {"focal_length_m", 0.004},
                                         {"pixel_pitch_m", 3.45e-6}, {"object_depth_m", 0.7},
                                         {"width", 2}, {"height", 2}, {"channels", 1},
                                         {"file_pattern", "view_{u:02}_{v:02}.pfm"}});
  const io::LoadedLightField lf = io::load_lightfield(dir / "manifest.json");
  ASSERT_EQ(lf.field.view_count(), 1);
  for (double v : lf.field.view(0).samples()) EXPECT_EQ(v, 0.5);
}

TEST(LightFieldIo, MissingViewIsNamed) {
  const fs::path dir = oracle::scratch_dir("lf_missing");
  io::save_lightfield(dir, float_field(rig3(), 4, 4, 20), {});
  fs::remove(dir / "view_01_02.pfm");
  try {
    io::load_lightfield(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_file);
    EXPECT_NE(std::string(e.what()).find("u=1, v=2"), std::string::npos) << e.what();
  }
}

TEST(LightFieldIo, DimensionMismatchAndSchema) {
  const fs::path dir = oracle::scratch_dir("lf_dims");
  io::save_lightfield(dir, float_field(rig3(), 4, 4, 30), {});
  io::write_pfm(dir / "view_00_00.pfm", Image(5, 4));
  EXPECT_EQ(code_of([&] { io::load_lightfield(dir); }), ErrorCode::dimension_mismatch);

  io::json j = io::read_json(dir / "manifest.json");
  j["schema_version"] = 99;
  io::write_json(dir / "manifest.json", j);
  EXPECT_EQ(code_of([&] { io::load_lightfield(dir); }), ErrorCode::unknown_schema);

  io::write_text(dir / "manifest.json", "{ not json");
  EXPECT_EQ(code_of([&] { io::load_lightfield(dir); }), ErrorCode::parse_error);
}

TEST(LightFieldIo, PngViewsLoadNormalised) {
  const fs::path dir = oracle::scratch_dir("lf_png");
  CameraArrayGeometry g = rig3();
  g.grid_u = 1;
  g.grid_v = 1;
  io::LightFieldManifest m;
  m.file_pattern = "cam{u}_{v}.png";
  io::save_lightfield(dir, LightField(g, {Image(3, 3, 1, 1.0)}), m);
  EXPECT_TRUE(fs::exists(dir / "cam0_0.png"));
  const io::LoadedLightField lf = io::load_lightfield(dir);
  for (double v : lf.field.view(0).samples()) EXPECT_EQ(v, 1.0);
}

TEST(KernelIo, SidecarRoundTrip) {
  const fs::path dir = oracle::scratch_dir("kernel");
  KernelOptions o;
  o.pixel_scale = 0.5;
  const DiffuseKernel k = rasterize_kernel({0.0, 5.0, 0.3}, o);
  io::save_kernel(dir / "k.pfm", k);
  EXPECT_TRUE(fs::exists(dir / "k.json"));
  const DiffuseKernel back = io::load_kernel(dir / "k.pfm");
  EXPECT_EQ(back.width(), k.width());
  EXPECT_EQ(back.params.mu_a, k.params.mu_a);
  EXPECT_EQ(back.params.mu_s, 5.0);
  EXPECT_EQ(back.pixel_scale, 0.5);
  EXPECT_TRUE(std::isinf(back.mirror_distance));
  EXPECT_LE(oracle::max_abs_diff(back.samples, k.samples), 1e-7);
}

TEST(SceneIo, ParsesAndResolvesEmitterPath) {
  const fs::path dir = oracle::scratch_dir("scene");
  io::write_pfm(dir / "target.pfm", Image(4, 4, 1, 0.5));
  const io::json j = {{"schema_version", 1},
                      {"slab_thickness_m", 1.0},
                      {"medium", {{"mu_a", 0.01}, {"mu_s", 6.0}, {"g", 0.0}}},
                      {"camera", {{"grid_u", 3}, {"grid_v", 3}, {"baseline_m", 0.04}, {"focal_length_m", 0.01},
                                  {"pixel_pitch_m", 1e-4}, {"object_depth_m", 2.0}, {"sensor_width", 32},
                                  {"sensor_height", 24}}},
                      {"emitters", {{{"image", "target.pfm"}, {"pixel_scale_m", 0.02}}}},
                      {"n_photons", 5000},
                      {"seed", 9}};
  io::write_json(dir / "scene.json", j);
  const io::SceneFile sf = io::read_scene(dir / "scene.json");
  EXPECT_EQ(sf.scene.emitters.size(), 1u);
  EXPECT_EQ(sf.scene.emitters[0].radiance.at(1, 1), 0.5);
  EXPECT_EQ(sf.scene.sensor_height, 24);
  EXPECT_EQ(sf.sim.n_photons, 5000u);
  EXPECT_EQ(sf.sim.seed, 9u);
  io::json bad = j;
  bad["medium"]["g"] = 1.5;
  io::write_json(dir / "bad.json", bad);
  EXPECT_THROW(io::read_scene(dir / "bad.json"), Error);
}
