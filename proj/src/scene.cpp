#include "scatterfield/scene.hpp"

#include <fmt/format.h>

#include "scatterfield/error.hpp"

namespace scatterfield::io {

namespace {

EmissionProfile parse_emission(const std::string& name) {
  if (name == "lambertian") return EmissionProfile::lambertian;
  if (name == "isotropic_forward") return EmissionProfile::isotropic_forward;
  fail(ErrorCode::parse_error, fmt::format("unknown emission profile '{}'", name));
}

// Colour emitters are simulated as their channel mean.
Image to_mono(const Image& image) {
  if (image.channels() == 1) return image;
  Image mono(image.width(), image.height(), 1);
  for (int c = 0; c < image.channels(); ++c) mono += image.channel(c);
  mono *= 1.0 / image.channels();
  return mono;
}

}  // namespace

SceneFile scene_from_json(const json& j, const fs::path& base_dir) {
  SceneFile out;
  out.source = j;
  try {
    const int version = j.value("schema_version", kSceneSchema);
    if (version != kSceneSchema) fail(ErrorCode::unknown_schema, fmt::format("unknown scene schema version {}", version));

    ScatterScene& s = out.scene;
    s.slab_thickness = j.at("slab_thickness_m").get<double>();
    const json& medium = j.at("medium");
    s.medium.mu_a = medium.at("mu_a").get<double>();
    s.medium.mu_s = medium.at("mu_s").get<double>();
    s.medium.g = medium.at("g").get<double>();

    const json& cam = j.at("camera");
    s.geometry.grid_u = cam.at("grid_u").get<int>();
    s.geometry.grid_v = cam.at("grid_v").get<int>();
    s.geometry.baseline = cam.at("baseline_m").get<double>();
    s.geometry.focal_length = cam.at("focal_length_m").get<double>();
    s.geometry.pixel_pitch = cam.at("pixel_pitch_m").get<double>();
    s.geometry.object_depth = cam.at("object_depth_m").get<double>();
    s.sensor_width = cam.at("sensor_width").get<int>();
    s.sensor_height = cam.at("sensor_height").get<int>();
    s.emission = parse_emission(j.value("emission", std::string("lambertian")));

    for (const json& e : j.at("emitters")) {
      Emitter em;
      em.radiance = to_mono(load_image(base_dir / e.at("image").get<std::string>()));
      em.radiance *= e.value("radiance_scale", 1.0);
      em.plane.pixel_scale = e.at("pixel_scale_m").get<double>();
      if (e.contains("origin_m")) {
        em.plane.origin = {e.at("origin_m").at(0).get<double>(), e.at("origin_m").at(1).get<double>()};
      }
      em.z = e.value("z_m", 0.0);
      s.emitters.push_back(std::move(em));
    }

    SimConfig& sim = out.sim;
    sim.n_photons = j.value("n_photons", sim.n_photons);
    sim.seed = j.value("seed", sim.seed);
    sim.batch_size = j.value("batch_size", sim.batch_size);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, fmt::format("malformed scene: {}", e.what()));
  }
  out.scene.validate();
  out.sim.validate();
  return out;
}

SceneFile read_scene(const fs::path& path) {
  return scene_from_json(read_json(path), path.parent_path());
}

}  // namespace scatterfield::io
