#pragma once

#include <filesystem>

#include "scatterfield/io.hpp"
#include "scatterfield/mcscatter.hpp"

namespace scatterfield::io {

struct SceneFile {
  ScatterScene scene;
  SimConfig sim;
  json source;  // the parsed document, echoed into provenance
};

/// Scene description: emitter planes (image path, pixel scale, origin, z),
/// slab thickness, medium, camera array, sensor size and sampling controls.
/// Emitter paths are resolved against the scene file's directory.
SceneFile scene_from_json(const json& j, const fs::path& base_dir);
SceneFile read_scene(const fs::path& path);

}  // namespace scatterfield::io
