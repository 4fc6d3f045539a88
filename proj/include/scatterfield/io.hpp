#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "scatterfield/diffusion.hpp"
#include "scatterfield/geometry.hpp"
#include "scatterfield/image.hpp"

namespace scatterfield::io {

namespace fs = std::filesystem;
using json = nlohmann::json;

inline constexpr int kManifestSchema = 1;
inline constexpr int kSceneSchema = 1;
inline constexpr int kKernelSchema = 1;
inline constexpr int kReportSchema = 1;

/// Portable float map, little-endian, samples stored as float32 bottom row
/// first. One channel ("Pf") or three ("PF").
Image read_pfm(const fs::path& path);
void write_pfm(const fs::path& path, const Image& image);

/// 8- or 16-bit PNG scaled to [0, 1]. Gray and RGB; alpha is dropped.
Image read_png(const fs::path& path);
/// 16-bit PNG, samples clamped to [0, 1].
void write_png(const fs::path& path, const Image& image);

/// Dispatch on extension (.pfm or .png).
Image load_image(const fs::path& path);
void save_image(const fs::path& path, const Image& image);

struct MediumBlock {
  MediumParams medium;
  double slab_thickness = 0.0;  // m
};

struct LightFieldManifest {
  int schema_version = kManifestSchema;
  CameraArrayGeometry geometry;
  int width = 0;
  int height = 0;
  int channels = 1;
  std::string file_pattern = "view_{u:02}_{v:02}.pfm";
  std::optional<MediumBlock> medium;
  std::optional<std::string> ground_truth;  // relative to the manifest directory
  json provenance = json::object();
};

/// File name of a view; the pattern may use {u} and {v} with format specs.
std::string view_filename(const std::string& pattern, ViewIndex view);

/// Accepts a light-field directory or its manifest.json.
fs::path manifest_path(const fs::path& lf);

LightFieldManifest read_manifest(const fs::path& path);
void write_manifest(const fs::path& path, const LightFieldManifest& manifest);
json manifest_to_json(const LightFieldManifest& manifest);
LightFieldManifest manifest_from_json(const json& j);

struct LoadedLightField {
  LightField field;
  LightFieldManifest manifest;
  fs::path directory;
};

/// Reads the manifest and every view. Throws missing-file naming the absent
/// view, dimension-mismatch, unknown-schema or parse-error.
LoadedLightField load_lightfield(const fs::path& lf);

/// Writes every view with the manifest's pattern plus manifest.json into
/// `directory`. Geometry and image shape come from `field`.
void save_lightfield(const fs::path& directory, const LightField& field,
                     LightFieldManifest manifest);

/// Kernel samples as PFM plus a JSON sidecar (same stem, .json).
fs::path kernel_sidecar(const fs::path& kernel_pfm);
void save_kernel(const fs::path& path, const DiffuseKernel& kernel, const json& provenance = json::object());
/// Loads samples and, when present, the sidecar metadata.
DiffuseKernel load_kernel(const fs::path& path);

json read_json(const fs::path& path);
void write_json(const fs::path& path, const json& j);
void write_text(const fs::path& path, const std::string& text);

}  // namespace scatterfield::io
