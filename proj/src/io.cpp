#include "scatterfield/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "scatterfield/error.hpp"

namespace scatterfield::io {

namespace {

std::ifstream open_input(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorCode::missing_file, fmt::format("file not found: {}", path.string()));
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, fmt::format("cannot open {}", path.string()));
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, fmt::format("cannot write {}", path.string()));
  return out;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Whitespace-separated header token; consumes exactly one trailing whitespace byte.
std::string header_token(std::istream& in, const fs::path& path) {
  std::string token;
  int c = in.get();
  while (c != EOF && std::isspace(c)) c = in.get();
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (token.empty()) fail(ErrorCode::parse_error, fmt::format("truncated PFM header in {}", path.string()));
  return token;
}

template <typename T>
T parse_number(const std::string& token, const fs::path& path) {
  try {
    std::size_t used = 0;
    T value;
    if constexpr (std::is_integral_v<T>) {
      value = static_cast<T>(std::stol(token, &used));
    } else {
      value = static_cast<T>(std::stod(token, &used));
    }
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    fail(ErrorCode::parse_error, fmt::format("bad number '{}' in {}", token, path.string()));
  }
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

double get_positive(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::parse_error, fmt::format("missing field '{}'", key));
  return j.at(key).get<double>();
}

}  // namespace

Image read_pfm(const fs::path& path) {
  std::ifstream in = open_input(path);
  const std::string magic = header_token(in, path);
  int channels = 0;
  if (magic == "Pf") {
    channels = 1;
  } else if (magic == "PF") {
    channels = 3;
  } else {
    fail(ErrorCode::parse_error, fmt::format("{} is not a PFM file", path.string()));
  }
  const int width = parse_number<int>(header_token(in, path), path);
  const int height = parse_number<int>(header_token(in, path), path);
  const double scale = parse_number<double>(header_token(in, path), path);
  if (width < 1 || height < 1 || scale == 0.0 || !std::isfinite(scale)) {
    fail(ErrorCode::parse_error, fmt::format("invalid PFM header in {}", path.string()));
  }
  const bool little = scale < 0.0;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                            static_cast<std::size_t>(channels);
  std::vector<std::uint32_t> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * sizeof(std::uint32_t)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(std::uint32_t)) {
    fail(ErrorCode::parse_error, fmt::format("truncated PFM data in {}", path.string()));
  }
  const bool swap = little != (std::endian::native == std::endian::little);

  Image image(width, height, channels);
  std::size_t k = 0;
  for (int row = 0; row < height; ++row) {
    const int y = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        std::uint32_t bits = raw[k++];
        if (swap) bits = __builtin_bswap32(bits);
        image.at(x, y, c) = static_cast<double>(std::bit_cast<float>(bits));
      }
    }
  }
  validate_intensity(image, path.string());
  return image;
}

void write_pfm(const fs::path& path, const Image& image) {
  require(!image.empty(), "cannot write an empty image");
  require(image.channels() == 1 || image.channels() == 3, "PFM holds 1 or 3 channels");
  std::vector<float> data;
  data.reserve(image.samples().size());
  for (int row = 0; row < image.height(); ++row) {
    const int y = image.height() - 1 - row;
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) data.push_back(static_cast<float>(image.at(x, y, c)));
    }
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (float& f : data) f = std::bit_cast<float>(__builtin_bswap32(std::bit_cast<std::uint32_t>(f)));
  }
  std::ofstream out = open_output(path);
  out << (image.channels() == 1 ? "Pf" : "PF") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << "-1.0\n";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (!out) fail(ErrorCode::io_error, fmt::format("write failed: {}", path.string()));
}

Image read_png(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorCode::missing_file, fmt::format("file not found: {}", path.string()));
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) fail(ErrorCode::io_error, fmt::format("cannot open {}", path.string()));

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (r.png == nullptr) fail(ErrorCode::io_error, "libpng init failed");
  r.info = png_create_info_struct(r.png);
  if (r.info == nullptr) fail(ErrorCode::io_error, "libpng init failed");

  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int channels = 0;
  if (setjmp(png_jmpbuf(r.png))) {
    fail(ErrorCode::parse_error, fmt::format("corrupt PNG: {}", path.string()));
  }
  png_init_io(r.png, file.get());
  png_read_info(r.png, r.info);
  const int color = png_get_color_type(r.png, r.info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(r.png, r.info) < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_strip_alpha(r.png);
  png_read_update_info(r.png, r.info);
  width = png_get_image_width(r.png, r.info);
  height = png_get_image_height(r.png, r.info);
  bit_depth = png_get_bit_depth(r.png, r.info);
  channels = png_get_channels(r.png, r.info);
  const std::size_t stride = png_get_rowbytes(r.png, r.info);
  pixels.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);

  if (channels != 1 && channels != 3) {
    fail(ErrorCode::parse_error, fmt::format("unsupported PNG channel layout in {}", path.string()));
  }
  Image image(static_cast<int>(width), static_cast<int>(height), channels);
  const double scale = bit_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const unsigned char* row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        const std::size_t i = static_cast<std::size_t>(x) * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c);
        const unsigned value = bit_depth == 16 ? (static_cast<unsigned>(row[2 * i]) << 8) | row[2 * i + 1] : row[i];
        image.at(static_cast<int>(x), static_cast<int>(y), c) = value * scale;
      }
    }
  }
  return image;
}

void write_png(const fs::path& path, const Image& image) {
  require(!image.empty(), "cannot write an empty image");
  require(image.channels() == 1 || image.channels() == 3, "PNG output holds 1 or 3 channels");
  const int channels = image.channels();
  const std::size_t stride = static_cast<std::size_t>(image.width()) * static_cast<std::size_t>(channels) * 2;
  std::vector<unsigned char> pixels(stride * static_cast<std::size_t>(image.height()));
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < channels; ++c) {
        const double v = std::clamp(image.at(x, y, c), 0.0, 1.0);
        const auto q = static_cast<unsigned>(std::lround(v * 65535.0));
        const std::size_t i = static_cast<std::size_t>(y) * stride +
                              2 * (static_cast<std::size_t>(x) * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c));
        pixels[i] = static_cast<unsigned char>(q >> 8);
        pixels[i + 1] = static_cast<unsigned char>(q & 0xff);
      }
    }
  }

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) fail(ErrorCode::io_error, fmt::format("cannot write {}", path.string()));
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (w.png == nullptr) fail(ErrorCode::io_error, "libpng init failed");
  w.info = png_create_info_struct(w.png);
  if (w.info == nullptr) fail(ErrorCode::io_error, "libpng init failed");
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height()));
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = pixels.data() + y * stride;
  if (setjmp(png_jmpbuf(w.png))) {
    fail(ErrorCode::io_error, fmt::format("PNG write failed: {}", path.string()));
  }
  png_init_io(w.png, file.get());
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 16,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

Image load_image(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pfm") return read_pfm(path);
  if (ext == ".png") return read_png(path);
  fail(ErrorCode::invalid_argument, fmt::format("unsupported image format: {}", path.string()));
}

void save_image(const fs::path& path, const Image& image) {
  const std::string ext = lower_extension(path);
  if (ext == ".pfm") return write_pfm(path, image);
  if (ext == ".png") return write_png(path, image);
  fail(ErrorCode::invalid_argument, fmt::format("unsupported image format: {}", path.string()));
}

std::string view_filename(const std::string& pattern, ViewIndex view) {
  try {
    return fmt::format(fmt::runtime(pattern), fmt::arg("u", view.u), fmt::arg("v", view.v));
  } catch (const fmt::format_error& e) {
    fail(ErrorCode::parse_error, fmt::format("bad file pattern '{}': {}", pattern, e.what()));
  }
}

fs::path manifest_path(const fs::path& lf) {
  if (fs::is_directory(lf)) return lf / "manifest.json";
  return lf;
}

json read_json(const fs::path& path) {
  std::ifstream in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_output(path);
  out << text;
  if (!out) fail(ErrorCode::io_error, fmt::format("write failed: {}", path.string()));
}

json manifest_to_json(const LightFieldManifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["grid_u"] = m.geometry.grid_u;
  j["grid_v"] = m.geometry.grid_v;
  j["baseline_m"] = m.geometry.baseline;
  j["focal_length_m"] = m.geometry.focal_length;
  j["pixel_pitch_m"] = m.geometry.pixel_pitch;
  j["object_depth_m"] = m.geometry.object_depth;
  j["width"] = m.width;
  j["height"] = m.height;
  j["channels"] = m.channels;
  j["file_pattern"] = m.file_pattern;
  if (m.medium) {
    j["medium"] = {{"mu_a", m.medium->medium.mu_a},
                   {"mu_s", m.medium->medium.mu_s},
                   {"g", m.medium->medium.g},
                   {"slab_thickness_m", m.medium->slab_thickness}};
  }
  if (m.ground_truth) j["ground_truth"] = *m.ground_truth;
  j["provenance"] = m.provenance;
  return j;
}

LightFieldManifest manifest_from_json(const json& j) {
  LightFieldManifest m;
  try {
    if (!j.is_object()) fail(ErrorCode::parse_error, "manifest must be a JSON object");
    if (!j.contains("schema_version")) fail(ErrorCode::parse_error, "manifest lacks schema_version");
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kManifestSchema) {
      fail(ErrorCode::unknown_schema, fmt::format("unknown manifest schema version {}", m.schema_version));
    }
    m.geometry.grid_u = j.at("grid_u").get<int>();
    m.geometry.grid_v = j.at("grid_v").get<int>();
    m.geometry.baseline = get_positive(j, "baseline_m");
    m.geometry.focal_length = get_positive(j, "focal_length_m");
    m.geometry.pixel_pitch = get_positive(j, "pixel_pitch_m");
    m.geometry.object_depth = get_positive(j, "object_depth_m");
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.channels = j.value("channels", 1);
    m.file_pattern = j.value("file_pattern", m.file_pattern);
    if (j.contains("medium") && !j.at("medium").is_null()) {
      const json& md = j.at("medium");
      MediumBlock block;
      block.medium.mu_a = md.at("mu_a").get<double>();
      block.medium.mu_s = md.at("mu_s").get<double>();
      block.medium.g = md.at("g").get<double>();
      block.slab_thickness = md.at("slab_thickness_m").get<double>();
      m.medium = block;
    }
    if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
      m.ground_truth = j.at("ground_truth").get<std::string>();
    }
    if (j.contains("provenance")) m.provenance = j.at("provenance");
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, fmt::format("malformed manifest: {}", e.what()));
  }
  try {
    m.geometry.validate();
    if (m.medium) m.medium->medium.validate();
  } catch (const Error& e) {
    fail(ErrorCode::parse_error, fmt::format("invalid manifest: {}", e.what()));
  }
  if (m.width < 1 || m.height < 1 || (m.channels != 1 && m.channels != 3)) {
    fail(ErrorCode::parse_error, "manifest declares an invalid image shape");
  }
  return m;
}

LightFieldManifest read_manifest(const fs::path& path) { return manifest_from_json(read_json(path)); }

void write_manifest(const fs::path& path, const LightFieldManifest& manifest) {
  write_json(path, manifest_to_json(manifest));
}

LoadedLightField load_lightfield(const fs::path& lf) {
  LoadedLightField out;
  const fs::path mpath = manifest_path(lf);
  out.manifest = read_manifest(mpath);
  out.directory = mpath.parent_path();
  const CameraArrayGeometry& g = out.manifest.geometry;
  std::vector<Image> views;
  views.reserve(static_cast<std::size_t>(g.view_count()));
  for (int i = 0; i < g.view_count(); ++i) {
    const ViewIndex view = g.view_at(i);
    const fs::path file = out.directory / view_filename(out.manifest.file_pattern, view);
    if (!fs::exists(file)) {
      fail(ErrorCode::missing_file,
           fmt::format("view (u={}, v={}) missing: {}", view.u, view.v, file.string()));
    }
    Image image = load_image(file);
    if (image.width() != out.manifest.width || image.height() != out.manifest.height ||
        image.channels() != out.manifest.channels) {
      fail(ErrorCode::dimension_mismatch,
           fmt::format("view (u={}, v={}) is {}x{}x{}, manifest declares {}x{}x{}", view.u, view.v,
                       image.width(), image.height(), image.channels(), out.manifest.width,
                       out.manifest.height, out.manifest.channels));
    }
    views.push_back(std::move(image));
  }
  out.field = LightField(g, std::move(views));
  return out;
}

void save_lightfield(const fs::path& directory, const LightField& field, LightFieldManifest manifest) {
  require(!field.empty(), "cannot save an empty light field");
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) fail(ErrorCode::io_error, fmt::format("cannot create {}: {}", directory.string(), ec.message()));
  manifest.schema_version = kManifestSchema;
  manifest.geometry = field.geometry();
  manifest.width = field.width();
  manifest.height = field.height();
  manifest.channels = field.channels();
  const CameraArrayGeometry& g = field.geometry();
  for (int i = 0; i < g.view_count(); ++i) {
    save_image(directory / view_filename(manifest.file_pattern, g.view_at(i)), field.view(i));
  }
  write_manifest(directory / "manifest.json", manifest);
}

fs::path kernel_sidecar(const fs::path& kernel_pfm) {
  fs::path p = kernel_pfm;
  p.replace_extension(".json");
  return p;
}

void save_kernel(const fs::path& path, const DiffuseKernel& kernel, const json& provenance) {
  write_pfm(path, kernel.samples);
  json j;
  j["schema_version"] = kKernelSchema;
  j["width"] = kernel.width();
  j["pixel_scale_m"] = kernel.pixel_scale;
  j["mu_a"] = kernel.params.mu_a;
  j["mu_s"] = kernel.params.mu_s;
  j["g"] = kernel.params.g;
  j["normalized"] = kernel.normalized;
  if (std::isfinite(kernel.mirror_distance)) {
    j["mirror_distance_m"] = kernel.mirror_distance;
  } else {
    j["mirror_distance_m"] = nullptr;
  }
  j["provenance"] = provenance;
  write_json(kernel_sidecar(path), j);
}

DiffuseKernel load_kernel(const fs::path& path) {
  DiffuseKernel kernel;
  kernel.samples = read_pfm(path);
  if (kernel.samples.channels() != 1 || kernel.samples.width() != kernel.samples.height() ||
      kernel.samples.width() % 2 == 0) {
    fail(ErrorCode::dimension_mismatch, fmt::format("kernel {} must be an odd square single-channel image", path.string()));
  }
  const fs::path sidecar = kernel_sidecar(path);
  if (fs::exists(sidecar)) {
    const json j = read_json(sidecar);
    try {
      const int version = j.at("schema_version").get<int>();
      if (version != kKernelSchema) {
        fail(ErrorCode::unknown_schema, fmt::format("unknown kernel schema version {}", version));
      }
      kernel.pixel_scale = j.at("pixel_scale_m").get<double>();
      kernel.params.mu_a = j.at("mu_a").get<double>();
      kernel.params.mu_s = j.at("mu_s").get<double>();
      kernel.params.g = j.at("g").get<double>();
      kernel.normalized = j.value("normalized", true);
      if (j.contains("mirror_distance_m") && !j.at("mirror_distance_m").is_null()) {
        kernel.mirror_distance = j.at("mirror_distance_m").get<double>();
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::parse_error, fmt::format("malformed kernel sidecar {}: {}", sidecar.string(), e.what()));
    }
  }
  return kernel;
}

}  // namespace scatterfield::io
