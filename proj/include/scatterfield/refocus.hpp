#pragma once

#include <optional>
#include <span>

#include "scatterfield/geometry.hpp"
#include "scatterfield/image.hpp"

namespace scatterfield {

enum class Interpolation { nearest, bilinear };
enum class Normalization { mean, sum };

/// How samples shifted in from outside a view are handled. `absent` drops
/// them from the per-pixel average; `periodic` wraps around.
enum class RefocusBoundary { absent, periodic };

/// Refocus target plus resampling policy. Exactly one of alpha / depth is set.
///
/// alpha is the relative refocus parameter alpha = z / (f + z): alpha = 1 is
/// the plane at infinity (zero disparity) and smaller alpha focuses closer.
struct RefocusConfig {
  std::optional<double> alpha;
  std::optional<double> depth;  // m from the camera plane
  Interpolation interpolation = Interpolation::bilinear;
  Normalization normalization = Normalization::mean;
  RefocusBoundary boundary = RefocusBoundary::absent;

  static RefocusConfig at_alpha(double alpha);
  static RefocusConfig at_depth(double depth);

  void validate() const;
};

/// Disparity between adjacent views (pixels) for the refocus plane:
/// f * baseline / (z * pitch), or (1/alpha - 1) * baseline / pitch.
double disparity_per_baseline(const RefocusConfig& config, const CameraArrayGeometry& geometry);

/// Sensor translation that aligns `view` with the array centre for the
/// refocus plane: view offset (in baselines) times the disparity.
Vec2 shift_for_view(ViewIndex view, const RefocusConfig& config,
                    const CameraArrayGeometry& geometry);

/// Shift-and-add of arbitrary equally-shaped images: out(x) combines
/// images[i](x - shifts[i]). Views are accumulated in index order.
Image shift_and_add(std::span<const Image> images, std::span<const Vec2> shifts,
                    Interpolation interpolation, Normalization normalization,
                    RefocusBoundary boundary);

/// Synthetic-aperture refocus of a light field.
Image refocus(const LightField& field, const RefocusConfig& config);

}  // namespace scatterfield
