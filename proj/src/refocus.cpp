#include "scatterfield/refocus.hpp"

#include <cmath>
#include <vector>

#include "scatterfield/error.hpp"

namespace scatterfield {

RefocusConfig RefocusConfig::at_alpha(double alpha) {
  RefocusConfig config;
  config.alpha = alpha;
  return config;
}

RefocusConfig RefocusConfig::at_depth(double depth) {
  RefocusConfig config;
  config.depth = depth;
  return config;
}

void RefocusConfig::validate() const {
  require(alpha.has_value() != depth.has_value(), "refocus needs exactly one of alpha or depth");
  if (alpha) require(std::isfinite(*alpha) && *alpha > 0.0 && *alpha <= 1.0, "alpha must lie in (0, 1]");
  if (depth) require(std::isfinite(*depth) && *depth > 0.0, "refocus depth must be > 0");
}

double disparity_per_baseline(const RefocusConfig& config, const CameraArrayGeometry& geometry) {
  config.validate();
  geometry.validate();
  if (config.depth) {
    return geometry.focal_length * geometry.baseline / (*config.depth * geometry.pixel_pitch);
  }
  return (1.0 / *config.alpha - 1.0) * geometry.baseline / geometry.pixel_pitch;
}

Vec2 shift_for_view(ViewIndex view, const RefocusConfig& config,
                    const CameraArrayGeometry& geometry) {
  require(geometry.contains(view), "view index outside the camera grid");
  const double ds = disparity_per_baseline(config, geometry);
  const Vec2 o = geometry.view_offset(view);
  return {o.x * ds, o.y * ds};
}

namespace {

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

// Resampling taps along one axis for a sample at continuous position p.
struct Taps {
  int index[2];
  double weight[2];
  int count;
};

Taps make_taps(double p, int n, Interpolation interpolation, RefocusBoundary boundary) {
  Taps taps{};
  if (interpolation == Interpolation::nearest) {
    int i = static_cast<int>(std::floor(p + 0.5));
    if (boundary == RefocusBoundary::periodic) {
      i = wrap(i, n);
    } else if (i < 0 || i >= n) {
      return taps;
    }
    taps.index[0] = i;
    taps.weight[0] = 1.0;
    taps.count = 1;
    return taps;
  }
  const double fl = std::floor(p);
  int i0 = static_cast<int>(fl);
  const double frac = p - fl;
  if (frac == 0.0) {
    if (boundary == RefocusBoundary::periodic) {
      i0 = wrap(i0, n);
    } else if (i0 < 0 || i0 >= n) {
      return taps;
    }
    taps.index[0] = i0;
    taps.weight[0] = 1.0;
    taps.count = 1;
    return taps;
  }
  int i1 = i0 + 1;
  if (boundary == RefocusBoundary::periodic) {
    i0 = wrap(i0, n);
    i1 = wrap(i1, n);
  } else if (i0 < 0 || i1 >= n) {
    return taps;
  }
  taps.index[0] = i0;
  taps.weight[0] = 1.0 - frac;
  taps.index[1] = i1;
  taps.weight[1] = frac;
  taps.count = 2;
  return taps;
}

}  // namespace

Image shift_and_add(std::span<const Image> images, std::span<const Vec2> shifts,
                    Interpolation interpolation, Normalization normalization,
                    RefocusBoundary boundary) {
  require(!images.empty(), "shift-and-add needs at least one image");
  require(images.size() == shifts.size(), "one shift per image is required");
  const Image& first = images.front();
  const int w = first.width();
  const int h = first.height();
  const int nc = first.channels();
  for (const Image& im : images) require(im.same_shape(first), "shift-and-add images differ in shape");
  for (const Vec2& s : shifts) require(std::isfinite(s.x) && std::isfinite(s.y), "shifts must be finite");

  Image acc(w, h, nc);
  std::vector<double> count(static_cast<std::size_t>(w) * h, 0.0);
  std::vector<Taps> xtaps(static_cast<std::size_t>(w));

  for (std::size_t i = 0; i < images.size(); ++i) {
    const Image& src = images[i];
    for (int x = 0; x < w; ++x) {
      xtaps[static_cast<std::size_t>(x)] = make_taps(x - shifts[i].x, w, interpolation, boundary);
    }
    for (int y = 0; y < h; ++y) {
      const Taps ty = make_taps(y - shifts[i].y, h, interpolation, boundary);
      if (ty.count == 0) continue;
      for (int x = 0; x < w; ++x) {
        const Taps& tx = xtaps[static_cast<std::size_t>(x)];
        if (tx.count == 0) continue;
        count[static_cast<std::size_t>(y) * w + x] += 1.0;
        for (int c = 0; c < nc; ++c) {
          double v = 0.0;
          for (int a = 0; a < ty.count; ++a) {
            for (int b = 0; b < tx.count; ++b) {
              v += ty.weight[a] * tx.weight[b] * src.at(tx.index[b], ty.index[a], c);
            }
          }
          acc.at(x, y, c) += v;
        }
      }
    }
  }

  if (normalization == Normalization::mean) {
    for (int c = 0; c < nc; ++c) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double n = count[static_cast<std::size_t>(y) * w + x];
          acc.at(x, y, c) = n > 0.0 ? acc.at(x, y, c) / n : 0.0;
        }
      }
    }
  }
  return acc;
}

Image refocus(const LightField& field, const RefocusConfig& config) {
  require(!field.empty(), "cannot refocus an empty light field");
  config.validate();
  const CameraArrayGeometry& g = field.geometry();
  std::vector<Vec2> shifts;
  shifts.reserve(static_cast<std::size_t>(field.view_count()));
  for (int i = 0; i < field.view_count(); ++i) shifts.push_back(shift_for_view(g.view_at(i), config, g));
  return shift_and_add(field.views(), shifts, config.interpolation, config.normalization,
                       config.boundary);
}

}  // namespace scatterfield
