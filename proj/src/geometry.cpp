#include "scatterfield/geometry.hpp"

#include <cmath>

#include "scatterfield/error.hpp"

namespace scatterfield {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void CameraArrayGeometry::validate() const {
  require(grid_u >= 1 && grid_v >= 1, "camera grid must be at least 1x1");
  require(positive_finite(baseline), "baseline must be > 0");
  require(positive_finite(focal_length), "focal length must be > 0");
  require(positive_finite(pixel_pitch), "pixel pitch must be > 0");
  require(positive_finite(object_depth), "object depth must be > 0");
}

void ObjectPlane::validate() const {
  require(positive_finite(pixel_scale), "object-plane pixel scale must be > 0");
  require(std::isfinite(origin.x) && std::isfinite(origin.y), "object-plane origin must be finite");
}

Vec2 project_to_sensor(Vec2 point, double depth, ViewIndex view,
                       const CameraArrayGeometry& geometry) {
  require(std::isfinite(point.x) && std::isfinite(point.y), "object point must be finite");
  require(positive_finite(depth), "projection depth must be > 0");
  require(geometry.contains(view), "view index outside the camera grid");
  const Vec2 c = geometry.camera_center(view);
  const double m = geometry.focal_length / (depth * geometry.pixel_pitch);
  return {m * (point.x - c.x), m * (point.y - c.y)};
}

Vec2 map_object_to_sensor(Vec2 point, ViewIndex view, const CameraArrayGeometry& geometry) {
  geometry.validate();
  return project_to_sensor(point, geometry.object_depth, view, geometry);
}

LightField::LightField(CameraArrayGeometry geometry, std::vector<Image> views)
    : geometry_(geometry), views_(std::move(views)) {
  geometry_.validate();
  if (static_cast<int>(views_.size()) != geometry_.view_count()) {
    fail(ErrorCode::dimension_mismatch, "light field view count does not match the camera grid");
  }
  for (const Image& v : views_) {
    require(!v.empty(), "light field views must be non-empty");
    if (!v.same_shape(views_.front())) {
      fail(ErrorCode::dimension_mismatch, "light field views differ in shape");
    }
  }
}

LightField LightField::zeros(const CameraArrayGeometry& geometry, int width, int height,
                             int channels) {
  std::vector<Image> views(static_cast<std::size_t>(geometry.view_count()),
                           Image(width, height, channels));
  return LightField(geometry, std::move(views));
}

LightField& LightField::operator+=(const LightField& other) {
  require(views_.size() == other.views_.size(), "light field size mismatch in +=");
  for (std::size_t i = 0; i < views_.size(); ++i) views_[i] += other.views_[i];
  return *this;
}

LightField& LightField::operator*=(double scale) {
  for (Image& v : views_) v *= scale;
  return *this;
}

}  // namespace scatterfield
