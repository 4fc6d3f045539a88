#pragma once

#include <vector>

#include "scatterfield/image.hpp"

namespace scatterfield {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Grid position of a view. (0,0) is the grid corner; u runs along x, v along y.
struct ViewIndex {
  int u = 0;
  int v = 0;
};

/// Rectified camera array: pinhole cameras on a regular grid in a plane
/// parallel to the object plane, all sensors coplanar.
struct CameraArrayGeometry {
  int grid_u = 1;
  int grid_v = 1;
  double baseline = 0.0;      // m between adjacent camera centres
  double focal_length = 0.0;  // m
  double pixel_pitch = 0.0;   // m per sensor pixel
  double object_depth = 0.0;  // m from object plane to camera plane

  void validate() const;
  int view_count() const noexcept { return grid_u * grid_v; }
  bool contains(ViewIndex view) const noexcept {
    return view.u >= 0 && view.u < grid_u && view.v >= 0 && view.v < grid_v;
  }
  int linear_index(ViewIndex view) const noexcept { return view.v * grid_u + view.u; }
  ViewIndex view_at(int linear) const noexcept { return {linear % grid_u, linear / grid_u}; }

  /// Offset of the view from the array centre, in baselines (half-integers
  /// for even grids).
  Vec2 view_offset(ViewIndex view) const noexcept {
    return {view.u - 0.5 * (grid_u - 1), view.v - 0.5 * (grid_v - 1)};
  }

  /// Camera centre relative to the array centre, in metres.
  Vec2 camera_center(ViewIndex view) const noexcept {
    const Vec2 o = view_offset(view);
    return {o.x * baseline, o.y * baseline};
  }

  /// Object-plane metres per sensor pixel at `depth` from the camera plane.
  double object_pixel_scale(double depth) const noexcept {
    return depth * pixel_pitch / focal_length;
  }
  double object_pixel_scale() const noexcept { return object_pixel_scale(object_depth); }
};

/// Fronto-parallel plane in object space sampled on a pixel grid.
struct ObjectPlane {
  double pixel_scale = 1.0;  // m per object-plane pixel
  Vec2 origin;               // m, offset of the grid centre from the optical axis

  void validate() const;
};

/// Sensor displacement (pixels, relative to the sensor centre) of an
/// object-plane point seen through the pinhole of `view`. Not rounded.
Vec2 map_object_to_sensor(Vec2 point, ViewIndex view, const CameraArrayGeometry& geometry);

/// Same projection for an arbitrary depth (m from the camera plane).
Vec2 project_to_sensor(Vec2 point, double depth, ViewIndex view,
                       const CameraArrayGeometry& geometry);

/// A 4-D light field L(u,v,s,t): one image per camera, all of equal shape.
class LightField {
 public:
  LightField() = default;
  LightField(CameraArrayGeometry geometry, std::vector<Image> views);

  /// All-zero field with the given per-view shape.
  static LightField zeros(const CameraArrayGeometry& geometry, int width, int height,
                          int channels = 1);

  const CameraArrayGeometry& geometry() const noexcept { return geometry_; }
  int view_count() const noexcept { return static_cast<int>(views_.size()); }
  int width() const noexcept { return views_.empty() ? 0 : views_.front().width(); }
  int height() const noexcept { return views_.empty() ? 0 : views_.front().height(); }
  int channels() const noexcept { return views_.empty() ? 0 : views_.front().channels(); }
  bool empty() const noexcept { return views_.empty(); }

  const Image& view(ViewIndex index) const { return views_.at(geometry_.linear_index(index)); }
  Image& view(ViewIndex index) { return views_.at(geometry_.linear_index(index)); }
  const Image& view(int linear) const { return views_.at(static_cast<std::size_t>(linear)); }
  Image& view(int linear) { return views_.at(static_cast<std::size_t>(linear)); }
  const std::vector<Image>& views() const noexcept { return views_; }

  LightField& operator+=(const LightField& other);
  LightField& operator*=(double scale);

 private:
  CameraArrayGeometry geometry_;
  std::vector<Image> views_;
};

}  // namespace scatterfield
