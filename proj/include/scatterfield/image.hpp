#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace scatterfield {

/// Planar floating-point image. Samples are linear intensities; channel c
/// occupies a contiguous width*height plane in row-major order.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels = 1, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return samples_.empty(); }

  double& at(int x, int y, int c = 0) { return samples_[index(x, y, c)]; }
  double at(int x, int y, int c = 0) const { return samples_[index(x, y, c)]; }

  std::span<double> plane(int c);
  std::span<const double> plane(int c) const;
  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }

  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  /// Copy of a single channel as a one-channel image.
  Image channel(int c) const;
  void set_channel(int c, const Image& plane_image);

  double max_value() const;
  double sum() const;

  Image& operator+=(const Image& other);
  Image& operator-=(const Image& other);
  Image& operator*=(double scale);

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> samples_;
};

Image operator+(Image a, const Image& b);
Image operator-(Image a, const Image& b);
Image operator*(Image a, double scale);
Image operator*(double scale, Image a);

/// Throws invalid-argument unless every sample is finite and >= 0.
void validate_intensity(const Image& image, std::string_view what);

/// Rounds every sample through float32, the precision of the PFM interchange.
Image quantize_to_float(Image image);

/// Sets negative samples to zero.
Image clamp_non_negative(Image image);

}  // namespace scatterfield
