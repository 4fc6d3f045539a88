#include "scatterfield/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "scatterfield/error.hpp"

namespace scatterfield {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  require(width >= 1 && height >= 1, "image dimensions must be >= 1");
  require(channels == 1 || channels == 3, "image must have 1 or 3 channels");
  samples_.assign(plane_size() * static_cast<std::size_t>(channels), fill);
}

std::span<double> Image::plane(int c) {
  return std::span<double>(samples_).subspan(static_cast<std::size_t>(c) * plane_size(),
                                             plane_size());
}

std::span<const double> Image::plane(int c) const {
  return std::span<const double>(samples_).subspan(static_cast<std::size_t>(c) * plane_size(),
                                                   plane_size());
}

Image Image::channel(int c) const {
  require(c >= 0 && c < channels_, "channel index out of range");
  Image out(width_, height_, 1);
  std::ranges::copy(plane(c), out.samples_.begin());
  return out;
}

void Image::set_channel(int c, const Image& plane_image) {
  require(c >= 0 && c < channels_, "channel index out of range");
  require(plane_image.width() == width_ && plane_image.height() == height_ &&
              plane_image.channels() == 1,
          "channel plane shape mismatch");
  std::ranges::copy(plane_image.plane(0), plane(c).begin());
}

double Image::max_value() const {
  return samples_.empty() ? 0.0 : *std::ranges::max_element(samples_);
}

double Image::sum() const { return std::accumulate(samples_.begin(), samples_.end(), 0.0); }

Image& Image::operator+=(const Image& other) {
  require(same_shape(other), "image shape mismatch in +=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

Image& Image::operator-=(const Image& other) {
  require(same_shape(other), "image shape mismatch in -=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

Image& Image::operator*=(double scale) {
  for (double& s : samples_) s *= scale;
  return *this;
}

Image operator+(Image a, const Image& b) { return a += b; }
Image operator-(Image a, const Image& b) { return a -= b; }
Image operator*(Image a, double scale) { return a *= scale; }
Image operator*(double scale, Image a) { return a *= scale; }

void validate_intensity(const Image& image, std::string_view what) {
  require(!image.empty(), std::string(what) + ": image is empty");
  for (double s : image.samples()) {
    if (!std::isfinite(s) || s < 0.0) {
      fail(ErrorCode::invalid_argument,
           std::string(what) + ": samples must be finite and non-negative");
    }
  }
}

Image quantize_to_float(Image image) {
  for (double& s : image.samples()) s = static_cast<double>(static_cast<float>(s));
  return image;
}

Image clamp_non_negative(Image image) {
  for (double& s : image.samples()) s = std::max(s, 0.0);
  return image;
}

}  // namespace scatterfield
