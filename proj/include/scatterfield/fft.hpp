#pragma once

#include <complex>
#include <span>
#include <vector>

namespace scatterfield::fft {

/// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7.
int next_fast_size(int n);

/// Real 2-D transform of a fixed size. Buffers are owned per instance, so
/// distinct instances may run on different threads; plan creation is
/// serialized internally.
class RealTransform2D {
 public:
  RealTransform2D(int width, int height);
  ~RealTransform2D();
  RealTransform2D(const RealTransform2D&) = delete;
  RealTransform2D& operator=(const RealTransform2D&) = delete;

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  /// Half-spectrum width (width / 2 + 1); spectra are height x spectrum_width.
  int spectrum_width() const noexcept { return width_ / 2 + 1; }

  /// Unnormalized forward transform of a width*height row-major array.
  std::vector<std::complex<double>> forward(std::span<const double> input);
  /// Inverse transform including the 1/(width*height) normalization.
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum);

 private:
  int width_;
  int height_;
  double* real_ = nullptr;
  void* complex_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace scatterfield::fft
