#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "scatterfield/diffusion.hpp"
#include "scatterfield/geometry.hpp"
#include "scatterfield/image.hpp"
#include "scatterfield/refocus.hpp"

namespace scatterfield {

enum class Padding { zero, periodic };

/// 2-D convolution with a centred single-channel kernel, evaluated through
/// the FFT. Zero padding yields the linear ("same"-sized) convolution and
/// requires the kernel to fit inside the image; periodic wraps around.
Image conv2(const Image& image, const Image& kernel, Padding padding = Padding::zero);
Image conv2(const Image& image, const DiffuseKernel& kernel, Padding padding = Padding::zero);

/// Transform grid used by conv2 / wiener_deconv for the given shapes.
struct TransformShape {
  int width = 0;
  int height = 0;
};
TransformShape transform_shape(int image_width, int image_height, int kernel_width,
                               int kernel_height, Padding padding);

struct WienerConfig {
  double zeta = 1e4;  // signal-to-noise weight; the regularizer is 1/zeta
  Padding padding = Padding::zero;
  bool include_ballistic_impulse = false;  // deconvolve with (kernel + delta)
  /// Optional frequency-dependent noise-to-signal ratio replacing 1/zeta.
  /// Arguments are signed frequencies in cycles per pixel.
  std::function<double(double, double)> noise_to_signal;

  void validate() const;
};

/// Wiener inversion conj(K) F[J*] / (|K|^2 + 1/zeta) on the padded grid,
/// cropped back to the input size and clamped to >= 0.
Image wiener_deconv(const Image& image, const Image& kernel, const WienerConfig& config);
Image wiener_deconv(const Image& image, const DiffuseKernel& kernel, const WienerConfig& config);

/// Kernel with a unit impulse added at its centre.
Image with_ballistic_impulse(Image kernel);

/// Dense 4-D filter over (du, dv, ds, dt) offsets; every extent is odd and the
/// centre sample sits at offset zero.
class Kernel4D {
 public:
  Kernel4D() = default;
  Kernel4D(int extent_u, int extent_v, int extent_s, int extent_t, double fill = 0.0);

  static Kernel4D impulse();

  int extent_u() const noexcept { return eu_; }
  int extent_v() const noexcept { return ev_; }
  int extent_s() const noexcept { return es_; }
  int extent_t() const noexcept { return et_; }
  int half_u() const noexcept { return eu_ / 2; }
  int half_v() const noexcept { return ev_ / 2; }
  int half_s() const noexcept { return es_ / 2; }
  int half_t() const noexcept { return et_ / 2; }

  /// Access by signed offsets.
  double& at(int du, int dv, int ds, int dt) { return data_[index(du, dv, ds, dt)]; }
  double at(int du, int dv, int ds, int dt) const { return data_[index(du, dv, ds, dt)]; }

  /// Spatial slice at angular offset (du, dv) as an extent_s x extent_t image.
  Image slice(int du, int dv) const;

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t index(int du, int dv, int ds, int dt) const noexcept {
    const auto u = static_cast<std::size_t>(du + half_u());
    const auto v = static_cast<std::size_t>(dv + half_v());
    const auto s = static_cast<std::size_t>(ds + half_s());
    const auto t = static_cast<std::size_t>(dt + half_t());
    return ((v * static_cast<std::size_t>(eu_) + u) * static_cast<std::size_t>(et_) + t) *
               static_cast<std::size_t>(es_) +
           s;
  }

  int eu_ = 0, ev_ = 0, es_ = 0, et_ = 0;
  std::vector<double> data_;
};

/// Angular treatment in conv4d. `periodic` wraps the view grid; `extend`
/// computes the full linear convolution over views, growing the grid by the
/// kernel's angular extent minus one.
enum class AngularBoundary { periodic, extend };

struct Conv4dOptions {
  AngularBoundary angular = AngularBoundary::periodic;
  std::size_t budget = std::size_t{1} << 28;  // multiply-adds
};

/// Direct 4-D convolution; spatial axes always wrap periodically.
LightField conv4d(const LightField& field, const Kernel4D& kernel, const Conv4dOptions& options = {});

/// Refocus of a 4-D kernel: shift-and-add of its spatial slices with the
/// refocus shear, zero outside the kernel support.
Image refocus_kernel4d(const Kernel4D& kernel, const RefocusConfig& config,
                       const CameraArrayGeometry& geometry);

}  // namespace scatterfield
