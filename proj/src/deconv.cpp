#include "scatterfield/deconv.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "scatterfield/error.hpp"
#include "scatterfield/fft.hpp"

namespace scatterfield {

namespace {

using Spectrum = std::vector<std::complex<double>>;

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

void check_kernel(const Image& kernel) {
  require(!kernel.empty() && kernel.channels() == 1, "kernel must be a single-channel image");
  require(kernel.width() % 2 == 1 && kernel.height() % 2 == 1, "kernel extents must be odd");
  for (double k : kernel.samples()) require(std::isfinite(k), "kernel samples must be finite");
}

// Kernel laid out on the transform grid with its centre at the origin.
std::vector<double> centred_kernel(const Image& kernel, const TransformShape& shape) {
  std::vector<double> grid(static_cast<std::size_t>(shape.width) * shape.height, 0.0);
  const int hw = kernel.width() / 2;
  const int hh = kernel.height() / 2;
  for (int y = 0; y < kernel.height(); ++y) {
    const int gy = wrap(y - hh, shape.height);
    for (int x = 0; x < kernel.width(); ++x) {
      const int gx = wrap(x - hw, shape.width);
      grid[static_cast<std::size_t>(gy) * shape.width + gx] += kernel.at(x, y);
    }
  }
  return grid;
}

std::vector<double> padded_plane(const Image& image, int c, const TransformShape& shape) {
  std::vector<double> grid(static_cast<std::size_t>(shape.width) * shape.height, 0.0);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      grid[static_cast<std::size_t>(y) * shape.width + x] = image.at(x, y, c);
    }
  }
  return grid;
}

void crop_into(const std::vector<double>& grid, const TransformShape& shape, Image& out, int c) {
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out.at(x, y, c) = grid[static_cast<std::size_t>(y) * shape.width + x];
    }
  }
}

}  // namespace

TransformShape transform_shape(int image_width, int image_height, int kernel_width,
                               int kernel_height, Padding padding) {
  if (padding == Padding::periodic) return {image_width, image_height};
  return {fft::next_fast_size(image_width + kernel_width - 1),
          fft::next_fast_size(image_height + kernel_height - 1)};
}

Image conv2(const Image& image, const Image& kernel, Padding padding) {
  require(!image.empty(), "conv2 needs a non-empty image");
  check_kernel(kernel);
  if (padding == Padding::zero) {
    require(kernel.width() <= image.width() && kernel.height() <= image.height(),
            "kernel larger than image in zero-pad mode");
  }
  const TransformShape shape =
      transform_shape(image.width(), image.height(), kernel.width(), kernel.height(), padding);
  fft::RealTransform2D transform(shape.width, shape.height);
  const Spectrum k_hat = transform.forward(centred_kernel(kernel, shape));

  Image out(image.width(), image.height(), image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    Spectrum x_hat = transform.forward(padded_plane(image, c, shape));
    for (std::size_t i = 0; i < x_hat.size(); ++i) x_hat[i] *= k_hat[i];
    crop_into(transform.inverse(x_hat), shape, out, c);
  }
  return out;
}

Image conv2(const Image& image, const DiffuseKernel& kernel, Padding padding) {
  return conv2(image, kernel.samples, padding);
}

void WienerConfig::validate() const {
  require(std::isfinite(zeta) && zeta > 0.0, "zeta must be finite and > 0");
}

Image with_ballistic_impulse(Image kernel) {
  check_kernel(kernel);
  kernel.at(kernel.width() / 2, kernel.height() / 2) += 1.0;
  return kernel;
}

Image wiener_deconv(const Image& image, const Image& kernel_in, const WienerConfig& config) {
  require(!image.empty(), "wiener_deconv needs a non-empty image");
  config.validate();
  check_kernel(kernel_in);
  const bool all_zero =
      std::ranges::all_of(kernel_in.samples(), [](double k) { return k == 0.0; });
  require(!all_zero, "wiener_deconv kernel is all zero");
  const Image kernel =
      config.include_ballistic_impulse ? with_ballistic_impulse(kernel_in) : kernel_in;

  const TransformShape shape = transform_shape(image.width(), image.height(), kernel.width(),
                                               kernel.height(), config.padding);
  fft::RealTransform2D transform(shape.width, shape.height);
  const Spectrum k_hat = transform.forward(centred_kernel(kernel, shape));

  // Per-frequency filter conj(K) / (|K|^2 + nsr).
  const int sw = transform.spectrum_width();
  Spectrum filter(k_hat.size());
  const double inv_zeta = 1.0 / config.zeta;
  for (int ky = 0; ky < shape.height; ++ky) {
    const double fy = static_cast<double>(ky <= shape.height / 2 ? ky : ky - shape.height) / shape.height;
    for (int kx = 0; kx < sw; ++kx) {
      const std::size_t i = static_cast<std::size_t>(ky) * sw + kx;
      double nsr = inv_zeta;
      if (config.noise_to_signal) {
        nsr = config.noise_to_signal(static_cast<double>(kx) / shape.width, fy);
        require(std::isfinite(nsr) && nsr >= 0.0, "noise-to-signal ratio must be finite and >= 0");
      }
      const double power = std::norm(k_hat[i]) + nsr;
      filter[i] = power > 0.0 ? std::conj(k_hat[i]) / power : std::complex<double>(0.0, 0.0);
    }
  }

  Image out(image.width(), image.height(), image.channels());
  for (int c = 0; c < image.channels(); ++c) {
    Spectrum x_hat = transform.forward(padded_plane(image, c, shape));
    for (std::size_t i = 0; i < x_hat.size(); ++i) x_hat[i] *= filter[i];
    crop_into(transform.inverse(x_hat), shape, out, c);
  }
  return clamp_non_negative(std::move(out));
}

Image wiener_deconv(const Image& image, const DiffuseKernel& kernel, const WienerConfig& config) {
  return wiener_deconv(image, kernel.samples, config);
}

Kernel4D::Kernel4D(int extent_u, int extent_v, int extent_s, int extent_t, double fill)
    : eu_(extent_u), ev_(extent_v), es_(extent_s), et_(extent_t) {
  for (int e : {extent_u, extent_v, extent_s, extent_t}) {
    require(e >= 1 && e % 2 == 1, "Kernel4D extents must be odd and >= 1");
  }
  data_.assign(static_cast<std::size_t>(eu_) * ev_ * es_ * et_, fill);
}

Kernel4D Kernel4D::impulse() {
  Kernel4D k(1, 1, 1, 1);
  k.at(0, 0, 0, 0) = 1.0;
  return k;
}

Image Kernel4D::slice(int du, int dv) const {
  Image out(es_, et_, 1);
  for (int dt = -half_t(); dt <= half_t(); ++dt) {
    for (int ds = -half_s(); ds <= half_s(); ++ds) {
      out.at(ds + half_s(), dt + half_t()) = at(du, dv, ds, dt);
    }
  }
  return out;
}

LightField conv4d(const LightField& field, const Kernel4D& kernel, const Conv4dOptions& options) {
  require(!field.empty(), "conv4d needs a non-empty light field");
  require(!kernel.data().empty(), "conv4d needs a non-empty kernel");
  for (double k : kernel.data()) require(std::isfinite(k), "Kernel4D samples must be finite");

  const CameraArrayGeometry& g = field.geometry();
  CameraArrayGeometry out_geometry = g;
  if (options.angular == AngularBoundary::extend) {
    out_geometry.grid_u = g.grid_u + kernel.extent_u() - 1;
    out_geometry.grid_v = g.grid_v + kernel.extent_v() - 1;
  }
  const int w = field.width();
  const int h = field.height();
  const int nc = field.channels();

  const double work = static_cast<double>(out_geometry.view_count()) * w * h * nc *
                      static_cast<double>(kernel.data().size());
  if (work > static_cast<double>(options.budget)) {
    fail(ErrorCode::too_large, "conv4d work of " + std::to_string(static_cast<long long>(work)) +
                                   " multiply-adds exceeds the budget");
  }

  LightField out = LightField::zeros(out_geometry, w, h, nc);
  const int offset_u = options.angular == AngularBoundary::extend ? kernel.half_u() : 0;
  const int offset_v = options.angular == AngularBoundary::extend ? kernel.half_v() : 0;

  for (int ov = 0; ov < out_geometry.grid_v; ++ov) {
    for (int ou = 0; ou < out_geometry.grid_u; ++ou) {
      Image& dst = out.view(ViewIndex{ou, ov});
      for (int dv = -kernel.half_v(); dv <= kernel.half_v(); ++dv) {
        for (int du = -kernel.half_u(); du <= kernel.half_u(); ++du) {
          int iu = ou - offset_u - du;
          int iv = ov - offset_v - dv;
          if (options.angular == AngularBoundary::periodic) {
            iu = wrap(iu, g.grid_u);
            iv = wrap(iv, g.grid_v);
          } else if (iu < 0 || iu >= g.grid_u || iv < 0 || iv >= g.grid_v) {
            continue;
          }
          const Image& src = field.view(ViewIndex{iu, iv});
          for (int dt = -kernel.half_t(); dt <= kernel.half_t(); ++dt) {
            for (int ds = -kernel.half_s(); ds <= kernel.half_s(); ++ds) {
              const double k = kernel.at(du, dv, ds, dt);
              if (k == 0.0) continue;
              for (int c = 0; c < nc; ++c) {
                for (int y = 0; y < h; ++y) {
                  const int sy = wrap(y - dt, h);
                  for (int x = 0; x < w; ++x) {
                    dst.at(x, y, c) += k * src.at(wrap(x - ds, w), sy, c);
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

Image refocus_kernel4d(const Kernel4D& kernel, const RefocusConfig& config,
                       const CameraArrayGeometry& geometry) {
  require(!kernel.data().empty(), "refocus_kernel4d needs a non-empty kernel");
  const double disparity = disparity_per_baseline(config, geometry);
  require(std::isfinite(disparity), "refocus disparity must be finite");

  const int margin_x = static_cast<int>(std::ceil(kernel.half_u() * std::abs(disparity)));
  const int margin_y = static_cast<int>(std::ceil(kernel.half_v() * std::abs(disparity)));
  const int half_x = kernel.half_s() + margin_x;
  const int half_y = kernel.half_t() + margin_y;
  // One extra pixel of zero margin so bilinear taps stay inside the canvas.
  const int pad_x = half_x + 1;
  const int pad_y = half_y + 1;

  std::vector<Image> slices;
  std::vector<Vec2> shifts;
  for (int dv = -kernel.half_v(); dv <= kernel.half_v(); ++dv) {
    for (int du = -kernel.half_u(); du <= kernel.half_u(); ++du) {
      Image canvas(2 * pad_x + 1, 2 * pad_y + 1, 1);
      for (int dt = -kernel.half_t(); dt <= kernel.half_t(); ++dt) {
        for (int ds = -kernel.half_s(); ds <= kernel.half_s(); ++ds) {
          canvas.at(pad_x + ds, pad_y + dt) = kernel.at(du, dv, ds, dt);
        }
      }
      slices.push_back(std::move(canvas));
      shifts.push_back({du * disparity, dv * disparity});
    }
  }
  Image summed = shift_and_add(slices, shifts, config.interpolation, Normalization::sum,
                               RefocusBoundary::absent);
  if (config.normalization == Normalization::mean) summed *= 1.0 / static_cast<double>(slices.size());

  // Drop the guard ring.
  Image out(2 * half_x + 1, 2 * half_y + 1, 1);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out.at(x, y) = summed.at(x + 1, y + 1);
  }
  return out;
}

}  // namespace scatterfield
