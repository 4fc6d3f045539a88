#include "scatterfield/diffusion.hpp"

#include <cmath>
#include <string>

#include "scatterfield/error.hpp"

namespace scatterfield {

void MediumParams::validate() const {
  require(std::isfinite(mu_a) && mu_a >= 0.0, "mu_a must be >= 0");
  require(std::isfinite(mu_s) && mu_s >= 0.0, "mu_s must be >= 0");
  require(std::isfinite(g) && g >= 0.0 && g < 1.0, "anisotropy g must lie in [0, 1)");
}

void MediumParams::validate_scattering() const {
  validate();
  require(mu_s > 0.0, "mu_s must be > 0");
}

DiffusionCoefficients derive_coefficients(double mu_a, double mu_s, double g) {
  MediumParams{mu_a, mu_s, g}.validate();
  DiffusionCoefficients c;
  c.reduced_scattering = mu_s * (1.0 - g);
  c.effective_attenuation = mu_a + c.reduced_scattering;
  if (!(c.effective_attenuation > 0.0)) {
    fail(ErrorCode::degenerate_medium, "mu_a + mu_s(1 - g) = 0, diffusion coefficient undefined");
  }
  c.diffusion = 1.0 / (3.0 * c.effective_attenuation);
  c.transport_mean_free_path = c.reduced_scattering > 0.0
                                   ? 1.0 / c.reduced_scattering
                                   : std::numeric_limits<double>::infinity();
  return c;
}

double attenuation_ratio(double mu_s, double path_length) {
  require(std::isfinite(mu_s) && mu_s >= 0.0, "mu_s must be >= 0");
  require(std::isfinite(path_length) && path_length >= 0.0, "path length must be >= 0");
  return std::exp(-mu_s * path_length);
}

double absorption_floor(const MediumParams& medium) {
  return 1e-4 * medium.mu_s * (1.0 - medium.g);
}

MediumParams with_absorption_floor(MediumParams medium) {
  if (medium.mu_a <= 0.0) medium.mu_a = absorption_floor(medium);
  return medium;
}

double green_profile(double r, double mu_a, double diffusion, double mirror_distance) {
  require(std::isfinite(r) && r >= 0.0, "radius must be >= 0");
  if (!(mu_a > 0.0)) {
    fail(ErrorCode::needs_regularization, "green profile needs mu_a > 0 (apply the absorption floor)");
  }
  require(std::isfinite(diffusion) && diffusion > 0.0, "diffusion coefficient must be > 0");
  require(!std::isnan(mirror_distance) && mirror_distance >= 0.0, "mirror distance must be >= 0");
  const double kappa = std::sqrt(mu_a / diffusion);
  const double scale = 1.0 / (2.0 * std::sqrt(mu_a * diffusion));
  double value = std::exp(-kappa * r);
  if (std::isfinite(mirror_distance)) value += std::exp(-kappa * (r + 2.0 * mirror_distance));
  return scale * value;
}

DiffuseKernel rasterize_kernel(const MediumParams& params, const KernelOptions& options) {
  params.validate_scattering();
  require(std::isfinite(options.pixel_scale) && options.pixel_scale > 0.0, "kernel pixel scale must be > 0");
  require(options.truncation_eps > 0.0 && options.truncation_eps < 0.1,
          "truncation eps must lie in (0, 0.1)");
  require(options.max_width >= 1, "max kernel width must be >= 1");

  const MediumParams medium = with_absorption_floor(params);
  const double d = derive_coefficients(medium).diffusion;
  const double d_mirror = options.mirror_distance;
  const double peak = green_profile(0.0, medium.mu_a, d, d_mirror);
  const auto ratio = [&](double r_px) {
    return green_profile(r_px * options.pixel_scale, medium.mu_a, d, d_mirror) / peak;
  };

  int radius = 0;
  if (ratio(1.0) > options.truncation_eps) {
    const double kappa = std::sqrt(medium.mu_a / d);
    const double estimate = std::ceil(std::log(1.0 / options.truncation_eps) / (kappa * options.pixel_scale));
    const double limit = 0.5 * (static_cast<double>(options.max_width) - 1.0);
    if (!(estimate <= limit + 1.0)) {
      fail(ErrorCode::kernel_too_large,
           "diffuse kernel would exceed " + std::to_string(options.max_width) + " px");
    }
    radius = std::max(1, static_cast<int>(estimate));
    // Exact search around the closed-form estimate.
    while (radius > 1 && ratio(radius - 1) <= options.truncation_eps) --radius;
    while (ratio(radius) > options.truncation_eps) ++radius;
  }
  const int width = 2 * radius + 1;
  if (width > options.max_width) {
    fail(ErrorCode::kernel_too_large,
         "diffuse kernel width " + std::to_string(width) + " exceeds " +
             std::to_string(options.max_width) + " px");
  }

  DiffuseKernel kernel;
  kernel.samples = Image(width, width, 1);
  kernel.pixel_scale = options.pixel_scale;
  kernel.params = medium;
  kernel.mirror_distance = d_mirror;
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      const double r = std::sqrt(static_cast<double>(x * x + y * y)) * options.pixel_scale;
      kernel.samples.at(x + radius, y + radius) = green_profile(r, medium.mu_a, d, d_mirror);
    }
  }
  if (options.normalize) {
    kernel.samples *= 1.0 / kernel.samples.sum();
    kernel.normalized = true;
  }
  return kernel;
}

}  // namespace scatterfield
