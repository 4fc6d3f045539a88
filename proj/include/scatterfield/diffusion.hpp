#pragma once

#include <limits>

#include "scatterfield/image.hpp"

namespace scatterfield {

/// Homogeneous medium: absorption mu_a, scattering mu_s (both 1/m) and the
/// Henyey-Greenstein anisotropy g.
struct MediumParams {
  double mu_a = 0.0;
  double mu_s = 0.0;
  double g = 0.0;

  /// mu_a >= 0, mu_s >= 0, g in [0, 1). Vacuum (mu_s = 0) is allowed here.
  void validate() const;
  /// Additionally requires mu_s > 0, as the diffusion model does.
  void validate_scattering() const;

  double mu_t() const noexcept { return mu_a + mu_s; }
};

struct DiffusionCoefficients {
  double diffusion = 0.0;       // D = 1 / (3 (mu_a + mu_s (1 - g)))
  double reduced_scattering = 0.0;  // mu_s' = mu_s (1 - g)
  double effective_attenuation = 0.0;  // mu_eff = mu_a + mu_s'
  double transport_mean_free_path = 0.0;  // l_t = 1 / mu_s'
};

/// Throws degenerate-medium when mu_a + mu_s' = 0. l_t is +inf when mu_s' = 0.
DiffusionCoefficients derive_coefficients(double mu_a, double mu_s, double g);
inline DiffusionCoefficients derive_coefficients(const MediumParams& m) {
  return derive_coefficients(m.mu_a, m.mu_s, m.g);
}

/// Beer-Lambert ballistic survival exp(-mu_s * z).
double attenuation_ratio(double mu_s, double path_length);

/// Absorption substituted for mu_a = 0 so the Green's function decays.
double absorption_floor(const MediumParams& medium);
MediumParams with_absorption_floor(MediumParams medium);

/// Diffusion Green's function with an image source at mirror distance d:
/// (exp(-k r) + exp(-k (r + 2d))) / (2 sqrt(mu_a D)), k = sqrt(mu_a / D).
/// d = +inf drops the mirror term. Throws needs-regularization for mu_a <= 0.
double green_profile(double r, double mu_a, double diffusion,
                     double mirror_distance = std::numeric_limits<double>::infinity());

struct KernelOptions {
  double pixel_scale = 1.0;      // m per kernel pixel
  double truncation_eps = 1e-3;  // profile(R) / profile(0) <= eps at the edge
  double mirror_distance = std::numeric_limits<double>::infinity();
  int max_width = 1025;
  bool normalize = true;
};

/// Rasterized radially symmetric diffuse kernel.
struct DiffuseKernel {
  Image samples;  // odd square, single channel, centre is the maximum
  double pixel_scale = 1.0;
  MediumParams params;  // medium actually used (absorption floor applied)
  double mirror_distance = std::numeric_limits<double>::infinity();
  bool normalized = false;

  int width() const noexcept { return samples.width(); }
  int half_width() const noexcept { return samples.width() / 2; }
};

/// Samples green_profile(|offset| * pixel_scale) out to the smallest radius
/// where the profile has dropped to truncation_eps of its peak. Decay within
/// one pixel gives the 1x1 kernel [1]. mu_a = 0 is replaced by the floor.
DiffuseKernel rasterize_kernel(const MediumParams& params, const KernelOptions& options);

}  // namespace scatterfield
