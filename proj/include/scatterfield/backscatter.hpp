#pragma once

#include <vector>

#include "scatterfield/deconv.hpp"
#include "scatterfield/diffusion.hpp"
#include "scatterfield/image.hpp"

namespace scatterfield {

/// Atmosphere (airlight) B_inf, one value per channel in [0, 1].
struct AtmosphereEstimate {
  std::vector<double> b_inf;

  void validate() const;
};

/// Medium transmission t(s,t), single channel, values in [t_min, 1].
struct TransmissionMap {
  Image t;
  double t_min = 0.1;
};

struct DcpConfig {
  int window = 15;                       // odd, pixels
  double omega = 0.95;                   // haze retention
  double t_min = 0.1;                    // transmission clamp
  double atmosphere_fraction = 0.001;    // brightest share of the dark channel

  void validate() const;
};

/// Per-pixel channel minimum followed by an edge-replicated window minimum.
Image dark_channel(const Image& image, int window);

/// Mean of the image over the brightest `atmosphere_fraction` of dark-channel
/// pixels. Falls back to the brightest pixel when the selection is empty.
AtmosphereEstimate estimate_atmosphere(const Image& image, const Image& dark, const DcpConfig& config);

/// t = clamp(1 - omega * dark_channel(image / B), t_min, 1).
TransmissionMap estimate_transmission(const Image& image, const AtmosphereEstimate& atmosphere,
                                      const DcpConfig& config);

/// image - B (1 - t), clamped to >= 0.
Image remove_backscatter(const Image& image, const AtmosphereEstimate& atmosphere,
                         const TransmissionMap& transmission);

enum class LuminousMode { self_luminous, passive };

struct DlimjConfig {
  LuminousMode mode = LuminousMode::self_luminous;
  DcpConfig dcp;
  WienerConfig wiener;
  /// Ballistic path length (m) used for the self-luminous attenuation
  /// gamma = exp(-mu_s z); mu_s comes from the kernel's medium.
  double path_length = 0.0;
};

struct DlimjResult {
  Image reconstruction;
  TransmissionMap transmission;
  AtmosphereEstimate atmosphere;
  double gamma = 1.0;  // scalar attenuation used in self-luminous mode
};

/// Full inversion of a refocused scattering image.
///
/// Passive: DCP estimates B and t on the refocused image, the backscatter term
/// is removed, the remainder is Wiener-deconvolved and divided by
/// max(t, t_min). Whether the kernel carries the ballistic impulse is
/// config.wiener.include_ballistic_impulse in both modes.
/// Self-luminous: no airlight; the deconvolved image is divided by the scalar
/// Beer-Lambert gamma.
DlimjResult reconstruct_dlimj(const Image& refocused, const DiffuseKernel& kernel,
                              const DlimjConfig& config);

}  // namespace scatterfield
