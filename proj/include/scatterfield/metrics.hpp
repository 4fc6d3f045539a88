#pragma once

#include "scatterfield/image.hpp"

namespace scatterfield {

struct QualityReport {
  double psnr_db = 0.0;  // +inf for identical images
  double ssim = 0.0;     // in [-1, 1]
};

/// 10 log10(max^2 / MSE), averaged over channels; +inf when MSE = 0.
double psnr(const Image& a, const Image& b, double max_value = 1.0);

struct SsimOptions {
  int window = 11;     // odd Gaussian window extent
  double sigma = 1.5;  // Gaussian sigma in pixels
  double k1 = 0.01;
  double k2 = 0.03;
  double max_value = 1.0;
};

/// Mean SSIM over every window position that fits inside the image, averaged
/// over channels. Windows larger than the image shrink to the image's odd size.
double ssim(const Image& a, const Image& b, const SsimOptions& options = {});

QualityReport evaluate_quality(const Image& reconstruction, const Image& truth,
                               double max_value = 1.0);

}  // namespace scatterfield
