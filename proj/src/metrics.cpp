#include "scatterfield/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "scatterfield/error.hpp"

namespace scatterfield {

namespace {

void check_pair(const Image& a, const Image& b) {
  require(!a.empty() && !b.empty(), "metrics need non-empty images");
  require(a.same_shape(b), "metric inputs differ in dimensions");
}

// Valid-region separable filtering of one plane with a normalized 1-D window.
std::vector<double> filter_valid(std::span<const double> plane, int w, int h,
                                 const std::vector<double>& taps, int& out_w, int& out_h) {
  const int n = static_cast<int>(taps.size());
  out_w = w - n + 1;
  out_h = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(out_w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += taps[static_cast<std::size_t>(k)] * plane[static_cast<std::size_t>(y) * w + x + k];
      rows[static_cast<std::size_t>(y) * out_w + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += taps[static_cast<std::size_t>(k)] * rows[static_cast<std::size_t>(y + k) * out_w + x];
      out[static_cast<std::size_t>(y) * out_w + x] = s;
    }
  }
  return out;
}

double ssim_plane(std::span<const double> a, std::span<const double> b, int w, int h,
                  const SsimOptions& opt) {
  int window = std::min({opt.window, w, h});
  if (window % 2 == 0) --window;
  std::vector<double> taps(static_cast<std::size_t>(window));
  const int half = window / 2;
  double norm = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double v = std::exp(-0.5 * k * k / (opt.sigma * opt.sigma));
    taps[static_cast<std::size_t>(k + half)] = v;
    norm += v;
  }
  for (double& t : taps) t /= norm;

  const std::size_t n = a.size();
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  int ow = 0, oh = 0;
  const auto mu_a = filter_valid(a, w, h, taps, ow, oh);
  const auto mu_b = filter_valid(b, w, h, taps, ow, oh);
  const auto e_aa = filter_valid(aa, w, h, taps, ow, oh);
  const auto e_bb = filter_valid(bb, w, h, taps, ow, oh);
  const auto e_ab = filter_valid(ab, w, h, taps, ow, oh);

  const double c1 = (opt.k1 * opt.max_value) * (opt.k1 * opt.max_value);
  const double c2 = (opt.k2 * opt.max_value) * (opt.k2 * opt.max_value);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
    const double den = (ma * ma + mb * mb + c1) * (va + vb + c2);
    total += num / den;
  }
  return std::clamp(total / static_cast<double>(mu_a.size()), -1.0, 1.0);
}

}  // namespace

double psnr(const Image& a, const Image& b, double max_value) {
  check_pair(a, b);
  require(std::isfinite(max_value) && max_value > 0.0, "PSNR max value must be > 0");
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    const auto pa = a.plane(c);
    const auto pb = b.plane(c);
    double mse = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      const double d = pa[i] - pb[i];
      mse += d * d;
    }
    mse /= static_cast<double>(pa.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    total += 10.0 * std::log10(max_value * max_value / mse);
  }
  return total / a.channels();
}

double ssim(const Image& a, const Image& b, const SsimOptions& options) {
  check_pair(a, b);
  require(options.window >= 1 && options.window % 2 == 1, "SSIM window must be odd");
  require(options.sigma > 0.0 && options.max_value > 0.0, "SSIM sigma and max value must be > 0");
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    total += ssim_plane(a.plane(c), b.plane(c), a.width(), a.height(), options);
  }
  return total / a.channels();
}

QualityReport evaluate_quality(const Image& reconstruction, const Image& truth, double max_value) {
  SsimOptions options;
  options.max_value = max_value;
  return {psnr(reconstruction, truth, max_value), ssim(reconstruction, truth, options)};
}

}  // namespace scatterfield
