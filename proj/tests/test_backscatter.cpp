#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scatterfield/backscatter.hpp"
#include "scatterfield/error.hpp"
#include "scatterfield/metrics.hpp"

using namespace scatterfield;

namespace {

// Colour image whose every pixel has one zero channel, so the dark channel
// of the clean image is exactly zero.
Image dark_prior_image(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int zero = static_cast<int>((x / 6 + y / 6) % 3);
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = c == zero ? 0.0 : u(rng);
    }
  }
  return img;
}

DiffuseKernel delta_kernel() {
  DiffuseKernel k;
  k.samples = Image(1, 1, 1, 1.0);
  k.params = {0.1, 1.0, 0.0};
  k.normalized = true;
  return k;
}

DiffuseKernel diffuse_kernel() {
  KernelOptions o;
  o.pixel_scale = 1.0;
  return rasterize_kernel({0.15, 1.0, 0.0}, o);
}

// Forward model: J* = (t J) conv (K + delta) + B (1 - t), constant t.
Image hazy(const Image& truth, const DiffuseKernel& k, double t, double b) {
  Image out = conv2(truth * t, with_ballistic_impulse(k.samples));
  for (double& v : out.samples()) v += b * (1.0 - t);
  return out;
}

}  // namespace

TEST(DarkChannel, ConstantAndWhite) {
  const Image gray(9, 7, 3, 0.4);
  for (double v : oracle::values(dark_channel(gray, 5))) EXPECT_DOUBLE_EQ(v, 0.4);
  for (double v : oracle::values(dark_channel(Image(9, 7, 3, 1.0), 15))) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(DarkChannel, MatchesBruteForceMinFilter) {
  Image img(9, 9, 1, 1.0);
  img.at(4, 4) = 0.0;
  const Image d = dark_channel(img, 3);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) EXPECT_EQ(d.at(x, y), (std::abs(x - 4) <= 1 && std::abs(y - 4) <= 1) ? 0.0 : 1.0);
  }
  const Image r = oracle::random_image(13, 11, 5, 3);
  const Image dr = dark_channel(r, 5);
  for (int y = 0; y < 11; ++y) {
    for (int x = 0; x < 13; ++x) {
      double m = 1e9;
      for (int j = -2; j <= 2; ++j)
        for (int i = -2; i <= 2; ++i)
          for (int c = 0; c < 3; ++c) m = std::min(m, r.at(std::clamp(x + i, 0, 12), std::clamp(y + j, 0, 10), c));
      EXPECT_EQ(dr.at(x, y), m);
    }
  }
  EXPECT_THROW(dark_channel(img, 4), Error);
}

TEST(Atmosphere, UniformImage) {
  const Image img(30, 30, 3, 0.6);
  const AtmosphereEstimate a = estimate_atmosphere(img, dark_channel(img, 15), DcpConfig{});
  for (double b : a.b_inf) EXPECT_DOUBLE_EQ(b, 0.6);
}

TEST(Atmosphere, AirlightAroundDarkObject) {
  Image img(64, 64, 3);
  const double airlight[3] = {0.7, 0.8, 0.9};
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = (x > 20 && x < 40 && y > 20 && y < 40) ? 0.05 : airlight[c];
  DcpConfig cfg;
  cfg.atmosphere_fraction = 0.01;
  const AtmosphereEstimate a = estimate_atmosphere(img, dark_channel(img, cfg.window), cfg);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(a.b_inf[c], airlight[c], 1e-12);
}

TEST(Atmosphere, FullFractionIsGlobalMean) {
  const Image img = oracle::random_image(10, 10, 3, 3);
  DcpConfig cfg;
  cfg.atmosphere_fraction = 1.0;
  const AtmosphereEstimate a = estimate_atmosphere(img, dark_channel(img, 3), cfg);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(a.b_inf[c], img.channel(c).sum() / 100.0, 1e-12);
}

TEST(Atmosphere, EmptySelectionFallsBackToBrightestPixel) {
  Image img(10, 10, 1, 0.2);
  img.at(3, 4) = 0.9;
  const AtmosphereEstimate a = estimate_atmosphere(img, dark_channel(img, 1), DcpConfig{});
  EXPECT_DOUBLE_EQ(a.b_inf[0], 0.9);
}

TEST(Transmission, FormulaCases) {
  const Image clean = dark_prior_image(40, 40, 1);
  const AtmosphereEstimate b{{0.8, 0.8, 0.8}};
  for (double t : oracle::values(estimate_transmission(clean, b, DcpConfig{}).t)) EXPECT_DOUBLE_EQ(t, 1.0);

  const Image air(20, 20, 3, 0.8);
  DcpConfig cfg;
  cfg.t_min = 0.01;
  for (double t : oracle::values(estimate_transmission(air, b, cfg).t)) EXPECT_NEAR(t, 0.05, 1e-12);
  cfg.t_min = 0.1;
  for (double t : oracle::values(estimate_transmission(air, b, cfg).t)) EXPECT_DOUBLE_EQ(t, 0.1);
  cfg.omega = 0.0;
  for (double t : oracle::values(estimate_transmission(air, b, cfg).t)) EXPECT_DOUBLE_EQ(t, 1.0);

  EXPECT_THROW(estimate_transmission(air, AtmosphereEstimate{{0.8, 0.0, 0.8}}, DcpConfig{}), Error);
}

TEST(RemoveBackscatter, IdentityCases) {
  const Image img = oracle::random_image(12, 12, 9, 3);
  const TransmissionMap half{Image(12, 12, 1, 0.5), 0.1};
  EXPECT_EQ(oracle::max_abs_diff(remove_backscatter(img, {{0, 0, 0}}, half), img), 0.0);
  const TransmissionMap one{Image(12, 12, 1, 1.0), 0.1};
  EXPECT_EQ(oracle::max_abs_diff(remove_backscatter(img, {{0.5, 0.6, 0.7}}, one), img), 0.0);
}

TEST(RemoveBackscatter, RecoversForwardModelWithTrueParameters) {
  const Image truth = dark_prior_image(48, 48, 2);
  const DiffuseKernel k = diffuse_kernel();
  const Image signal = conv2(truth * 0.4, with_ballistic_impulse(k.samples));
  const Image input = hazy(truth, k, 0.4, 0.7);
  const Image out = remove_backscatter(input, {{0.7, 0.7, 0.7}}, {Image(48, 48, 1, 0.4), 0.1});
  EXPECT_LE(oracle::max_abs_diff(out, signal), 1e-10);
}

TEST(Dlimj, SelfLuminousRoundTrip) {
  KernelOptions o;
  o.pixel_scale = 1.0;
  const DiffuseKernel k = rasterize_kernel({0.05, 2.302585092994046, 0.0}, o);
  Image truth(128, 128, 1);
  const Image inner = oracle::random_image(128 - 2 * (k.half_width() + 1), 128 - 2 * (k.half_width() + 1), 3);
  for (int y = 0; y < inner.height(); ++y)
    for (int x = 0; x < inner.width(); ++x) truth.at(x + k.half_width() + 1, y + k.half_width() + 1) = inner.at(x, y);
  // gamma = exp(-mu_s * 1) = 0.1
  const Image input = conv2(truth * 0.1, with_ballistic_impulse(k.samples));
  DlimjConfig cfg;
  cfg.wiener.zeta = 1e8;
  cfg.wiener.include_ballistic_impulse = true;
  cfg.path_length = 1.0;
  const DlimjResult r = reconstruct_dlimj(input, k, cfg);
  EXPECT_NEAR(r.gamma, 0.1, 1e-12);
  EXPECT_GE(psnr(r.reconstruction, truth), 60.0);
}

TEST(Dlimj, PassiveWithoutAirlightMatchesSelfLuminous) {
  const DiffuseKernel k = diffuse_kernel();
  const Image input = dark_prior_image(48, 48, 4);
  DlimjConfig self;
  self.wiener.include_ballistic_impulse = true;
  DlimjConfig passive = self;
  passive.mode = LuminousMode::passive;
  const DlimjResult a = reconstruct_dlimj(input, k, self);
  const DlimjResult b = reconstruct_dlimj(input, k, passive);
  for (double t : b.transmission.t.samples()) EXPECT_EQ(t, 1.0);
  EXPECT_EQ(oracle::max_abs_diff(a.reconstruction, b.reconstruction), 0.0);
}

TEST(Dlimj, PassiveImprovesSsimOnHazyScene) {
  const Image truth = dark_prior_image(96, 96, 6);
  const DiffuseKernel k = diffuse_kernel();
  const Image input = hazy(truth, k, 0.5, 0.8);
  DlimjConfig cfg;
  cfg.mode = LuminousMode::passive;
  cfg.wiener.zeta = 1e3;
  cfg.wiener.include_ballistic_impulse = true;
  const DlimjResult r = reconstruct_dlimj(input, k, cfg);
  EXPECT_GT(ssim(r.reconstruction, truth), ssim(input, truth));
  for (double t : r.transmission.t.samples()) {
    EXPECT_GE(t, cfg.dcp.t_min);
    EXPECT_LE(t, 1.0);
  }
  for (double v : r.reconstruction.samples()) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, 0.0);
  }
}

TEST(Dlimj, CleanInputPassesThrough) {
  const Image truth = dark_prior_image(64, 64, 7);
  DlimjConfig cfg;
  cfg.mode = LuminousMode::passive;
  cfg.wiener.zeta = 1e12;
  const DlimjResult r = reconstruct_dlimj(truth, delta_kernel(), cfg);
  EXPECT_GE(psnr(r.reconstruction, truth), 60.0);
}
