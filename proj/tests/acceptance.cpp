// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "scatterfield/backscatter.hpp"
#include "scatterfield/cli.hpp"
#include "scatterfield/deconv.hpp"
#include "scatterfield/diffusion.hpp"
#include "scatterfield/mcscatter.hpp"
#include "scatterfield/metrics.hpp"
#include "scatterfield/refocus.hpp"

using namespace scatterfield;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Bars, a disk and a half-intensity square on a black background.
Image test_target(int n) {
  Image t(n, n, 1);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const int cx = x - n / 2;
      const int cy = y - n / 2;
      const bool bar = y > n / 8 && y < 3 * n / 8 && (x / 3) % 2 == 0 && x > n / 8 && x < 7 * n / 8;
      const int dx = cx + n / 5;
      const int dy = cy - n / 5;
      const bool disk = dx * dx + dy * dy < (n / 8) * (n / 8);
      const bool square = cx > n / 10 && cx < 3 * n / 10 && cy > n / 10 && cy < 3 * n / 10;
      t.at(x, y) = bar || disk ? 1.0 : (square ? 0.5 : 0.0);
    }
  }
  return t;
}

// Rescale to [0, 1] so that images with different absolute scales compare.
Image min_max(Image image) {
  const auto [lo, hi] = std::ranges::minmax_element(image.samples());
  const double a = *lo;
  const double range = *hi - *lo;
  for (double& v : image.samples()) v = range > 0.0 ? (v - a) / range : 0.0;
  return image;
}

// --- 1 -----------------------------------------------------------------------
Verdict roundtrip_inversion() {
  const MediumParams medium{0.3, 5.7, 0.0};
  KernelOptions ko;
  ko.pixel_scale = 0.05;
  ko.max_width = 129;
  const DiffuseKernel kernel = rasterize_kernel(medium, ko);
  const int half = kernel.width() / 2;

  // Random blobs, zero border wider than the kernel so nothing leaves the frame.
  Image truth(256, 256, 1);
  const Image noise = oracle::random_image(256 - 2 * half, 256 - 2 * half, 2024);
  const Image smooth = conv2(noise, oracle::random_image(5, 5, 7));
  const double peak = smooth.max_value();
  for (int y = 0; y < smooth.height(); ++y)
    for (int x = 0; x < smooth.width(); ++x) truth.at(x + half, y + half) = smooth.at(x, y) / peak;

  const double gamma = 0.1;
  const double path = std::log(1.0 / gamma) / medium.mu_s;
  const Image observed = conv2(truth, with_ballistic_impulse(kernel.samples)) * gamma;

  DlimjConfig cfg;
  cfg.wiener.zeta = 1e8;
  cfg.wiener.include_ballistic_impulse = true;
  cfg.path_length = path;
  const auto t0 = Clock::now();
  const DlimjResult r = reconstruct_dlimj(observed, kernel, cfg);
  const double elapsed = seconds_since(t0);
  const double p = psnr(r.reconstruction, truth);
  return {p >= 60.0 && elapsed <= 2.0 && kernel.width() <= 129,
          fmt::format("kernel {}x{}, gamma {:.3f}, psnr {:.2f} dB (>= 60), {:.3f} s (<= 2)", kernel.width(),
                      kernel.width(), r.gamma, p, elapsed)};
}

// --- 2 -----------------------------------------------------------------------
Verdict commutation() {
  CameraArrayGeometry g;
  g.grid_u = g.grid_v = 5;
  g.baseline = g.focal_length = g.pixel_pitch = 1.0;
  g.object_depth = 1.0;
  std::vector<Image> views;
  for (int i = 0; i < g.view_count(); ++i) views.push_back(oracle::random_image(32, 32, 300 + i));
  const LightField field(g, views);

  Kernel4D k(3, 3, 5, 5);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : k.data()) v = u(rng);

  RefocusConfig cfg = RefocusConfig::at_depth(1.0);  // one pixel per baseline
  cfg.normalization = Normalization::sum;
  cfg.boundary = RefocusBoundary::periodic;
  Conv4dOptions o;
  o.angular = AngularBoundary::extend;
  const Image lhs = refocus(conv4d(field, k, o), cfg);
  const Image rhs = conv2(refocus(field, cfg), refocus_kernel4d(k, cfg, g), Padding::periodic);
  const double err = oracle::rel_l2(lhs, rhs);
  return {err <= 1e-6, fmt::format("relative L2 {:.3e} (<= 1e-6)", err)};
}

// --- 3 -----------------------------------------------------------------------
Verdict beer_lambert() {
  const int n = 1000000;
  bool ok = true;
  std::string detail;
  for (double tau : {1.0, 2.0, 4.0}) {
    ScatterScene scene;
    scene.slab_thickness = 1.0;
    scene.medium = {0.1 * tau, 0.9 * tau, 0.5};
    Rng rng(17, static_cast<std::uint64_t>(tau));
    long unscattered = 0;
    for (int i = 0; i < n; ++i) {
      PhotonState s;
      s.direction = {0.0, 0.0, 1.0};
      const TraceOutcome out = trace_photon(scene, s, rng, nullptr, nullptr);
      if (out.fate == PhotonFate::escaped_camera_side && out.scatter_events == 0) ++unscattered;
    }
    const double p = std::exp(-tau);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    const double frac = static_cast<double>(unscattered) / n;
    const double z = std::abs(frac - p) / sigma;
    const OtMeasurement m = measure_ot(scene.medium, 1.0, n, 0.01, 23);
    const double dt = std::abs(m.optical_thickness - tau);
    ok = ok && z <= 3.0 && dt <= 0.02;
    detail += fmt::format("tau {}: {:.2f} sigma, measured T {:.4f}; ", tau, z, m.optical_thickness);
  }
  return {ok, detail + "(<= 3 sigma, T within 0.02)"};
}

// --- 4 -----------------------------------------------------------------------
Verdict phase_sampling() {
  const int n = 1000000;
  bool ok = true;
  std::string detail;
  for (double g : {0.0, 0.5, 0.9}) {
    Rng rng(5, static_cast<std::uint64_t>(g * 10));
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = sample_hg(g, rng);
      sum += c;
      sum2 += c * c;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double z = std::abs(mean - g) / std::sqrt(var / n);
    ok = ok && z <= 3.0;
    detail += fmt::format("g {}: mean {:.5f} ({:.2f} sigma); ", g, mean, z);
  }
  return {ok, detail + "(<= 3 sigma)"};
}

// Slab of unit thickness with the emitter on its back face; cameras 2 m from
// the emitter plane. pixel_scale is the object-side pixel size there.
ScatterScene slab_scene(const MediumParams& medium, double pixel_scale, int sensor, Image emitter) {
  ScatterScene s;
  s.slab_thickness = 1.0;
  s.medium = medium;
  s.geometry.grid_u = s.geometry.grid_v = 5;
  s.geometry.focal_length = 0.01;
  s.geometry.object_depth = 2.0;
  s.geometry.pixel_pitch = 0.01 * pixel_scale / 2.0;
  s.geometry.baseline = 2.0 * pixel_scale;
  s.sensor_width = s.sensor_height = sensor;
  Emitter e;
  e.radiance = std::move(emitter);
  e.plane.pixel_scale = pixel_scale;
  e.z = 0.0;
  s.emitters.push_back(std::move(e));
  return s;
}

// --- 5 -----------------------------------------------------------------------
Verdict psf_consistency() {
  const ScatterScene scene = slab_scene({0.3, 5.7, 0.0}, 0.05, 61, Image(1, 1, 1, 1.0));
  SimConfig cfg;
  cfg.n_photons = 200000;
  cfg.batch_size = 20000;
  cfg.seed = 11;
  const PsfStudy st = psf_study(scene, cfg);
  return {st.nrmse <= 0.15, fmt::format("g 0, tau 6, {} rings, nrmse {:.4f} (<= 0.15)", st.empirical.size(), st.nrmse)};
}

struct Reconstruction {
  QualityReport refocused;
  QualityReport dlim;
};

Reconstruction reconstruct_scene(const MediumParams& medium, std::uint64_t seed) {
  const double pixel_scale = 0.05;
  const ScatterScene scene = slab_scene(medium, pixel_scale, 64, test_target(40));
  SimConfig sim;
  sim.n_photons = 200000;
  sim.batch_size = 50000;
  sim.seed = seed;
  const RenderResult r = render_lightfield(scene, sim);
  const Image truth = min_max(project_emitter(scene, scene.emitters.front()));
  const Image refocused = refocus(r.field, RefocusConfig::at_depth(scene.camera_z()));

  KernelOptions ko;
  ko.pixel_scale = pixel_scale;
  ko.max_width = 1025;
  DlimjConfig cfg;
  cfg.wiener.zeta = 1e5;
  cfg.path_length = scene.slab_thickness;
  const DlimjResult rec = reconstruct_dlimj(refocused, rasterize_kernel(medium, ko), cfg);
  return {evaluate_quality(min_max(refocused), truth), evaluate_quality(min_max(rec.reconstruction), truth)};
}

// --- 6 -----------------------------------------------------------------------
Verdict ot_sweep() {
  bool ok = true;
  std::string detail;
  for (double tau : {6.24, 6.72, 7.20}) {
    const Reconstruction r = reconstruct_scene({0.3, tau - 0.3, 0.0}, 31);
    const double gain = r.dlim.psnr_db - r.refocused.psnr_db;
    ok = ok && r.dlim.ssim > r.refocused.ssim && gain >= 2.0;
    detail += fmt::format("tau {}: ssim {:.3f} -> {:.3f}, psnr +{:.2f} dB; ", tau, r.refocused.ssim, r.dlim.ssim, gain);
  }
  return {ok, detail + "(ssim must rise, gain >= 2 dB)"};
}

// --- 7 -----------------------------------------------------------------------
Verdict anisotropy_ranking() {
  const double tau = 6.24;
  std::vector<double> scores;
  std::string detail;
  for (double g : {0.0, 0.4, 0.8}) {
    const Reconstruction r = reconstruct_scene({0.3, tau - 0.3, g}, 41);
    scores.push_back(r.dlim.ssim);
    detail += fmt::format("g {}: ssim {:.3f}; ", g, r.dlim.ssim);
  }
  return {scores[0] > scores[1] && scores[0] > scores[2], detail + "(g 0 must be highest)"};
}

// --- 8 -----------------------------------------------------------------------
Verdict ot_utility() {
  const char* argv[] = {"scatterfield", "ot", "--po", "0.339", "--pa", "5.63e-4"};
  std::ostringstream out, err;
  const int code = cli::run(6, argv, out, err);
  double printed = std::nan("");
  const std::string text = out.str();
  const auto at = text.find("T = ");
  if (at != std::string::npos) printed = std::stod(text.substr(at + 4));
  const double vis = visibility_from_ot(9.0);
  const bool ok = code == 0 && std::abs(printed - 6.40) <= 0.01 && std::abs(vis - 3.00) <= 0.01;
  return {ok, fmt::format("exit {}, printed T {:.2f} (6.40 +- 0.01), visibility(9) {:.4f} (3.00 +- 0.01)", code,
                          printed, vis)};
}

// --- 9 -----------------------------------------------------------------------
double best_wiener_time(int n, const Image& kernel) {
  const Image img = oracle::random_image(n, n, 77);
  WienerConfig cfg;
  double best = 1e300;
  for (int rep = 0; rep < 7; ++rep) {
    const auto t0 = Clock::now();
    const Image out = wiener_deconv(img, kernel, cfg);
    best = std::min(best, seconds_since(t0));
    if (out.empty()) std::abort();
  }
  return best;
}

Verdict complexity() {
  KernelOptions ko;
  ko.pixel_scale = 0.05;
  const Image kernel = rasterize_kernel({0.3, 5.7, 0.0}, ko).samples;
  best_wiener_time(128, kernel);  // warm-up
  const double t256 = best_wiener_time(256, kernel);
  const double t512 = best_wiener_time(512, kernel);
  const double ratio = t512 / t256;
  return {ratio <= 5.0, fmt::format("256^2 {:.4f} s, 512^2 {:.4f} s, ratio {:.2f} (<= 5)", t256, t512, ratio)};
}

// --- 10 ----------------------------------------------------------------------
Verdict invariant_suites() {
  const std::string cmd = std::string(SCATTERFIELD_TESTS) + " --gtest_brief=1 > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return {status == 0, fmt::format("property/unit suite exit status {}", status)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"round-trip inversion", roundtrip_inversion},
      {"4-D convolution commutes with refocus", commutation},
      {"Beer-Lambert survivors and measured OT", beer_lambert},
      {"HG phase sampling", phase_sampling},
      {"PSF vs diffuse kernel", psf_consistency},
      {"OT sweep reconstruction gain", ot_sweep},
      {"anisotropy ranking", anisotropy_ranking},
      {"OT utility", ot_utility},
      {"Wiener complexity", complexity},
      {"invariant suites", invariant_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("[%s] %2zu %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
