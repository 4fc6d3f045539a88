#include "scatterfield/mcscatter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scatterfield/error.hpp"
#include "scatterfield/parallel.hpp"
#include "scatterfield/refocus.hpp"

namespace scatterfield {

namespace {

constexpr double kPi = std::numbers::pi;

// Pinholes and sensor constants shared by every peel-off.
struct CameraRig {
  std::vector<Vec2> centers;
  double camera_z = 0.0;
  double slab = 0.0;
  double mu_t = 0.0;
  double focal_over_pitch = 0.0;
  double radiance_scale = 0.0;  // f^2 / pitch^2
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  explicit CameraRig(const ScatterScene& scene) {
    const CameraArrayGeometry& g = scene.geometry;
    centers.reserve(static_cast<std::size_t>(g.view_count()));
    for (int i = 0; i < g.view_count(); ++i) centers.push_back(g.camera_center(g.view_at(i)));
    camera_z = scene.camera_z();
    slab = scene.slab_thickness;
    mu_t = scene.medium.mu_t();
    focal_over_pitch = g.focal_length / g.pixel_pitch;
    radiance_scale = focal_over_pitch * focal_over_pitch;
    width = scene.sensor_width;
    height = scene.sensor_height;
    cx = 0.5 * (width - 1);
    cy = 0.5 * (height - 1);
  }

  // Splats weight * pdf(direction) * transmission into each view. The
  // estimate is radiance: intensity / (r^2 * pixel solid angle).
  template <typename DirectionalPdf>
  void peel_off(const Vec3& p, double weight, bool ballistic, SensorTally& tally,
                DirectionalPdf&& pdf) const {
    const double dz = camera_z - p.z;
    if (!(dz > 0.0)) return;
    const double m = focal_over_pitch / dz;
    const double inside = std::max(0.0, slab - p.z);
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double ox = p.x - centers[i].x;
      const double oy = p.y - centers[i].y;
      const int px = static_cast<int>(std::floor(cx + m * ox + 0.5));
      const int py = static_cast<int>(std::floor(cy + m * oy + 0.5));
      if (px < 0 || px >= width || py < 0 || py >= height) continue;
      const double r = std::sqrt(ox * ox + oy * oy + dz * dz);
      const Vec3 omega{-ox / r, -oy / r, dz / r};
      const double transmission = std::exp(-mu_t * inside / omega.z);
      const double value = weight * pdf(omega) * transmission * radiance_scale / (dz * dz * omega.z);
      tally.add(static_cast<int>(i), px, py, value, ballistic);
    }
  }
};

Vec3 rotate_direction(const Vec3& d, double cos_theta, double phi) {
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  Vec3 out;
  if (std::abs(d.z) > 0.99999) {
    const double sign = d.z > 0.0 ? 1.0 : -1.0;
    out = {sin_theta * cp, sin_theta * sp, sign * cos_theta};
  } else {
    const double t = std::sqrt(1.0 - d.z * d.z);
    out.x = sin_theta * (d.x * d.z * cp - d.y * sp) / t + d.x * cos_theta;
    out.y = sin_theta * (d.y * d.z * cp + d.x * sp) / t + d.y * cos_theta;
    out.z = -sin_theta * cp * t + d.z * cos_theta;
  }
  const double n = std::sqrt(dot(out, out));
  return {out.x / n, out.y / n, out.z / n};
}

// One photon random walk through the slab. `on_scatter` is invoked after the
// absorption update at every scattering vertex.
template <typename OnScatter>
TraceOutcome walk(double slab, const MediumParams& medium, PhotonState& s, Rng& rng,
                  const SimConfig& config, TransportCounters* counters, OnScatter&& on_scatter) {
  TraceOutcome outcome;
  const double mu_t = medium.mu_t();
  const double albedo = mu_t > 0.0 ? medium.mu_s / mu_t : 0.0;
  TransportCounters local;

  for (;;) {
    if (!s.valid()) {
      outcome.fate = PhotonFate::aborted;
      ++local.aborted;
      local.roulette_killed += std::isfinite(s.weight) ? s.weight : 0.0;
      break;
    }
    double to_boundary = std::numeric_limits<double>::infinity();
    if (s.direction.z > 0.0) {
      to_boundary = (slab - s.position.z) / s.direction.z;
    } else if (s.direction.z < 0.0) {
      to_boundary = -s.position.z / s.direction.z;
    }
    const double step = mu_t > 0.0 ? -std::log(1.0 - rng.uniform()) / mu_t
                                   : std::numeric_limits<double>::infinity();
    if (step >= to_boundary) {
      if (s.direction.z > 0.0) {
        s.position = {s.position.x + to_boundary * s.direction.x,
                      s.position.y + to_boundary * s.direction.y, slab};
        outcome.fate = PhotonFate::escaped_camera_side;
        local.escaped_camera_side += s.weight;
        if (outcome.scatter_events == 0) ++local.unscattered_exits;
      } else {
        // Grazing photons (direction.z == 0) never reach a face; booked as back escape.
        if (s.direction.z < 0.0) {
          s.position = {s.position.x + to_boundary * s.direction.x,
                        s.position.y + to_boundary * s.direction.y, 0.0};
        }
        outcome.fate = PhotonFate::escaped_back;
        local.escaped_back += s.weight;
      }
      break;
    }

    s.position = {s.position.x + step * s.direction.x, s.position.y + step * s.direction.y,
                  s.position.z + step * s.direction.z};
    local.absorbed += s.weight * (1.0 - albedo);
    s.weight *= albedo;
    ++outcome.scatter_events;
    ++local.scatter_events;
    on_scatter(s);

    if (s.weight < config.roulette_threshold) {
      if (s.weight <= 0.0 || rng.uniform() * config.roulette_boost >= 1.0) {
        local.roulette_killed += s.weight;
        s.weight = 0.0;
        outcome.fate = PhotonFate::terminated;
        break;
      }
      local.roulette_gained += s.weight * (config.roulette_boost - 1.0);
      s.weight *= config.roulette_boost;
    }
    const double cos_theta = sample_hg(medium.g, rng);
    s.direction = rotate_direction(s.direction, cos_theta, 2.0 * kPi * rng.uniform());
  }
  if (counters != nullptr) counters->merge(local);
  return outcome;
}

// Flattened emitter pixels with a cumulative distribution for sampling.
struct EmitterSampler {
  struct Pixel {
    std::size_t emitter;
    int x;
    int y;
  };
  std::vector<Pixel> pixels;
  std::vector<double> cdf;
  double total_flux = 0.0;

  explicit EmitterSampler(const ScatterScene& scene) {
    double acc = 0.0;
    for (std::size_t e = 0; e < scene.emitters.size(); ++e) {
      const Emitter& em = scene.emitters[e];
      const double area = em.plane.pixel_scale * em.plane.pixel_scale;
      for (int y = 0; y < em.radiance.height(); ++y) {
        for (int x = 0; x < em.radiance.width(); ++x) {
          const double w = em.radiance.at(x, y) * area;
          if (w <= 0.0) continue;
          acc += w;
          pixels.push_back({e, x, y});
          cdf.push_back(acc);
        }
      }
    }
    require(acc > 0.0, "scene emitters have zero total intensity");
    total_flux = kPi * acc;
  }

  Vec3 sample(const ScatterScene& scene, Rng& rng) const {
    const double target = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) --it;
    const Pixel& px = pixels[static_cast<std::size_t>(it - cdf.begin())];
    const Emitter& em = scene.emitters[px.emitter];
    const double s = em.plane.pixel_scale;
    const double gx = px.x - 0.5 * (em.radiance.width() - 1) + rng.uniform() - 0.5;
    const double gy = px.y - 0.5 * (em.radiance.height() - 1) + rng.uniform() - 0.5;
    return {em.plane.origin.x + gx * s, em.plane.origin.y + gy * s, em.z};
  }
};

double emission_pdf(EmissionProfile profile, double cos_theta) {
  if (cos_theta <= 0.0) return 0.0;
  return profile == EmissionProfile::lambertian ? cos_theta / kPi : 1.0 / (2.0 * kPi);
}

Vec3 sample_emission(EmissionProfile profile, Rng& rng) {
  const double u = rng.uniform();
  const double cos_theta = profile == EmissionProfile::lambertian ? std::sqrt(1.0 - u) : 1.0 - u;
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double phi = 2.0 * kPi * rng.uniform();
  return {sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta};
}

}  // namespace

bool PhotonState::valid() const {
  const bool finite = std::isfinite(position.x) && std::isfinite(position.y) &&
                      std::isfinite(position.z) && std::isfinite(direction.x) &&
                      std::isfinite(direction.y) && std::isfinite(direction.z) &&
                      std::isfinite(weight);
  return finite && std::abs(dot(direction, direction) - 1.0) <= 1e-9 && weight >= 0.0 && weight <= 1.0;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double hg_phase(double g, double cos_theta) {
  const double denom = 1.0 + g * g - 2.0 * g * cos_theta;
  return (1.0 - g * g) / (4.0 * kPi * denom * std::sqrt(denom));
}

double sample_hg(double g, Rng& rng) {
  const double xi = rng.uniform();
  if (std::abs(g) < 1e-9) return 2.0 * xi - 1.0;
  const double frac = (1.0 - g * g) / (1.0 - g + 2.0 * g * xi);
  return std::clamp((1.0 + g * g - frac * frac) / (2.0 * g), -1.0, 1.0);
}

void ScatterScene::validate() const {
  require(!emitters.empty(), "scene needs at least one emitter");
  require(std::isfinite(slab_thickness) && slab_thickness > 0.0, "slab thickness must be > 0");
  medium.validate();
  geometry.validate();
  require(geometry.object_depth > slab_thickness, "cameras must sit outside the slab (object depth > slab thickness)");
  require(sensor_width >= 1 && sensor_height >= 1, "sensor size must be >= 1 pixel");
  for (const Emitter& e : emitters) {
    e.plane.validate();
    require(!e.radiance.empty() && e.radiance.channels() == 1, "emitters are single-channel images");
    validate_intensity(e.radiance, "emitter radiance");
    require(e.z >= 0.0 && e.z < slab_thickness, "emitter plane must lie inside the slab");
  }
}

void SimConfig::validate() const {
  require(n_photons >= 1, "n_photons must be >= 1");
  require(batch_size >= 1, "batch size must be >= 1");
  require(roulette_threshold > 0.0 && roulette_threshold < 1.0, "roulette threshold must lie in (0, 1)");
  require(roulette_boost > 1.0, "roulette boost must be > 1");
}

double TransportCounters::balance() const {
  if (launched == 0.0) return 1.0;
  return (absorbed + escaped_camera_side + escaped_back + roulette_killed - roulette_gained) / launched;
}

void TransportCounters::merge(const TransportCounters& o) {
  launched += o.launched;
  absorbed += o.absorbed;
  escaped_camera_side += o.escaped_camera_side;
  escaped_back += o.escaped_back;
  roulette_killed += o.roulette_killed;
  roulette_gained += o.roulette_gained;
  photons += o.photons;
  unscattered_exits += o.unscattered_exits;
  scatter_events += o.scatter_events;
  aborted += o.aborted;
}

SensorTally::SensorTally(int views, int width, int height)
    : ballistic_(static_cast<std::size_t>(views), Image(width, height, 1)),
      scattered_(static_cast<std::size_t>(views), Image(width, height, 1)) {}

void SensorTally::add(int view, int x, int y, double value, bool ballistic) {
  auto& target = ballistic ? ballistic_ : scattered_;
  target[static_cast<std::size_t>(view)].at(x, y) += value;
}

void SensorTally::merge(const SensorTally& other) {
  for (std::size_t i = 0; i < ballistic_.size(); ++i) {
    ballistic_[i] += other.ballistic_[i];
    scattered_[i] += other.scattered_[i];
  }
}

void peel_off_emission(const ScatterScene& scene, const Vec3& position, double weight,
                       SensorTally& tally) {
  const CameraRig rig(scene);
  rig.peel_off(position, weight, true, tally,
               [&](const Vec3& omega) { return emission_pdf(scene.emission, omega.z); });
}

TraceOutcome trace_photon(const ScatterScene& scene, PhotonState& state, Rng& rng,
                          SensorTally* tally, TransportCounters* counters, const SimConfig& config) {
  if (tally == nullptr) {
    return walk(scene.slab_thickness, scene.medium, state, rng, config, counters,
                [](const PhotonState&) {});
  }
  const CameraRig rig(scene);
  const double g = scene.medium.g;
  return walk(scene.slab_thickness, scene.medium, state, rng, config, counters,
              [&](const PhotonState& s) {
                rig.peel_off(s.position, s.weight, false, *tally, [&](const Vec3& omega) {
                  return hg_phase(g, dot(s.direction, omega));
                });
              });
}

RenderResult render_lightfield(const ScatterScene& scene, const SimConfig& config) {
  scene.validate();
  config.validate();
  const EmitterSampler sampler(scene);
  const CameraRig rig(scene);
  const int n_views = scene.geometry.view_count();
  const std::uint64_t n_batches = (config.n_photons + config.batch_size - 1) / config.batch_size;
  const unsigned workers = config.threads == 0 ? worker_count() : config.threads;
  const double g = scene.medium.g;

  SensorTally total(n_views, scene.sensor_width, scene.sensor_height);
  TransportCounters counters;

  // Batches run in waves; each wave is merged in batch order so the result
  // does not depend on the worker count.
  const std::uint64_t wave = std::max<std::uint64_t>(1, workers);
  for (std::uint64_t first = 0; first < n_batches; first += wave) {
    const std::uint64_t count = std::min(wave, n_batches - first);
    std::vector<SensorTally> tallies;
    tallies.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) tallies.emplace_back(n_views, scene.sensor_width, scene.sensor_height);
    std::vector<TransportCounters> batch_counters(count);

    parallel_for(count, workers, [&](std::size_t i) {
      const std::uint64_t batch = first + i;
      const std::uint64_t begin = batch * config.batch_size;
      const std::uint64_t end = std::min(config.n_photons, begin + config.batch_size);
      Rng rng(config.seed, batch);
      SensorTally& tally = tallies[i];
      TransportCounters& bc = batch_counters[i];
      for (std::uint64_t k = begin; k < end; ++k) {
        PhotonState s;
        s.position = sampler.sample(scene, rng);
        s.weight = 1.0;
        rig.peel_off(s.position, s.weight, true, tally,
                     [&](const Vec3& omega) { return emission_pdf(scene.emission, omega.z); });
        s.direction = sample_emission(scene.emission, rng);
        bc.launched += 1.0;
        ++bc.photons;
        walk(scene.slab_thickness, scene.medium, s, rng, config, &bc, [&](const PhotonState& st) {
          rig.peel_off(st.position, st.weight, false, tally, [&](const Vec3& omega) {
            return hg_phase(g, dot(st.direction, omega));
          });
        });
      }
    });
    for (std::uint64_t i = 0; i < count; ++i) {
      total.merge(tallies[i]);
      counters.merge(batch_counters[i]);
    }
  }

  RenderResult result;
  result.flux_per_photon = sampler.total_flux / static_cast<double>(config.n_photons);
  std::vector<Image> ballistic = total.ballistic();
  std::vector<Image> scattered = total.scattered();
  std::vector<Image> combined;
  combined.reserve(ballistic.size());
  for (std::size_t i = 0; i < ballistic.size(); ++i) {
    ballistic[i] *= result.flux_per_photon;
    scattered[i] *= result.flux_per_photon;
    combined.push_back(ballistic[i] + scattered[i]);
  }
  result.ballistic = LightField(scene.geometry, std::move(ballistic));
  result.scattered = LightField(scene.geometry, std::move(scattered));
  result.field = LightField(scene.geometry, std::move(combined));
  result.counters = counters;
  return result;
}

Image project_emitter(const ScatterScene& scene, const Emitter& emitter) {
  const double depth = scene.camera_z() - emitter.z;
  const double footprint = scene.geometry.object_pixel_scale(depth);
  const double cx = 0.5 * (scene.sensor_width - 1);
  const double cy = 0.5 * (scene.sensor_height - 1);
  const double ex = 0.5 * (emitter.radiance.width() - 1);
  const double ey = 0.5 * (emitter.radiance.height() - 1);
  constexpr int kSub = 4;
  Image out(scene.sensor_width, scene.sensor_height, 1);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      double acc = 0.0;
      for (int j = 0; j < kSub; ++j) {
        for (int i = 0; i < kSub; ++i) {
          const double px = (x - cx + (i + 0.5) / kSub - 0.5) * footprint - emitter.plane.origin.x;
          const double py = (y - cy + (j + 0.5) / kSub - 0.5) * footprint - emitter.plane.origin.y;
          const auto tx = static_cast<long>(std::floor(px / emitter.plane.pixel_scale + ex + 0.5));
          const auto ty = static_cast<long>(std::floor(py / emitter.plane.pixel_scale + ey + 0.5));
          if (tx < 0 || ty < 0 || tx >= emitter.radiance.width() || ty >= emitter.radiance.height()) continue;
          acc += emitter.radiance.at(static_cast<int>(tx), static_cast<int>(ty));
        }
      }
      out.at(x, y) = acc / (kSub * kSub);
    }
  }
  return out;
}

std::vector<double> radial_profile(const Image& image, Vec2 center, int max_radius) {
  require(!image.empty(), "radial profile needs a non-empty image");
  require(max_radius >= 0, "max radius must be >= 0");
  std::vector<double> sum(static_cast<std::size_t>(max_radius) + 1, 0.0);
  std::vector<double> count(sum.size(), 0.0);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const double r = std::hypot(x - center.x, y - center.y);
      const auto ring = static_cast<long>(std::floor(r + 0.5));
      if (ring > max_radius) continue;
      sum[static_cast<std::size_t>(ring)] += image.at(x, y);
      count[static_cast<std::size_t>(ring)] += 1.0;
    }
  }
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = count[k] > 0.0 ? sum[k] / count[k] : 0.0;
  return sum;
}

namespace {

void normalize_peak(std::vector<double>& profile) {
  const double peak = *std::ranges::max_element(profile);
  if (peak > 0.0) {
    for (double& v : profile) v /= peak;
  }
}

}  // namespace

PsfStudy psf_study(const ScatterScene& scene, const SimConfig& config, const PsfOptions& options) {
  scene.validate();
  const Emitter* source = nullptr;
  int sx = 0, sy = 0, nonzero = 0;
  for (const Emitter& e : scene.emitters) {
    for (int y = 0; y < e.radiance.height(); ++y) {
      for (int x = 0; x < e.radiance.width(); ++x) {
        if (e.radiance.at(x, y) > 0.0) {
          ++nonzero;
          source = &e;
          sx = x;
          sy = y;
        }
      }
    }
  }
  require(nonzero == 1, "PSF study needs exactly one non-zero emitter pixel");

  const RenderResult render = render_lightfield(scene, config);
  const double depth = scene.camera_z() - source->z;
  const RefocusConfig refocus_config = RefocusConfig::at_depth(depth);

  PsfStudy study;
  study.views = render.field;
  study.refocused = refocus(render.field, refocus_config);
  study.refocused_scattered = refocus(render.scattered, refocus_config);

  const Vec2 p{source->plane.origin.x +
                   (sx - 0.5 * (source->radiance.width() - 1)) * source->plane.pixel_scale,
               source->plane.origin.y +
                   (sy - 0.5 * (source->radiance.height() - 1)) * source->plane.pixel_scale};
  const double m = scene.geometry.focal_length / (depth * scene.geometry.pixel_pitch);
  study.center = {0.5 * (scene.sensor_width - 1) + m * p.x, 0.5 * (scene.sensor_height - 1) + m * p.y};
  study.pixel_scale = scene.geometry.object_pixel_scale(depth);

  int max_radius = options.max_radius;
  if (max_radius <= 0) {
    const double room = std::min({study.center.x, study.center.y,
                                  scene.sensor_width - 1 - study.center.x,
                                  scene.sensor_height - 1 - study.center.y});
    max_radius = std::max(1, static_cast<int>(std::floor(room)));
  }

  const Image& measured = options.include_ballistic ? study.refocused : study.refocused_scattered;
  study.empirical = radial_profile(measured, study.center, max_radius);
  normalize_peak(study.empirical);
  if (!(scene.medium.mu_s > 0.0)) {
    // No diffuse halo to compare against in a non-scattering medium.
    study.nrmse = std::numeric_limits<double>::quiet_NaN();
    return study;
  }

  KernelOptions kernel_options;
  kernel_options.pixel_scale = study.pixel_scale;
  kernel_options.truncation_eps = options.truncation_eps;
  kernel_options.max_width = std::numeric_limits<int>::max();
  study.kernel = rasterize_kernel(scene.medium, kernel_options);

  // Green profile rasterized on the same grid and ring-averaged identically.
  const MediumParams medium = study.kernel.params;
  const double diffusion = derive_coefficients(medium).diffusion;
  Image analytic_image(scene.sensor_width, scene.sensor_height, 1);
  for (int y = 0; y < analytic_image.height(); ++y) {
    for (int x = 0; x < analytic_image.width(); ++x) {
      const double r = std::hypot(x - study.center.x, y - study.center.y) * study.pixel_scale;
      analytic_image.at(x, y) = green_profile(r, medium.mu_a, diffusion, study.kernel.mirror_distance);
    }
  }
  study.analytic = radial_profile(analytic_image, study.center, max_radius);
  normalize_peak(study.analytic);

  const auto [lo, hi] = std::ranges::minmax_element(study.analytic);
  double se = 0.0;
  for (std::size_t k = 0; k < study.empirical.size(); ++k) {
    const double d = study.empirical[k] - study.analytic[k];
    se += d * d;
  }
  const double rmse = std::sqrt(se / static_cast<double>(study.empirical.size()));
  const double range = *hi - *lo;
  study.nrmse = range > 0.0 ? rmse / range : rmse;
  return study;
}

OtMeasurement measure_ot(const MediumParams& medium, double path_length, std::uint64_t n_photons,
                         double aperture_half_angle, std::uint64_t seed) {
  medium.validate();
  require(std::isfinite(path_length) && path_length > 0.0, "path length must be > 0");
  require(n_photons >= 1, "n_photons must be >= 1");
  require(aperture_half_angle > 0.0 && aperture_half_angle < kPi / 2, "aperture half-angle must lie in (0, pi/2)");
  const double cos_accept = std::cos(aperture_half_angle);
  SimConfig config;
  Rng rng(seed, 0);

  OtMeasurement m;
  for (std::uint64_t i = 0; i < n_photons; ++i) {
    PhotonState s;
    s.direction = {0.0, 0.0, 1.0};
    s.weight = 1.0;
    const TraceOutcome out = walk(path_length, medium, s, rng, config, nullptr, [](const PhotonState&) {});
    m.launched_power += 1.0;
    if (out.fate == PhotonFate::escaped_camera_side && s.direction.z >= cos_accept) {
      ++m.detected_photons;
      m.in_cone_power += s.weight;
      if (out.scatter_events == 0) {
        ++m.unscattered_photons;
        m.detected_power += s.weight;
      }
    }
  }
  if (m.detected_power > 0.0) {
    m.optical_thickness = optical_thickness(m.launched_power, m.detected_power);
  } else {
    // One photon's worth of power bounds the attenuation from below.
    m.lower_bound = true;
    m.optical_thickness = std::log(m.launched_power);
  }
  return m;
}

double optical_thickness(double launched_power, double detected_power) {
  require(std::isfinite(launched_power) && launched_power > 0.0, "P_o must be > 0");
  require(std::isfinite(detected_power) && detected_power > 0.0, "P_a must be > 0");
  return std::log(launched_power / detected_power);
}

double visibility_from_ot(double optical_thickness_value) {
  require(std::isfinite(optical_thickness_value) && optical_thickness_value > 0.0, "optical thickness must be > 0");
  return optical_thickness_value / std::abs(std::log(0.05));
}

}  // namespace scatterfield
