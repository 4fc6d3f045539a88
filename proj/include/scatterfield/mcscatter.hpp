#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "scatterfield/diffusion.hpp"
#include "scatterfield/geometry.hpp"
#include "scatterfield/image.hpp"

namespace scatterfield {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// Photon packet. World z points from the object plane (z = 0) toward the
/// cameras; the slab occupies 0 <= z <= slab_thickness.
struct PhotonState {
  Vec3 position;
  Vec3 direction;  // unit length
  double weight = 1.0;

  bool valid() const;
};

/// 64-bit Mersenne Twister with one explicitly seeded stream per batch.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Henyey-Greenstein phase function per steradian.
double hg_phase(double g, double cos_theta);
/// Inverse-CDF sample of the HG scattering cosine; uniform on [-1, 1] at g = 0.
double sample_hg(double g, Rng& rng);

enum class EmissionProfile { lambertian, isotropic_forward };

/// Self-luminous textured plane at height z inside the slab. Texture values
/// are radiances; the grid is centred on plane.origin.
struct Emitter {
  Image radiance;
  ObjectPlane plane;
  double z = 0.0;
};

struct ScatterScene {
  std::vector<Emitter> emitters;
  double slab_thickness = 0.0;  // m
  MediumParams medium;
  /// object_depth is the distance from the z = 0 plane to the camera plane.
  CameraArrayGeometry geometry;
  int sensor_width = 0;
  int sensor_height = 0;
  EmissionProfile emission = EmissionProfile::lambertian;

  void validate() const;
  double camera_z() const noexcept { return geometry.object_depth; }
};

struct SimConfig {
  std::uint64_t n_photons = 100000;
  std::uint64_t seed = 1;
  std::uint64_t batch_size = 10000;
  double roulette_threshold = 1e-3;
  double roulette_boost = 10.0;
  unsigned threads = 0;  // 0 = worker_count()

  void validate() const;
};

/// Weight bookkeeping of the physical random walk (peel-off estimates are
/// tallied separately and do not move weight).
struct TransportCounters {
  double launched = 0.0;
  double absorbed = 0.0;
  double escaped_camera_side = 0.0;
  double escaped_back = 0.0;
  double roulette_killed = 0.0;
  double roulette_gained = 0.0;
  std::uint64_t photons = 0;
  std::uint64_t unscattered_exits = 0;
  std::uint64_t scatter_events = 0;
  std::uint64_t aborted = 0;

  /// (absorbed + escaped + killed - gained) / launched; 1 when conserved.
  double balance() const;
  void merge(const TransportCounters& other);
};

enum class PhotonFate { escaped_camera_side, escaped_back, terminated, aborted };

struct TraceOutcome {
  PhotonFate fate = PhotonFate::aborted;
  int scatter_events = 0;
};

/// Per-view sensor accumulators for the ballistic (emission-vertex) and
/// scattered (scattering-vertex) peel-off estimates.
class SensorTally {
 public:
  SensorTally(int views, int width, int height);

  void add(int view, int x, int y, double value, bool ballistic);
  const std::vector<Image>& ballistic() const noexcept { return ballistic_; }
  const std::vector<Image>& scattered() const noexcept { return scattered_; }
  void merge(const SensorTally& other);

 private:
  std::vector<Image> ballistic_;
  std::vector<Image> scattered_;
};

/// Next-event estimate from an emission vertex toward every pinhole.
void peel_off_emission(const ScatterScene& scene, const Vec3& position, double weight,
                       SensorTally& tally);

/// Follows one photon to slab exit or termination, peeling off toward every
/// pinhole at each scattering vertex when `tally` is given.
TraceOutcome trace_photon(const ScatterScene& scene, PhotonState& state, Rng& rng,
                          SensorTally* tally, TransportCounters* counters,
                          const SimConfig& config = {});

struct RenderResult {
  LightField field;      // ballistic + scattered
  LightField ballistic;  // emission-vertex estimates only
  LightField scattered;  // scattering-vertex estimates only
  TransportCounters counters;
  double flux_per_photon = 0.0;
};

/// Monte Carlo render of every view. Deterministic for a given seed and
/// batch size regardless of thread count.
RenderResult render_lightfield(const ScatterScene& scene, const SimConfig& config);

/// Vacuum image of `emitter` seen from the array centre and focused on its
/// plane, on the sensor grid: each pixel is the mean radiance over its
/// footprint (4x4 supersampled). This is the ground truth for a refocused
/// reconstruction at the emitter depth.
Image project_emitter(const ScatterScene& scene, const Emitter& emitter);

/// Azimuthal average around `center` in unit-width rings (ring k holds radii
/// in [k - 0.5, k + 0.5)), out to max_radius inclusive.
std::vector<double> radial_profile(const Image& image, Vec2 center, int max_radius);

struct PsfOptions {
  double truncation_eps = 1e-3;
  bool include_ballistic = false;  // profile of the full PSF instead of the scattered part
  int max_radius = 0;              // 0 = largest ring fully inside the image
};

struct PsfStudy {
  LightField views;
  Image refocused;
  Image refocused_scattered;
  Vec2 center;  // pixel position of the emitter in the refocused image
  double pixel_scale = 0.0;
  DiffuseKernel kernel;
  std::vector<double> empirical;  // peak-normalized
  std::vector<double> analytic;   // peak-normalized rasterized Green profile; empty when mu_s = 0
  double nrmse = 0.0;             // NaN when mu_s = 0
};

/// Renders a single-pixel emitter, refocuses at its depth and compares the
/// radial profile of the diffuse halo with the rasterized Green's function.
PsfStudy psf_study(const ScatterScene& scene, const SimConfig& config, const PsfOptions& options = {});

struct OtMeasurement {
  double optical_thickness = 0.0;
  double launched_power = 0.0;
  double detected_power = 0.0;  // P_a: unscattered power inside the acceptance cone
  double in_cone_power = 0.0;   // everything inside the cone, scattered or not
  std::uint64_t detected_photons = 0;  // photons inside the cone
  std::uint64_t unscattered_photons = 0;
  bool lower_bound = false;  // no unscattered photon reached the detector
};

/// Collimated-beam power-meter measurement through `path_length` of medium.
/// The detector sits behind the far face with the given acceptance half-angle
/// (rad); as with the filtered meter, P_a counts only photons that crossed
/// without scattering. Returns T = ln(P_o / P_a).
OtMeasurement measure_ot(const MediumParams& medium, double path_length, std::uint64_t n_photons,
                         double aperture_half_angle, std::uint64_t seed = 1);

/// ln(P_o / P_a).
double optical_thickness(double launched_power, double detected_power);

/// Visibility multiple T / |ln 0.05|.
double visibility_from_ot(double optical_thickness);

}  // namespace scatterfield
