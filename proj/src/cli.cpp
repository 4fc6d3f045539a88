#include "scatterfield/cli.hpp"

#include <cstdlib>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "scatterfield/backscatter.hpp"
#include "scatterfield/deconv.hpp"
#include "scatterfield/diffusion.hpp"
#include "scatterfield/io.hpp"
#include "scatterfield/mcscatter.hpp"
#include "scatterfield/metrics.hpp"
#include "scatterfield/refocus.hpp"
#include "scatterfield/scene.hpp"

#ifndef SCATTERFIELD_VERSION
#define SCATTERFIELD_VERSION "0.0.0"
#endif

namespace scatterfield::cli {

namespace {

using io::fs::path;
using io::json;

struct Context {
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;

  json provenance(const std::string& command, json parameters) const {
    json p;
    p["tool"] = "scatterfield";
    p["version"] = SCATTERFIELD_VERSION;
    p["command"] = command;
    p["argv"] = argv;
    p["parameters"] = std::move(parameters);
    p["schema_versions"] = {{"manifest", io::kManifestSchema},
                            {"scene", io::kSceneSchema},
                            {"kernel", io::kKernelSchema},
                            {"report", io::kReportSchema}};
    return p;
  }
};

path provenance_path(const path& output) {
  path p = output;
  p.replace_extension(".provenance.json");
  return p;
}

json counters_json(const TransportCounters& c) {
  return {{"launched", c.launched},
          {"absorbed", c.absorbed},
          {"escaped_camera_side", c.escaped_camera_side},
          {"escaped_back", c.escaped_back},
          {"roulette_killed", c.roulette_killed},
          {"roulette_gained", c.roulette_gained},
          {"photons", c.photons},
          {"unscattered_exits", c.unscattered_exits},
          {"scatter_events", c.scatter_events},
          {"aborted", c.aborted},
          {"balance", c.balance()}};
}

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void ensure_directory(const path& dir) {
  std::error_code ec;
  io::fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io_error, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

// simulate -----------------------------------------------------------------

struct SimulateArgs {
  std::string scene;
  std::string out;
  std::optional<std::uint64_t> photons;
  std::optional<std::uint64_t> seed;
};

void do_simulate(const SimulateArgs& a, const Context& ctx) {
  io::SceneFile sf = io::read_scene(a.scene);
  if (a.photons) sf.sim.n_photons = *a.photons;
  if (a.seed) sf.sim.seed = *a.seed;
  sf.sim.validate();
  const RenderResult r = render_lightfield(sf.scene, sf.sim);

  const path dir(a.out);
  ensure_directory(dir);
  io::LightFieldManifest m;
  m.medium = io::MediumBlock{sf.scene.medium, sf.scene.slab_thickness};
  if (sf.scene.emitters.size() == 1) {
    io::save_image(dir / "ground_truth.pfm", project_emitter(sf.scene, sf.scene.emitters.front()));
    m.ground_truth = "ground_truth.pfm";
  }
  m.provenance = ctx.provenance("simulate", {{"scene", a.scene},
                                             {"scene_document", sf.source},
                                             {"n_photons", sf.sim.n_photons},
                                             {"seed", sf.sim.seed},
                                             {"batch_size", sf.sim.batch_size},
                                             {"counters", counters_json(r.counters)},
                                             {"flux_per_photon", r.flux_per_photon}});
  m.provenance["seed"] = sf.sim.seed;
  io::save_lightfield(dir, r.field, m);
  ctx.out << fmt::format("wrote {} views to {} (energy balance {:.9f})\n", r.field.view_count(),
                         dir.string(), r.counters.balance());
}

// psf ----------------------------------------------------------------------

struct PsfArgs {
  std::string scene;
  std::string out;
  std::string profile;
  double eps = 1e-3;
  bool include_ballistic = false;
  std::optional<std::uint64_t> photons;
  std::optional<std::uint64_t> seed;
};

void do_psf(const PsfArgs& a, const Context& ctx) {
  io::SceneFile sf = io::read_scene(a.scene);
  if (a.photons) sf.sim.n_photons = *a.photons;
  if (a.seed) sf.sim.seed = *a.seed;
  PsfOptions options;
  options.truncation_eps = a.eps;
  options.include_ballistic = a.include_ballistic;
  const PsfStudy study = psf_study(sf.scene, sf.sim, options);

  const path dir(a.out);
  io::LightFieldManifest m;
  m.medium = io::MediumBlock{sf.scene.medium, sf.scene.slab_thickness};
  const json prov = ctx.provenance("psf", {{"scene", a.scene},
                                           {"scene_document", sf.source},
                                           {"n_photons", sf.sim.n_photons},
                                           {"seed", sf.sim.seed},
                                           {"eps", a.eps},
                                           {"include_ballistic", a.include_ballistic},
                                           {"center_px", {study.center.x, study.center.y}},
                                           {"pixel_scale_m", study.pixel_scale},
                                           {"nrmse", study.nrmse}});
  m.provenance = prov;
  io::save_lightfield(dir, study.views, m);
  io::save_image(dir / "refocused.pfm", study.refocused);
  io::save_image(dir / "refocused_scattered.pfm", study.refocused_scattered);
  if (!study.analytic.empty()) io::save_kernel(dir / "kernel.pfm", study.kernel, prov);

  std::ostringstream csv;
  csv << "radius_px,empirical,analytic\n";
  for (std::size_t k = 0; k < study.empirical.size(); ++k) {
    if (study.analytic.empty()) {
      csv << fmt::format("{},{:.9g},\n", k, study.empirical[k]);
    } else {
      csv << fmt::format("{},{:.9g},{:.9g}\n", k, study.empirical[k], study.analytic[k]);
    }
  }
  io::write_text(a.profile, csv.str());
  io::write_json(provenance_path(a.profile), prov);
  ctx.out << fmt::format("nrmse {:.6f} over {} rings\n", study.nrmse, study.empirical.size());
}

// refocus ------------------------------------------------------------------

struct RefocusArgs {
  std::string lf;
  std::optional<double> depth;
  std::optional<double> alpha;
  std::string interpolation = "bilinear";
  std::string normalization = "mean";
  std::string out;
};

RefocusConfig make_refocus(std::optional<double> depth, std::optional<double> alpha,
                           const std::string& interpolation, const std::string& normalization) {
  RefocusConfig c = alpha ? RefocusConfig::at_alpha(*alpha) : RefocusConfig::at_depth(*depth);
  c.interpolation = interpolation == "nearest" ? Interpolation::nearest : Interpolation::bilinear;
  c.normalization = normalization == "sum" ? Normalization::sum : Normalization::mean;
  return c;
}

void do_refocus(const RefocusArgs& a, const Context& ctx) {
  const io::LoadedLightField lf = io::load_lightfield(a.lf);
  const RefocusConfig config = make_refocus(a.depth, a.alpha, a.interpolation, a.normalization);
  const Image image = refocus(lf.field, config);
  io::save_image(a.out, image);
  json params = {{"lf", a.lf},
                 {"interpolation", a.interpolation},
                 {"normalization", a.normalization},
                 {"disparity_px", disparity_per_baseline(config, lf.field.geometry())},
                 {"input_provenance", lf.manifest.provenance}};
  if (a.depth) params["depth_m"] = *a.depth;
  if (a.alpha) params["alpha"] = *a.alpha;
  io::write_json(provenance_path(a.out), ctx.provenance("refocus", params));
  ctx.out << fmt::format("wrote {} ({}x{})\n", a.out, image.width(), image.height());
}

// kernel -------------------------------------------------------------------

struct KernelArgs {
  double mu_a = 0.0;
  double mu_s = 0.0;
  double g = 0.0;
  double pixel_scale = 0.0;
  double eps = 1e-3;
  std::optional<double> mirror;
  int max_width = 1025;
  std::string out;
};

void do_kernel(const KernelArgs& a, const Context& ctx) {
  MediumParams m{a.mu_a, a.mu_s, a.g};
  KernelOptions o;
  o.pixel_scale = a.pixel_scale;
  o.truncation_eps = a.eps;
  o.max_width = a.max_width;
  if (a.mirror) o.mirror_distance = *a.mirror;
  const DiffuseKernel k = rasterize_kernel(m, o);
  json params = {{"mu_a", a.mu_a}, {"mu_s", a.mu_s}, {"g", a.g}, {"pixel_scale_m", a.pixel_scale},
                 {"eps", a.eps}, {"max_width", a.max_width}, {"applied_mu_a", k.params.mu_a}};
  if (a.mirror) params["mirror_distance_m"] = *a.mirror;
  io::save_kernel(a.out, k, ctx.provenance("kernel", params));
  ctx.out << fmt::format("wrote {} ({}x{}, mu_a used {:.6g})\n", a.out, k.width(), k.width(), k.params.mu_a);
}

// reconstruct --------------------------------------------------------------

struct ReconstructArgs {
  std::string lf;
  std::string kernel;
  double zeta = 1e4;
  std::string mode = "self";
  std::string out;
  std::optional<std::string> tmap;
  std::optional<std::string> atmo;
  std::optional<double> depth;
  std::optional<double> alpha;
  std::optional<double> path_length;
  bool ballistic = false;
  std::string padding = "zero";
};

void do_reconstruct(const ReconstructArgs& a, const Context& ctx) {
  const io::LoadedLightField lf = io::load_lightfield(a.lf);
  const DiffuseKernel kernel = io::load_kernel(a.kernel);
  const double depth = a.depth.value_or(lf.manifest.geometry.object_depth);
  const RefocusConfig rc = a.alpha ? RefocusConfig::at_alpha(*a.alpha) : RefocusConfig::at_depth(depth);
  const Image refocused = refocus(lf.field, rc);

  DlimjConfig config;
  config.mode = a.mode == "passive" ? LuminousMode::passive : LuminousMode::self_luminous;
  config.wiener.zeta = a.zeta;
  config.wiener.include_ballistic_impulse = a.ballistic;
  config.wiener.padding = a.padding == "periodic" ? Padding::periodic : Padding::zero;
  if (a.path_length) {
    config.path_length = *a.path_length;
  } else if (lf.manifest.medium) {
    config.path_length = lf.manifest.medium->slab_thickness;
  }
  const DlimjResult result = reconstruct_dlimj(refocused, kernel, config);
  io::save_image(a.out, result.reconstruction);
  if (a.tmap) io::save_image(*a.tmap, result.transmission.t);
  if (a.atmo) {
    io::write_json(*a.atmo, {{"b_inf", result.atmosphere.b_inf}, {"t_min", result.transmission.t_min}});
  }

  if (!a.alpha) {
    const double expected = lf.manifest.geometry.object_pixel_scale(depth);
    if (std::abs(expected - kernel.pixel_scale) > 1e-6 * expected) {
      ctx.err << fmt::format("warning: kernel pixel scale {:.6g} m differs from refocus plane {:.6g} m\n",
                             kernel.pixel_scale, expected);
    }
  }
  json params = {{"lf", a.lf},
                 {"kernel", a.kernel},
                 {"zeta", a.zeta},
                 {"mode", a.mode},
                 {"ballistic_impulse", a.ballistic},
                 {"padding", a.padding},
                 {"path_length_m", config.path_length},
                 {"gamma", result.gamma},
                 {"kernel_params", {{"mu_a", kernel.params.mu_a}, {"mu_s", kernel.params.mu_s},
                                    {"g", kernel.params.g}, {"pixel_scale_m", kernel.pixel_scale},
                                    {"width", kernel.width()}}},
                 {"input_provenance", lf.manifest.provenance}};
  if (a.alpha) {
    params["alpha"] = *a.alpha;
  } else {
    params["depth_m"] = depth;
  }
  if (!result.atmosphere.b_inf.empty()) params["b_inf"] = result.atmosphere.b_inf;
  io::write_json(provenance_path(a.out), ctx.provenance("reconstruct", params));
  ctx.out << fmt::format("wrote {}\n", a.out);
}

// evaluate -----------------------------------------------------------------

struct EvaluateArgs {
  std::string a;
  std::string b;
  std::string report;
  double max_value = 1.0;
};

void do_evaluate(const EvaluateArgs& a, const Context& ctx) {
  const Image x = io::load_image(a.a);
  const Image y = io::load_image(a.b);
  const QualityReport q = evaluate_quality(x, y, a.max_value);
  json report = {{"schema_version", io::kReportSchema},
                 {"psnr_db", number_or_inf(q.psnr_db)},
                 {"ssim", q.ssim},
                 {"channels", x.channels()},
                 {"channel_handling", "per-channel scores averaged"},
                 {"max_value", a.max_value},
                 {"provenance", ctx.provenance("evaluate", {{"a", a.a}, {"b", a.b}})}};
  io::write_json(a.report, report);
  ctx.out << fmt::format("psnr {} dB, ssim {:.6f}\n",
                         std::isinf(q.psnr_db) ? std::string("inf") : fmt::format("{:.4f}", q.psnr_db), q.ssim);
}

// ot -----------------------------------------------------------------------

struct OtArgs {
  double po = 0.0;
  double pa = 0.0;
  std::optional<std::string> report;
};

void do_ot(const OtArgs& a, const Context& ctx) {
  const double t = optical_thickness(a.po, a.pa);
  const double vis = visibility_from_ot(t);
  ctx.out << fmt::format("T = {:.2f}\nvisibility = {:.2f}\n", t, vis);
  if (a.report) {
    io::write_json(*a.report, {{"optical_thickness", t},
                               {"visibility_multiple", vis},
                               {"provenance", ctx.provenance("ot", {{"po", a.po}, {"pa", a.pa}})}});
  }
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return 3;
    case ErrorCode::degenerate_medium: return 4;
    case ErrorCode::needs_regularization: return 4;
    case ErrorCode::kernel_too_large: return 5;
    case ErrorCode::too_large: return 5;
    case ErrorCode::io_error: return 6;
    case ErrorCode::missing_file: return 7;
    case ErrorCode::dimension_mismatch: return 8;
    case ErrorCode::unknown_schema: return 9;
    case ErrorCode::parse_error: return 10;
  }
  return kInternalExit;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diffuse light-field imaging through scattering media"};
  app.set_version_flag("--version", SCATTERFIELD_VERSION);
  app.require_subcommand(1);

  const CLI::Validator alpha_range(
      [](std::string& v) -> std::string {
        char* end = nullptr;
        const double a = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0') return "not a number";
        return a > 0.0 && a <= 1.0 ? std::string() : "alpha must lie in (0, 1]";
      },
      "(0, 1]");
  const CLI::Validator g_range(
      [](std::string& v) -> std::string {
        char* end = nullptr;
        const double g = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0') return "not a number";
        return g >= 0.0 && g < 1.0 ? std::string() : "g must lie in [0, 1)";
      },
      "[0, 1)");
  const auto non_negative = CLI::NonNegativeNumber;
  const auto positive = CLI::PositiveNumber;

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo render of a scene into a light-field directory");
  c_sim->add_option("--scene", sim.scene, "scene JSON")->required();
  c_sim->add_option("--out", sim.out, "output light-field directory")->required();
  c_sim->add_option("--photons", sim.photons, "override n_photons")->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  c_sim->add_option("--seed", sim.seed, "override seed");

  PsfArgs psf;
  auto* c_psf = app.add_subcommand("psf", "point-source PSF study against the diffuse kernel");
  c_psf->add_option("--scene", psf.scene, "scene JSON with a single-pixel emitter")->required();
  c_psf->add_option("--out", psf.out, "output directory")->required();
  c_psf->add_option("--profile", psf.profile, "radial profile CSV")->required();
  c_psf->add_option("--eps", psf.eps, "kernel truncation ratio")->check(alpha_range);
  c_psf->add_flag("--include-ballistic", psf.include_ballistic, "profile the full PSF instead of the halo");
  c_psf->add_option("--photons", psf.photons, "override n_photons")->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  c_psf->add_option("--seed", psf.seed, "override seed");

  RefocusArgs rf;
  auto* c_rf = app.add_subcommand("refocus", "shift-and-add refocus");
  c_rf->add_option("--lf", rf.lf, "light-field directory or manifest")->required();
  auto* rf_depth = c_rf->add_option("--depth", rf.depth, "refocus depth (m)")->check(positive);
  auto* rf_alpha = c_rf->add_option("--alpha", rf.alpha, "relative refocus parameter z/(f+z)")->check(alpha_range);
  rf_depth->excludes(rf_alpha);
  c_rf->add_option("--interp", rf.interpolation, "nearest|bilinear")->check(CLI::IsMember({"nearest", "bilinear"}));
  c_rf->add_option("--norm", rf.normalization, "mean|sum")->check(CLI::IsMember({"mean", "sum"}));
  c_rf->add_option("--out", rf.out, "output image (.pfm or .png)")->required();

  KernelArgs kr;
  auto* c_k = app.add_subcommand("kernel", "rasterize the diffuse kernel");
  c_k->add_option("--mu-a", kr.mu_a, "absorption coefficient (1/m)")->required()->check(non_negative);
  c_k->add_option("--mu-s", kr.mu_s, "scattering coefficient (1/m)")->required()->check(positive);
  c_k->add_option("--g", kr.g, "anisotropy in [0, 1)")->required()->check(g_range);
  c_k->add_option("--pixel-scale", kr.pixel_scale, "m per kernel pixel")->required()->check(positive);
  c_k->add_option("--eps", kr.eps, "truncation ratio")->check(alpha_range);
  c_k->add_option("--mirror", kr.mirror, "image-source distance (m)")->check(positive);
  c_k->add_option("--max-width", kr.max_width, "largest allowed kernel width")->check(CLI::Range(1, 1 << 15));
  c_k->add_option("--out", kr.out, "kernel PFM")->required();

  ReconstructArgs rc;
  auto* c_rc = app.add_subcommand("reconstruct", "refocus and invert with the diffuse kernel");
  c_rc->add_option("--lf", rc.lf, "light-field directory or manifest")->required();
  c_rc->add_option("--kernel", rc.kernel, "kernel PFM")->required();
  c_rc->add_option("--zeta", rc.zeta, "Wiener signal-to-noise weight")->check(positive);
  c_rc->add_option("--mode", rc.mode, "self|passive")->check(CLI::IsMember({"self", "passive"}));
  c_rc->add_option("--out", rc.out, "reconstruction image")->required();
  c_rc->add_option("--tmap", rc.tmap, "transmission map output");
  c_rc->add_option("--atmo", rc.atmo, "atmosphere JSON output");
  auto* rc_depth = c_rc->add_option("--depth", rc.depth, "refocus depth (m), default object_depth_m")->check(positive);
  auto* rc_alpha = c_rc->add_option("--alpha", rc.alpha, "relative refocus parameter")->check(alpha_range);
  rc_depth->excludes(rc_alpha);
  c_rc->add_option("--path-length", rc.path_length, "ballistic path length (m), default slab thickness")->check(non_negative);
  c_rc->add_flag("--ballistic", rc.ballistic, "deconvolve with kernel + delta");
  c_rc->add_option("--padding", rc.padding, "zero|periodic")->check(CLI::IsMember({"zero", "periodic"}));

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "PSNR and SSIM of an image against a reference");
  c_ev->add_option("--a", ev.a, "image")->required();
  c_ev->add_option("--b", ev.b, "reference image")->required();
  c_ev->add_option("--report", ev.report, "report JSON")->required();
  c_ev->add_option("--max", ev.max_value, "peak value")->check(positive);

  OtArgs ot;
  auto* c_ot = app.add_subcommand("ot", "optical thickness from power-meter readings");
  c_ot->add_option("--po", ot.po, "launched power")->required()->check(positive);
  c_ot->add_option("--pa", ot.pa, "detected power")->required()->check(positive);
  c_ot->add_option("--report", ot.report, "optional JSON record");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageExit;
  }
  if (*c_rf && !rf.depth && !rf.alpha) {
    err << "error: refocus needs --depth or --alpha\n";
    return kUsageExit;
  }

  Context ctx{std::vector<std::string>(argv, argv + argc), out, err};
  try {
    if (*c_sim) do_simulate(sim, ctx);
    if (*c_psf) do_psf(psf, ctx);
    if (*c_rf) do_refocus(rf, ctx);
    if (*c_k) do_kernel(kr, ctx);
    if (*c_rc) do_reconstruct(rc, ctx);
    if (*c_ev) do_evaluate(ev, ctx);
    if (*c_ot) do_ot(ot, ctx);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kInternalExit;
  }
  return 0;
}

}  // namespace scatterfield::cli
