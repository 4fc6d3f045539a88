#include "scatterfield/backscatter.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "scatterfield/error.hpp"

namespace scatterfield {

void AtmosphereEstimate::validate() const {
  require(!b_inf.empty(), "atmosphere estimate is empty");
  for (double b : b_inf) require(std::isfinite(b) && b >= 0.0 && b <= 1.0, "B_inf must lie in [0, 1]");
}

void DcpConfig::validate() const {
  require(window >= 1 && window % 2 == 1, "DCP window must be odd and >= 1");
  require(std::isfinite(omega) && omega >= 0.0 && omega <= 1.0, "omega must lie in [0, 1]");
  require(std::isfinite(t_min) && t_min > 0.0 && t_min <= 1.0, "t_min must lie in (0, 1]");
  require(std::isfinite(atmosphere_fraction) && atmosphere_fraction > 0.0 && atmosphere_fraction <= 1.0,
          "atmosphere fraction must lie in (0, 1]");
}

namespace {

// Sliding-window minimum over one row/column with edge replication (monotone deque).
void min_filter_line(const std::vector<double>& in, std::vector<double>& out, int radius) {
  const int n = static_cast<int>(in.size());
  std::deque<int> q;
  const auto value = [&](int i) { return in[static_cast<std::size_t>(std::clamp(i, 0, n - 1))]; };
  // Window for output i is [i - radius, i + radius]; indices are virtual (clamped on read).
  int next = -radius;
  for (int i = 0; i < n; ++i) {
    while (next <= i + radius) {
      while (!q.empty() && value(q.back()) >= value(next)) q.pop_back();
      q.push_back(next);
      ++next;
    }
    while (q.front() < i - radius) q.pop_front();
    out[static_cast<std::size_t>(i)] = value(q.front());
  }
}

Image min_filter(const Image& plane, int window) {
  const int w = plane.width();
  const int h = plane.height();
  const int radius = window / 2;
  Image tmp(w, h, 1);
  std::vector<double> line, filtered;
  line.resize(static_cast<std::size_t>(w));
  filtered.resize(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) line[static_cast<std::size_t>(x)] = plane.at(x, y);
    min_filter_line(line, filtered, radius);
    for (int x = 0; x < w; ++x) tmp.at(x, y) = filtered[static_cast<std::size_t>(x)];
  }
  Image out(w, h, 1);
  line.resize(static_cast<std::size_t>(h));
  filtered.resize(static_cast<std::size_t>(h));
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) line[static_cast<std::size_t>(y)] = tmp.at(x, y);
    min_filter_line(line, filtered, radius);
    for (int y = 0; y < h; ++y) out.at(x, y) = filtered[static_cast<std::size_t>(y)];
  }
  return out;
}

}  // namespace

Image dark_channel(const Image& image, int window) {
  require(!image.empty(), "dark channel needs a non-empty image");
  require(window >= 1 && window % 2 == 1, "DCP window must be odd and >= 1");
  Image channel_min(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      double m = image.at(x, y, 0);
      for (int c = 1; c < image.channels(); ++c) m = std::min(m, image.at(x, y, c));
      channel_min.at(x, y) = m;
    }
  }
  return min_filter(channel_min, window);
}

AtmosphereEstimate estimate_atmosphere(const Image& image, const Image& dark, const DcpConfig& config) {
  config.validate();
  require(!image.empty(), "atmosphere estimation needs a non-empty image");
  require(dark.width() == image.width() && dark.height() == image.height() && dark.channels() == 1,
          "dark channel must match the image size");

  const std::size_t n = image.plane_size();
  const auto count = static_cast<std::size_t>(std::floor(config.atmosphere_fraction * static_cast<double>(n)));
  AtmosphereEstimate est;
  est.b_inf.assign(static_cast<std::size_t>(image.channels()), 0.0);

  if (count == 0) {
    // Brightest pixel by channel sum.
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int c = 0; c < image.channels(); ++c) s += image.plane(c)[i];
      if (s > best_value) {
        best_value = s;
        best = i;
      }
    }
    for (int c = 0; c < image.channels(); ++c) {
      est.b_inf[static_cast<std::size_t>(c)] = std::clamp(image.plane(c)[best], 0.0, 1.0);
    }
    return est;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto d = dark.plane(0);
  // Stable ordering so ties resolve by pixel index.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  for (int c = 0; c < image.channels(); ++c) {
    const auto p = image.plane(c);
    double s = 0.0;
    for (std::size_t k = 0; k < count; ++k) s += p[order[k]];
    est.b_inf[static_cast<std::size_t>(c)] = std::clamp(s / static_cast<double>(count), 0.0, 1.0);
  }
  return est;
}

TransmissionMap estimate_transmission(const Image& image, const AtmosphereEstimate& atmosphere,
                                      const DcpConfig& config) {
  config.validate();
  atmosphere.validate();
  require(static_cast<int>(atmosphere.b_inf.size()) == image.channels(),
          "atmosphere channel count must match the image");
  for (double b : atmosphere.b_inf) require(b > 0.0, "B_inf channels must be > 0");

  Image normalized = image;
  for (int c = 0; c < image.channels(); ++c) {
    for (double& v : normalized.plane(c)) v /= atmosphere.b_inf[static_cast<std::size_t>(c)];
  }
  Image t = dark_channel(normalized, config.window);
  for (double& v : t.samples()) v = std::clamp(1.0 - config.omega * v, config.t_min, 1.0);
  return {std::move(t), config.t_min};
}

Image remove_backscatter(const Image& image, const AtmosphereEstimate& atmosphere,
                         const TransmissionMap& transmission) {
  require(static_cast<int>(atmosphere.b_inf.size()) == image.channels(),
          "atmosphere channel count must match the image");
  require(transmission.t.width() == image.width() && transmission.t.height() == image.height(),
          "transmission map must match the image size");
  Image out = image;
  for (int c = 0; c < image.channels(); ++c) {
    const double b = atmosphere.b_inf[static_cast<std::size_t>(c)];
    auto p = out.plane(c);
    const auto t = transmission.t.plane(0);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, p[i] - b * (1.0 - t[i]));
  }
  return out;
}

DlimjResult reconstruct_dlimj(const Image& refocused, const DiffuseKernel& kernel,
                              const DlimjConfig& config) {
  require(!refocused.empty(), "reconstruction needs a non-empty image");
  config.wiener.validate();
  DlimjResult result;

  if (config.mode == LuminousMode::self_luminous) {
    result.atmosphere.b_inf.assign(static_cast<std::size_t>(refocused.channels()), 0.0);
    result.transmission = {Image(refocused.width(), refocused.height(), 1, 1.0), config.dcp.t_min};
    result.gamma = attenuation_ratio(kernel.params.mu_s, config.path_length);
    require(result.gamma > 0.0, "attenuation underflows; path length too long for mu_s");
    result.reconstruction = wiener_deconv(refocused, kernel, config.wiener) * (1.0 / result.gamma);
    return result;
  }

  config.dcp.validate();
  const Image dark = dark_channel(refocused, config.dcp.window);
  result.atmosphere = estimate_atmosphere(refocused, dark, config.dcp);
  // A black atmosphere means no backscatter: transmission is one everywhere.
  const bool no_airlight =
      std::ranges::any_of(result.atmosphere.b_inf, [](double b) { return b <= 0.0; });
  if (no_airlight) {
    result.transmission = {Image(refocused.width(), refocused.height(), 1, 1.0), config.dcp.t_min};
  } else {
    result.transmission = estimate_transmission(refocused, result.atmosphere, config.dcp);
  }
  const Image cleaned = remove_backscatter(refocused, result.atmosphere, result.transmission);
  Image restored = wiener_deconv(cleaned, kernel, config.wiener);
  const auto t = result.transmission.t.plane(0);
  for (int c = 0; c < restored.channels(); ++c) {
    auto p = restored.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] /= std::max(t[i], config.dcp.t_min);
  }
  result.reconstruction = std::move(restored);
  return result;
}

}  // namespace scatterfield
