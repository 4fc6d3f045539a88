// Test-only reference implementations: direct loops, no FFTs.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scatterfield/deconv.hpp"
#include "scatterfield/geometry.hpp"
#include "scatterfield/image.hpp"

namespace oracle {

// Owning copy, safe to iterate over a temporary image.
inline std::vector<double> values(const scatterfield::Image& image) {
  return {image.samples().begin(), image.samples().end()};
}

using scatterfield::Image;

inline Image random_image(int w, int h, std::uint64_t seed, int channels = 1, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Image img(w, h, channels);
  for (double& v : img.samples()) v = u(rng);
  return img;
}

// out(x) = sum_d k(d) in(x - d), kernel centred, zero outside the image.
inline Image direct_conv2(const Image& in, const Image& k, bool periodic) {
  Image out(in.width(), in.height(), in.channels());
  const int hw = k.width() / 2;
  const int hh = k.height() / 2;
  for (int c = 0; c < in.channels(); ++c) {
    for (int y = 0; y < in.height(); ++y) {
      for (int x = 0; x < in.width(); ++x) {
        double acc = 0.0;
        for (int j = 0; j < k.height(); ++j) {
          for (int i = 0; i < k.width(); ++i) {
            int sx = x - (i - hw);
            int sy = y - (j - hh);
            if (periodic) {
              sx = ((sx % in.width()) + in.width()) % in.width();
              sy = ((sy % in.height()) + in.height()) % in.height();
            } else if (sx < 0 || sy < 0 || sx >= in.width() || sy >= in.height()) {
              continue;
            }
            acc += k.at(i, j) * in.at(sx, sy, c);
          }
        }
        out.at(x, y, c) = acc;
      }
    }
  }
  return out;
}

inline double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) m = std::max(m, std::abs(a.samples()[i] - b.samples()[i]));
  return m;
}

inline double l2(const Image& a) {
  double s = 0.0;
  for (double v : a.samples()) s += v * v;
  return std::sqrt(s);
}

inline double rel_l2(const Image& a, const Image& b) {
  Image d = a;
  d -= b;
  return l2(d) / l2(b);
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("scatterfield_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
