#include "scatterfield/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "scatterfield/error.hpp"

namespace scatterfield::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_fast(int n) {
  for (int p : {2, 3, 5, 7}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

}  // namespace

int next_fast_size(int n) {
  require(n >= 1, "transform size must be >= 1");
  while (!is_fast(n)) ++n;
  return n;
}

RealTransform2D::RealTransform2D(int width, int height) : width_(width), height_(height) {
  require(width >= 1 && height >= 1, "transform size must be >= 1");
  const std::size_t n_real = static_cast<std::size_t>(width) * height;
  const std::size_t n_complex = static_cast<std::size_t>(spectrum_width()) * height;
  real_ = fftw_alloc_real(n_real);
  auto* cplx = fftw_alloc_complex(n_complex);
  complex_ = cplx;
  if (real_ == nullptr || cplx == nullptr) fail(ErrorCode::too_large, "FFT buffer allocation failed");
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_2d(height, width, real_, cplx, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_2d(height, width, cplx, real_, FFTW_ESTIMATE);
}

RealTransform2D::~RealTransform2D() {
  {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  }
  fftw_free(real_);
  fftw_free(complex_);
}

std::vector<std::complex<double>> RealTransform2D::forward(std::span<const double> input) {
  require(input.size() == static_cast<std::size_t>(width_) * height_, "FFT input size mismatch");
  std::copy(input.begin(), input.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const std::size_t n = static_cast<std::size_t>(spectrum_width()) * height_;
  std::vector<std::complex<double>> out(n);
  std::memcpy(out.data(), complex_, n * sizeof(fftw_complex));
  return out;
}

std::vector<double> RealTransform2D::inverse(std::span<const std::complex<double>> spectrum) {
  const std::size_t n = static_cast<std::size_t>(spectrum_width()) * height_;
  require(spectrum.size() == n, "FFT spectrum size mismatch");
  std::memcpy(complex_, spectrum.data(), n * sizeof(fftw_complex));
  // c2r destroys its input; the copy above keeps the caller's spectrum intact.
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const std::size_t n_real = static_cast<std::size_t>(width_) * height_;
  const double scale = 1.0 / static_cast<double>(n_real);
  std::vector<double> out(real_, real_ + n_real);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace scatterfield::fft
