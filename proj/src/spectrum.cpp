#include "spectrum.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <cmath>
#include <mutex>
#include <string>

#include "error.hpp"

namespace fresh {

namespace {

// FFTW's planner is not thread-safe; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

ComplexMatrix dft2(const RealMatrix& channel) {
  const auto n = channel.rows();
  if (n != channel.cols())
    throw InvalidArgument("dft2: matrix must be square, got " + std::to_string(channel.rows()) +
                          "x" + std::to_string(channel.cols()));
  if (n < 2) throw InvalidArgument("dft2: matrix side must be at least 2");

  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) out.data()[i] = channel.data()[i];

  // In place; std::complex<double> is layout compatible with fftw_complex.
  auto* buffer = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buffer, buffer, FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

Spectrum spectrum_full(const Image& image) {
  if (!image.is_square())
    throw InvalidArgument("spectrum: image must be square, got " + std::to_string(image.height) +
                          "x" + std::to_string(image.width));
  const int n = image.height;
  if (n < 2) throw InvalidArgument("spectrum: image side must be at least 2");

  Spectrum spectrum{std::vector<double>(n - 1, 0.0)};
  RealMatrix channel(n, n);
  for (int c = 0; c < image.channels; ++c) {
    const auto src = image.channel(c);
    std::copy(src.begin(), src.end(), channel.data());
    const ComplexMatrix f = dft2(channel);
    // Only pairs with i + j <= N - 1 are consulted.
    for (int i = 0; i < n; ++i)
      for (int j = (i == 0 ? 1 : 0); i + j <= n - 1; ++j)
        spectrum.entries[i + j - 1] += std::abs(f(i, j));
  }
  return spectrum;
}

Spectrum spectrum_cropped(const Image& image, int n) {
  if (n < 1 || n > image.height - 1)
    throw InvalidArgument("spectrum size n=" + std::to_string(n) + " is outside [1, " +
                          std::to_string(image.height - 1) + "]");
  Spectrum full = spectrum_full(image);
  full.entries.resize(n);
  return full;
}

NormalizedSpectrum normalize(const Spectrum& spectrum) {
  double total = 0.0;
  for (double v : spectrum.entries) total += v;
  if (!(total > 0.0))
    throw DegenerateInput("spectrum is identically zero (constant signal); it cannot be normalized");
  std::vector<double> mass(spectrum.entries.size());
  for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = spectrum.entries[i] / total;
  return NormalizedSpectrum(std::move(mass));
}

Spectrum working_spectrum(const Image& image, int resolution, int n) {
  if (n > resolution - 1)
    throw InvalidArgument("spectrum size n=" + std::to_string(n) +
                          " exceeds working resolution - 1 = " + std::to_string(resolution - 1));
  return spectrum_cropped(resample_square(image, resolution), n);
}

void write_spectrum_csv(const Spectrum& spectrum, std::ostream& out) {
  out << "d,value\n";
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    out << fmt::format("{},{}\n", i + 1, spectrum.entries[i]);
}

}  // namespace fresh
