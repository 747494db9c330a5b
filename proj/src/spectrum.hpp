#pragma once

#include <Eigen/Core>
#include <complex>
#include <ostream>
#include <vector>

#include "image_io.hpp"
#include "transport.hpp"

namespace fresh {

using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Direction-invariant spectrum: entries[d - 1] is the summed DFT magnitude over
// all index pairs with i + j = d, for d = 1..L. The constant term d = 0 is
// never stored.
struct Spectrum {
  std::vector<double> entries;
  std::size_t size() const { return entries.size(); }
};

// A normalized spectrum is a distribution over frequency indices 1..n.
using NormalizedSpectrum = DiscreteDistribution;

// Unnormalized forward 2D DFT, F(j,k) = sum_m sum_n e^{-2pi i jm/N} e^{-2pi i kn/N} A(m,n).
ComplexMatrix dft2(const RealMatrix& channel);

Spectrum spectrum_full(const Image& image);
Spectrum spectrum_cropped(const Image& image, int n);

// Throws DegenerateInput when every entry is zero (a constant signal).
NormalizedSpectrum normalize(const Spectrum& spectrum);

// Working-resolution spectrum used by selection and analysis: the image is
// resampled to resolution x resolution, then cropped to n entries.
Spectrum working_spectrum(const Image& image, int resolution, int n);

// CSV with header `d,value`, d starting at 1.
void write_spectrum_csv(const Spectrum& spectrum, std::ostream& out);

}  // namespace fresh
