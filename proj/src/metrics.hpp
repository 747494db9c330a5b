#pragma once

#include "image_io.hpp"

namespace fresh {

// Reported instead of +inf when two images are identical.
inline constexpr double kPsnrCap = 99.0;

double mse(const Image& pred, const Image& target);

// -10 log10(mse) for unit-range data, clamped to kPsnrCap.
double psnr_from_mse(double mse);
double psnr(const Image& pred, const Image& target);

// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03,
// unit dynamic range, averaged over the valid region. RGB images are compared
// on their BT.601 luma.
double ssim(const Image& pred, const Image& target);

}  // namespace fresh
