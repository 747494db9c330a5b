#include "metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"

namespace fresh {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b))
    throw InvalidArgument(std::string(what) + ": image shapes differ (" +
                          std::to_string(a.channels) + "x" + std::to_string(a.height) + "x" +
                          std::to_string(a.width) + " vs " + std::to_string(b.channels) + "x" +
                          std::to_string(b.height) + "x" + std::to_string(b.width) + ")");
}

std::vector<double> luma(const Image& image) {
  if (image.channels == 1) return {image.data.begin(), image.data.end()};
  const auto r = image.channel(0);
  const auto g = image.channel(1);
  const auto b = image.channel(2);
  std::vector<double> out(image.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  return out;
}

constexpr int kWindow = 11;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    taps[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    total += taps[i];
  }
  for (double& t : taps) t /= total;
  return taps;
}

// Separable valid-mode Gaussian filter: (h - 10) x (w - 10) output.
std::vector<double> filter_valid(const std::vector<double>& src, int h, int w,
                                 const std::array<double, kWindow>& taps) {
  const int oh = h - kWindow + 1;
  const int ow = w - kWindow + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int r = 0; r < h; ++r)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * src[static_cast<std::size_t>(r) * w + x + k];
      rows[static_cast<std::size_t>(r) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int r = 0; r < oh; ++r)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * rows[static_cast<std::size_t>(r + k) * ow + x];
      out[static_cast<std::size_t>(r) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double mse(const Image& pred, const Image& target) {
  require_same_shape(pred, target, "mse");
  if (pred.data.empty()) throw InvalidArgument("mse: empty images");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    sum += d * d;
  }
  return sum / static_cast<double>(pred.data.size());
}

double psnr_from_mse(double mse) {
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, -10.0 * std::log10(mse));
}

double psnr(const Image& pred, const Image& target) { return psnr_from_mse(mse(pred, target)); }

double ssim(const Image& pred, const Image& target) {
  require_same_shape(pred, target, "ssim");
  if (pred.height < kWindow || pred.width < kWindow)
    throw InvalidArgument("ssim: images must be at least 11x11");

  const int h = pred.height;
  const int w = pred.width;
  const auto x = luma(pred);
  const auto y = luma(target);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto taps = gaussian_taps();
  const auto mu_x = filter_valid(x, h, w, taps);
  const auto mu_y = filter_valid(y, h, w, taps);
  const auto e_xx = filter_valid(xx, h, w, taps);
  const auto e_yy = filter_valid(yy, h, w, taps);
  const auto e_xy = filter_valid(xy, h, w, taps);

  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mu_x.size());
}

}  // namespace fresh
