#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "metrics.hpp"
#include "oracles/oracles.hpp"

using namespace fresh;

namespace {

Image lcg_image(std::uint64_t seed, int channels, int h, int w) {
  Image im(channels, h, w);
  oracle::Lcg rng(seed);
  for (double& v : im.data) v = rng.uniform();
  return im;
}

}  // namespace

TEST_CASE("mse and psnr") {
  Image a(1, 1, 4);
  Image b(1, 1, 4);
  a.data = {0.0, 0.5, 1.0, 0.25};
  b.data = {0.1, 0.5, 0.8, 0.25};
  CHECK(mse(a, b) == doctest::Approx((0.01 + 0.04) / 4).epsilon(1e-15));
  CHECK(psnr(a, b) == doctest::Approx(-10 * std::log10(0.0125)));
  CHECK(psnr_from_mse(0.01) == doctest::Approx(20.0));
  CHECK(psnr(a, a) == kPsnrCap);
  CHECK(psnr_from_mse(1e-12) == kPsnrCap);
  CHECK(psnr(Image(3, 4, 4, 0.0), Image(3, 4, 4, 1.0)) == 0.0);
  CHECK_THROWS_AS(mse(a, Image(1, 2, 2)), InvalidArgument);
  CHECK_THROWS_AS(mse(Image(1, 0, 0), Image(1, 0, 0)), InvalidArgument);
}

TEST_CASE("ssim") {
  SUBCASE("identical images score 1") {
    const Image a = lcg_image(1, 3, 16, 16);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("matches the direct windowed sum") {
    const Image a = lcg_image(2, 1, 19, 23);
    const Image b = lcg_image(3, 1, 19, 23);
    CHECK(ssim(a, b) == doctest::Approx(oracle::brute_ssim(a, b)).epsilon(1e-12));
    const Image c = lcg_image(4, 3, 14, 12);
    const Image d = lcg_image(5, 3, 14, 12);
    CHECK(ssim(c, d) == doctest::Approx(oracle::brute_ssim(c, d)).epsilon(1e-12));
  }
  SUBCASE("frozen scikit-image values") {
    // structural_similarity(gaussian_weights=True, sigma=1.5,
    // use_sample_covariance=False, data_range=1) on the same LCG images.
    const Image a = lcg_image(21, 1, 24, 20);
    const Image noise = lcg_image(22, 1, 24, 20);
    Image b = a;
    for (std::size_t i = 0; i < b.data.size(); ++i)
      b.data[i] = std::clamp(a.data[i] + 0.2 * (noise.data[i] - 0.5), 0.0, 1.0);
    CHECK(ssim(a, b) == doctest::Approx(0.9837705533968855).epsilon(1e-10));

    const Image c = lcg_image(23, 3, 16, 30);
    Image d = lcg_image(24, 3, 16, 30);
    for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] = 0.5 * d.data[i] + 0.5 * c.data[i];
    CHECK(ssim(c, d) == doctest::Approx(0.6768421590964941).epsilon(1e-10));
  }
  SUBCASE("a binary image against its inverse is anticorrelated") {
    Image a(1, 16, 16);
    oracle::Lcg rng(8);
    for (double& v : a.data) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
    Image b = a;
    for (double& v : b.data) v = 1.0 - v;
    CHECK(ssim(a, b) < 0.0);
  }
  SUBCASE("symmetric") {
    const Image a = lcg_image(6, 1, 12, 12);
    const Image b = lcg_image(7, 1, 12, 12);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-14));
  }
  SUBCASE("too small or mismatched") {
    CHECK_THROWS_AS(ssim(Image(1, 10, 20), Image(1, 10, 20)), InvalidArgument);
    CHECK_THROWS_AS(ssim(Image(1, 12, 12), Image(3, 12, 12)), InvalidArgument);
  }
}
