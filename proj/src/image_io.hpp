#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace fresh {

// Channel-major raster: sample (c, r, x) lives at data[(c * height + r) * width + x].
// Loaded images hold values in [0, 1]; intermediate images (scaled targets,
// raw network outputs, residuals) may hold any finite value.
struct Image {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Image() = default;
  Image(int channels, int height, int width, double fill = 0.0);

  std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }
  bool is_square() const { return height == width; }
  bool same_shape(const Image& other) const {
    return channels == other.channels && height == other.height && width == other.width;
  }

  double& at(int c, int r, int x) { return data[(static_cast<std::size_t>(c) * height + r) * width + x]; }
  double at(int c, int r, int x) const {
    return data[(static_cast<std::size_t>(c) * height + r) * width + x];
  }

  std::span<double> channel(int c) {
    return {data.data() + static_cast<std::size_t>(c) * pixel_count(), pixel_count()};
  }
  std::span<const double> channel(int c) const {
    return {data.data() + static_cast<std::size_t>(c) * pixel_count(), pixel_count()};
  }
};

// Pixel-centre coordinates in [-1, 1]^2, row-major. coords[i] = {x, y} where x
// follows the column and y the row; corners map exactly to +-1.
struct CoordGrid {
  int height = 0;
  int width = 0;
  std::vector<std::array<double, 2>> coords;
};

Image load_png(const std::filesystem::path& path);
void save_png(const Image& image, const std::filesystem::path& path);

// Bilinear resampling onto side x side with corner-aligned sampling (the same
// convention as make_coord_grid) and clamped edges.
Image resample_square(const Image& image, int side);

CoordGrid make_coord_grid(int height, int width);

// image.data scaled by alpha; a convenience used by the scale-invariance checks.
Image scaled(const Image& image, double alpha);

}  // namespace fresh
