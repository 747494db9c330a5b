#include "image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include "error.hpp"

namespace fresh {

Image::Image(int channels, int height, int width, double fill)
    : channels(channels), height(height), width(width),
      data(static_cast<std::size_t>(channels) * height * width, fill) {}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string color_type_name(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: return "gray";
    case PNG_COLOR_TYPE_GRAY_ALPHA: return "gray+alpha";
    case PNG_COLOR_TYPE_RGB: return "rgb";
    case PNG_COLOR_TYPE_RGB_ALPHA: return "rgb+alpha";
    case PNG_COLOR_TYPE_PALETTE: return "palette";
    default: return "unknown";
  }
}

struct PngHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  int interlace = 0;
};

// All libpng calls live in this frame so a longjmp never crosses C++ frames.
bool read_png_raw(std::FILE* fp, PngHeader& header, std::vector<png_byte>& pixels,
                  std::string& error) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) {
    error = "cannot allocate png reader";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    error = "cannot allocate png info";
    return false;
  }
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    error = "corrupt or truncated PNG data";
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  png_get_IHDR(png, info, &header.width, &header.height, &header.bit_depth, &header.color_type,
               &header.interlace, nullptr, nullptr);
  if (header.bit_depth != 8 || header.color_type == PNG_COLOR_TYPE_PALETTE) {
    png_destroy_read_struct(&png, &info, nullptr);
    return true;  // caller rejects with a precise message
  }
  if (header.interlace != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  pixels.resize(rowbytes * header.height);
  rows.resize(header.height);
  for (png_uint_32 r = 0; r < header.height; ++r) rows[r] = pixels.data() + r * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool write_png_raw(std::FILE* fp, png_uint_32 width, png_uint_32 height, int color_type,
                   std::vector<png_byte>& pixels, std::size_t rowbytes) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  std::vector<png_bytep> rows(height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = pixels.data() + r * rowbytes;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

Image load_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw NotFound("cannot open image '" + path.string() + "'");

  png_byte signature[8];
  if (std::fread(signature, 1, 8, fp.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0)
    throw IoError("'" + path.string() + "' is not a PNG file");
  std::rewind(fp.get());

  PngHeader header;
  std::vector<png_byte> pixels;
  std::string error;
  if (!read_png_raw(fp.get(), header, pixels, error))
    throw IoError("'" + path.string() + "': " + error);
  if (header.bit_depth != 8)
    throw IoError("'" + path.string() + "': unsupported bit depth " +
                  std::to_string(header.bit_depth) + " (only 8-bit PNGs are supported)");
  if (header.color_type == PNG_COLOR_TYPE_PALETTE)
    throw IoError("'" + path.string() + "': unsupported color type " +
                  color_type_name(header.color_type) + " (only gray and rgb are supported)");

  int stored = 0;
  int channels = 0;
  switch (header.color_type) {
    case PNG_COLOR_TYPE_GRAY: stored = 1; channels = 1; break;
    case PNG_COLOR_TYPE_GRAY_ALPHA: stored = 2; channels = 1; break;
    case PNG_COLOR_TYPE_RGB: stored = 3; channels = 3; break;
    case PNG_COLOR_TYPE_RGB_ALPHA: stored = 4; channels = 3; break;
    default:
      throw IoError("'" + path.string() + "': unsupported color type " +
                    color_type_name(header.color_type));
  }
  if (stored != channels)
    std::cerr << "warning: '" << path.string() << "' has an alpha channel; it was dropped\n";

  const int h = static_cast<int>(header.height);
  const int w = static_cast<int>(header.width);
  Image image(channels, h, w);
  for (int r = 0; r < h; ++r)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c)
        image.at(c, r, x) =
            pixels[(static_cast<std::size_t>(r) * w + x) * stored + c] / 255.0;
  return image;
}

void save_png(const Image& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3)
    throw InvalidArgument("save_png: images must have 1 or 3 channels");
  if (image.height < 1 || image.width < 1) throw InvalidArgument("save_png: empty image");
  const std::size_t rowbytes = static_cast<std::size_t>(image.width) * image.channels;
  std::vector<png_byte> pixels(rowbytes * image.height);
  for (int r = 0; r < image.height; ++r)
    for (int x = 0; x < image.width; ++x)
      for (int c = 0; c < image.channels; ++c) {
        const double v = std::clamp(image.at(c, r, x), 0.0, 1.0);
        pixels[r * rowbytes + static_cast<std::size_t>(x) * image.channels + c] =
            static_cast<png_byte>(std::floor(v * 255.0 + 0.5));
      }

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write '" + path.string() + "'");
  const int color_type = image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  if (!write_png_raw(fp.get(), image.width, image.height, color_type, pixels, rowbytes))
    throw IoError("failed while writing '" + path.string() + "'");
}

Image resample_square(const Image& image, int side) {
  if (side < 2) throw InvalidArgument("resample_square: side must be at least 2");
  if (image.height == side && image.width == side) return image;

  const double sy = image.height > 1 ? static_cast<double>(image.height - 1) / (side - 1) : 0.0;
  const double sx = image.width > 1 ? static_cast<double>(image.width - 1) / (side - 1) : 0.0;
  Image out(image.channels, side, side);
  for (int r = 0; r < side; ++r) {
    const double fy = r * sy;
    const int y0 = std::min(static_cast<int>(std::floor(fy)), image.height - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double ty = fy - y0;
    for (int x = 0; x < side; ++x) {
      const double fx = x * sx;
      const int x0 = std::min(static_cast<int>(std::floor(fx)), image.width - 1);
      const int x1 = std::min(x0 + 1, image.width - 1);
      const double tx = fx - x0;
      for (int c = 0; c < image.channels; ++c) {
        const double top = (1.0 - tx) * image.at(c, y0, x0) + tx * image.at(c, y0, x1);
        const double bottom = (1.0 - tx) * image.at(c, y1, x0) + tx * image.at(c, y1, x1);
        out.at(c, r, x) = (1.0 - ty) * top + ty * bottom;
      }
    }
  }
  return out;
}

CoordGrid make_coord_grid(int height, int width) {
  if (height < 1 || width < 1) throw InvalidArgument("make_coord_grid: dimensions must be >= 1");
  auto axis = [](int i, int n) { return n == 1 ? 0.0 : 2.0 * i / (n - 1) - 1.0; };
  CoordGrid grid{height, width, {}};
  grid.coords.reserve(static_cast<std::size_t>(height) * width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) grid.coords.push_back({axis(c, width), axis(r, height)});
  return grid;
}

Image scaled(const Image& image, double alpha) {
  Image out = image;
  for (double& v : out.data) v *= alpha;
  return out;
}

}  // namespace fresh
