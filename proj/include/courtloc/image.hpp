#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "courtloc/errors.hpp"

namespace courtloc {

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb8&) const = default;
};

// Row-major 8-bit raster, 1 (gray) or 3 (RGB) channels.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  static ImageBuffer gray(int width, int height, std::uint8_t fill = 0);
  static ImageBuffer rgb(int width, int height, Rgb8 fill = {});

  std::size_t index(int row, int col, int channel = 0) const {
    return (static_cast<std::size_t>(row) * width + col) * channels + channel;
  }
  std::uint8_t& at(int row, int col, int channel = 0) {
    return data[index(row, col, channel)];
  }
  std::uint8_t at(int row, int col, int channel = 0) const {
    return data[index(row, col, channel)];
  }
  Rgb8 pixel(int row, int col) const {
    const std::size_t i = index(row, col, 0);
    return {data[i], data[i + 1], data[i + 2]};
  }
  void set_pixel(int row, int col, Rgb8 c) {
    const std::size_t i = index(row, col, 0);
    data[i] = c.r;
    data[i + 1] = c.g;
    data[i + 2] = c.b;
  }
  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width;
  }
  bool operator==(const ImageBuffer&) const = default;
};

// Throws ShapeError when dimensions and data length disagree.
void validate(const ImageBuffer& img);

// Binary PPM (P6) / PGM (P5), maxval 255.
void write_ppm(const ImageBuffer& img, const std::filesystem::path& path);
void write_pgm(const ImageBuffer& img, const std::filesystem::path& path);
void write_pnm(const ImageBuffer& img, std::ostream& out);
ImageBuffer read_pnm(std::istream& in, const std::string& name = "<stream>");
ImageBuffer read_pnm(const std::filesystem::path& path);
ImageBuffer read_ppm(const std::filesystem::path& path);  // requires P6
ImageBuffer read_pgm(const std::filesystem::path& path);  // requires P5

}  // namespace courtloc
