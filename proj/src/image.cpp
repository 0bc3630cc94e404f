#include "courtloc/image.hpp"

#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace courtloc {

ImageBuffer ImageBuffer::gray(int width, int height, std::uint8_t fill) {
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.channels = 1;
  img.data.assign(static_cast<std::size_t>(width) * height, fill);
  return img;
}

ImageBuffer ImageBuffer::rgb(int width, int height, Rgb8 fill) {
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.channels = 3;
  img.data.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < img.data.size(); i += 3) {
    img.data[i] = fill.r;
    img.data[i + 1] = fill.g;
    img.data[i + 2] = fill.b;
  }
  return img;
}

void validate(const ImageBuffer& img) {
  if (img.width <= 0 || img.height <= 0)
    throw ShapeError("image dimensions must be positive");
  if (img.channels != 1 && img.channels != 3)
    throw ShapeError("image must have 1 or 3 channels");
  const std::size_t expected =
      static_cast<std::size_t>(img.width) * img.height * img.channels;
  if (img.data.size() != expected)
    throw ShapeError("image data length does not match dimensions");
}

void write_pnm(const ImageBuffer& img, std::ostream& out) {
  validate(img);
  out << (img.channels == 3 ? "P6" : "P5") << "\n"
      << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) throw IoError("failed to write image stream");
}

namespace {

void write_file(const ImageBuffer& img, const std::filesystem::path& path,
                int channels, const char* kind) {
  if (img.channels != channels)
    throw ShapeError(std::string(kind) + " output requires " +
                     std::to_string(channels) + "-channel image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_pnm(img, out);
  if (!out) throw IoError("failed to write: " + path.string());
}

// Skips whitespace and '#' comments between header tokens.
int read_header_int(std::istream& in, const std::string& name) {
  int ch = in.peek();
  while (ch != std::istream::traits_type::eof()) {
    if (ch == '#') {
      while (ch != '\n' && ch != std::istream::traits_type::eof()) {
        in.get();
        ch = in.peek();
      }
    } else if (std::isspace(ch)) {
      in.get();
      ch = in.peek();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw ParseError(name + ": malformed PNM header");
  return value;
}

}  // namespace

void write_ppm(const ImageBuffer& img, const std::filesystem::path& path) {
  write_file(img, path, 3, "PPM");
}

void write_pgm(const ImageBuffer& img, const std::filesystem::path& path) {
  write_file(img, path, 1, "PGM");
}

ImageBuffer read_pnm(std::istream& in, const std::string& name) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw ParseError(name + ": not a binary PGM (P5) or PPM (P6) file");
  const int channels = magic[1] == '6' ? 3 : 1;
  const int width = read_header_int(in, name);
  const int height = read_header_int(in, name);
  const int maxval = read_header_int(in, name);
  if (width <= 0 || height <= 0)
    throw ParseError(name + ": non-positive dimensions");
  if (maxval != 255)
    throw ParseError(name + ": only maxval 255 is supported, got " +
                     std::to_string(maxval));
  in.get();  // single whitespace after maxval
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.data.resize(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
    throw ParseError(name + ": truncated pixel data");
  return img;
}

ImageBuffer read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path.string());
  return read_pnm(in, path.string());
}

ImageBuffer read_ppm(const std::filesystem::path& path) {
  ImageBuffer img = read_pnm(path);
  if (img.channels != 3)
    throw ShapeError("expected PPM (3 channels): " + path.string());
  return img;
}

ImageBuffer read_pgm(const std::filesystem::path& path) {
  ImageBuffer img = read_pnm(path);
  if (img.channels != 1)
    throw ShapeError("expected PGM (1 channel): " + path.string());
  return img;
}

}  // namespace courtloc
