#include "courtloc/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "courtloc/parallel.hpp"

namespace courtloc::preprocess {

HsvPixel rgb_to_hsv(Rgb8 p) {
  const double r = p.r, g = p.g, b = p.b;
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double delta = max - min;
  HsvPixel out;
  out.v = max / 255.0;
  out.s = max == 0.0 ? 0.0 : delta / max;
  if (delta == 0.0) {
    out.h = 0.0;
  } else if (max == r) {
    out.h = 60.0 * std::fmod((g - b) / delta, 6.0);
  } else if (max == g) {
    out.h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    out.h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (out.h < 0.0) out.h += 360.0;
  return out;
}

void validate(const WhiteMaskConfig& cfg) {
  auto check = [](const HsvRange& r, const char* which) {
    if (r.h_lo > r.h_hi || r.s_lo > r.s_hi || r.v_lo > r.v_hi)
      throw DomainError(std::string("white mask ") + which +
                        ": lo must not exceed hi");
  };
  check(cfg.range_a, "range_a");
  check(cfg.range_b, "range_b");
}

namespace {

void mask_row(const ImageBuffer& rgb, const WhiteMaskConfig& cfg, int row,
              ImageBuffer& out) {
  for (int col = 0; col < rgb.width; ++col) {
    const HsvPixel hsv = rgb_to_hsv(rgb.pixel(row, col));
    out.at(row, col) =
        cfg.range_a.contains(hsv) || cfg.range_b.contains(hsv) ? 255 : 0;
  }
}

void mask_rows_serial(const ImageBuffer& rgb, const WhiteMaskConfig& cfg,
                      ImageBuffer& out) {
  for (int row = 0; row < rgb.height; ++row) mask_row(rgb, cfg, row, out);
}

void mask_rows_omp(const ImageBuffer& rgb, const WhiteMaskConfig& cfg,
                   ImageBuffer& out) {
#pragma omp parallel for schedule(static)
  for (int row = 0; row < rgb.height; ++row) mask_row(rgb, cfg, row, out);
}

}  // namespace

ImageBuffer mask_white(const ImageBuffer& rgb, const WhiteMaskConfig& cfg) {
  validate(rgb);
  validate(cfg);
  if (rgb.channels != 3)
    throw ShapeError("mask_white expects a 3-channel image");
  ImageBuffer out = ImageBuffer::gray(rgb.width, rgb.height);
  if (par::parallel_enabled())
    mask_rows_omp(rgb, cfg, out);
  else
    mask_rows_serial(rgb, cfg, out);
  return out;
}

void validate(const RadialScanConfig& cfg) {
  if (!(cfg.angle_step_deg > 0.0))
    throw DomainError("radial scan angle step must be positive");
  if (cfg.angle_end_deg < cfg.angle_start_deg)
    throw DomainError("radial scan angle range is empty");
}

namespace {

// Transition marks produced by one ray, as flat pixel offsets.
std::vector<std::size_t> scan_ray(const ImageBuffer& binary, double angle_deg) {
  std::vector<std::size_t> marks;
  const int w = binary.width;
  const int h = binary.height;
  const double cx = w / 2.0;
  const double cy = h;
  const double angle = angle_deg * (std::numbers::pi / 180.0);
  const double ca = std::cos(angle);
  const double sa = std::sin(angle);
  const int max_d = std::max(h, w);
  std::uint8_t last = 0;
  for (int d = 0; d <= max_d; ++d) {
    const long x = std::lround(cx + d * ca);
    long y = std::lround(cy - d * sa);
    if (y >= h) y = h - 1;  // bottom-row origin sits one past the last row
    if (x < 0 || x >= w || y < 0) continue;
    const std::uint8_t pixel = binary.at(static_cast<int>(y), static_cast<int>(x));
    if (last == 255 && pixel != 255)
      marks.push_back(binary.index(static_cast<int>(y), static_cast<int>(x)));
    last = pixel;
  }
  return marks;
}

}  // namespace

ImageBuffer radial_downsample(const ImageBuffer& binary,
                              const RadialScanConfig& cfg) {
  validate(binary);
  validate(cfg);
  if (binary.channels != 1)
    throw ShapeError("radial_downsample expects a 1-channel image");
  for (std::uint8_t v : binary.data)
    if (v != 0 && v != 255)
      throw DomainError("radial_downsample expects a binary {0,255} image");

  const int rays = cfg.ray_count();
  std::vector<std::vector<std::size_t>> marks(rays);
  // Rays are independent; the merge below makes the output order-invariant
  // (every write stores 255).
  if (par::parallel_enabled()) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rays; ++i)
      marks[i] = scan_ray(binary, cfg.angle_start_deg + i * cfg.angle_step_deg);
  } else {
    for (int i = 0; i < rays; ++i)
      marks[i] = scan_ray(binary, cfg.angle_start_deg + i * cfg.angle_step_deg);
  }

  ImageBuffer out = ImageBuffer::gray(binary.width, binary.height);
  for (const auto& ray_marks : marks)
    for (std::size_t offset : ray_marks) out.data[offset] = 255;
  return out;
}

ImageBuffer crop_top(const ImageBuffer& img, int rows) {
  validate(img);
  if (rows < 0) throw ShapeError("crop_top: rows must be >= 0");
  if (rows >= img.height)
    throw ShapeError("crop_top: cannot remove " + std::to_string(rows) +
                     " rows from a " + std::to_string(img.height) +
                     "-row image");
  ImageBuffer out;
  out.width = img.width;
  out.height = img.height - rows;
  out.channels = img.channels;
  const std::size_t offset = img.index(rows, 0, 0);
  out.data.assign(img.data.begin() + static_cast<std::ptrdiff_t>(offset),
                  img.data.end());
  return out;
}

std::vector<float> normalize_flatten(const ImageBuffer& gray) {
  validate(gray);
  if (gray.channels != 1)
    throw ShapeError("normalize_flatten expects a 1-channel image");
  std::vector<float> out(gray.data.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<float>(gray.data[i]) / 255.0f;
  return out;
}

std::vector<float> preprocess_pipeline(const ImageBuffer& rgb,
                                       const PipelineConfig& cfg) {
  const ImageBuffer mask = mask_white(rgb, cfg.mask);
  const ImageBuffer sparse = radial_downsample(mask, cfg.scan);
  const ImageBuffer cropped = crop_top(sparse, cfg.crop_rows);
  return normalize_flatten(cropped);
}

namespace {

double parse_num(const std::string& tok, const std::string& src, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(src, line, "expected a number, got '" + tok + "'");
  }
}

}  // namespace

PipelineConfig parse_pipeline_config(std::istream& in, const std::string& name) {
  PipelineConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    std::vector<std::string> args;
    for (std::string tok; ls >> tok;) args.push_back(tok);
    auto need = [&](std::size_t n) {
      if (args.size() != n)
        throw ParseError(name, line_no,
                         key + " expects " + std::to_string(n) + " values");
    };
    auto range = [&]() {
      need(6);
      HsvRange r;
      r.h_lo = parse_num(args[0], name, line_no);
      r.h_hi = parse_num(args[1], name, line_no);
      r.s_lo = parse_num(args[2], name, line_no);
      r.s_hi = parse_num(args[3], name, line_no);
      r.v_lo = parse_num(args[4], name, line_no);
      r.v_hi = parse_num(args[5], name, line_no);
      return r;
    };
    if (key == "mask_a") {
      cfg.mask.range_a = range();
    } else if (key == "mask_b") {
      cfg.mask.range_b = range();
    } else if (key == "scan") {
      need(3);
      cfg.scan.angle_start_deg = parse_num(args[0], name, line_no);
      cfg.scan.angle_end_deg = parse_num(args[1], name, line_no);
      cfg.scan.angle_step_deg = parse_num(args[2], name, line_no);
    } else if (key == "crop_rows") {
      need(1);
      cfg.crop_rows = static_cast<int>(parse_num(args[0], name, line_no));
    } else {
      throw ParseError(name, line_no, "unknown directive '" + key + "'");
    }
  }
  validate(cfg.mask);
  validate(cfg.scan);
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pipeline config: " + path.string());
  return parse_pipeline_config(in, path.string());
}

}  // namespace courtloc::preprocess
