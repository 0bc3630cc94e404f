#include "courtloc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace courtloc::dataset {

using geometry::CourtSpec;
using geometry::Pose2D;

std::size_t DatasetManifest::count(Split s) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [s](const Sample& smp) { return smp.split == s; }));
}

namespace {

int coverage_cell(const CourtSpec& court, double x, double y, int gx, int gy) {
  const double fx = (x + court.half_length()) / court.length;
  const double fy = (y + court.half_width()) / court.width;
  const int cx = std::clamp(static_cast<int>(fx * gx), 0, gx - 1);
  const int cy = std::clamp(static_cast<int>(fy * gy), 0, gy - 1);
  return cy * gx + cx;
}

std::string sample_image_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.ppm", index);
  return std::string("images/") + buf;
}

}  // namespace

bool covers_grid(const std::vector<Sample>& samples, const CourtSpec& court,
                 int grid_x, int grid_y) {
  std::vector<char> hit(static_cast<std::size_t>(grid_x) * grid_y, 0);
  for (const Sample& s : samples)
    hit[static_cast<std::size_t>(coverage_cell(court, s.x, s.y, grid_x, grid_y))] = 1;
  return std::find(hit.begin(), hit.end(), 0) == hit.end();
}

DatasetManifest generate(const CourtSpec& court, const geometry::CameraRig& rig,
                         const render::RenderStyle& style, std::size_t n,
                         std::uint64_t seed, geometry::YawMode yaw_mode,
                         const std::filesystem::path& root,
                         const preprocess::PipelineConfig& pipeline) {
  if (n < 1) throw DomainError("generate: need at least one sample");
  geometry::validate(court);
  geometry::validate(rig);
  render::validate(style);

  // Draw pose sets until the coverage requirement holds (almost always the
  // first attempt for n >= threshold).
  std::vector<Pose2D> poses(n);
  std::uint64_t attempt = 0;
  for (;; ++attempt) {
    if (attempt >= 1000)
      throw DomainError("generate: grid coverage unreachable for n = " +
                        std::to_string(n));
    Rng rng(Rng::mix(seed, attempt));
    for (auto& pose : poses) pose = geometry::sample_pose(court, rng, yaw_mode);
    if (n < kCoverageThreshold) break;
    std::vector<Sample> probe(n);
    for (std::size_t i = 0; i < n; ++i) {
      probe[i].x = poses[i].x;
      probe[i].y = poses[i].y;
    }
    if (covers_grid(probe, court)) break;
  }

  std::error_code ec;
  std::filesystem::create_directories(root / "images", ec);
  if (ec)
    throw IoError("cannot create dataset directory: " + (root / "images").string() +
                  ": " + ec.message());

  DatasetManifest manifest;
  manifest.court_hash = geometry::court_hash(court);
  manifest.rig = rig;
  manifest.style = style;
  manifest.seed = seed;
  manifest.pipeline = pipeline;
  manifest.input_dim = static_cast<std::size_t>(rig.image_width) *
                       (rig.image_height - pipeline.crop_rows);
  manifest.samples.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Pose2D& pose = poses[i];
    const std::uint64_t render_seed = Rng::mix(Rng::mix(seed, attempt), i + 1);
    const ImageBuffer img = render::render_view(court, rig, pose, style, render_seed);
    Sample& s = manifest.samples[i];
    s.image_path = sample_image_name(i);
    s.x = pose.x;
    s.y = pose.y;
    s.yaw = pose.yaw;
    write_ppm(img, root / s.image_path);
  }
  return manifest;
}

bool split(DatasetManifest& manifest, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw DomainError("split: train fraction must be in (0, 1)");
  const std::size_t n = manifest.samples.size();
  if (n == 0) throw DomainError("split: empty manifest");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(order, rng);
  const std::size_t train_count =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
  for (std::size_t k = 0; k < n; ++k)
    manifest.samples[order[k]].split = k < train_count ? Split::Train : Split::Test;
  return train_count == 0 || train_count == n;
}

namespace {

constexpr const char* kManifestMagic = "courtloc-dataset 1";

const char* split_name(Split s) { return s == Split::Train ? "train" : "test"; }

}  // namespace

void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open manifest for writing: " + path.string());
  out.precision(17);
  out << kManifestMagic << "\n";
  out << "court_hash " << manifest.court_hash << "\n";
  const auto& rig = manifest.rig;
  out << "rig " << rig.fx << " " << rig.fy << " " << rig.cx << " " << rig.cy
      << " " << rig.image_width << " " << rig.image_height << " "
      << rig.mount_height << " " << rig.mount_pitch << "\n";
  const auto& st = manifest.style;
  out << "style " << int(st.floor_color.r) << " " << int(st.floor_color.g) << " "
      << int(st.floor_color.b) << " " << int(st.line_color.r) << " "
      << int(st.line_color.g) << " " << int(st.line_color.b) << " "
      << int(st.background_color.r) << " " << int(st.background_color.g) << " "
      << int(st.background_color.b) << " " << st.noise_std << " "
      << st.antialias_samples << "\n";
  out << "seed " << manifest.seed << "\n";
  const auto& pl = manifest.pipeline;
  auto range = [&](const char* key, const preprocess::HsvRange& r) {
    out << key << " " << r.h_lo << " " << r.h_hi << " " << r.s_lo << " " << r.s_hi
        << " " << r.v_lo << " " << r.v_hi << "\n";
  };
  range("mask_a", pl.mask.range_a);
  range("mask_b", pl.mask.range_b);
  out << "scan " << pl.scan.angle_start_deg << " " << pl.scan.angle_end_deg
      << " " << pl.scan.angle_step_deg << "\n";
  out << "crop_rows " << pl.crop_rows << "\n";
  out << "input_dim " << manifest.input_dim << "\n";
  out << "count " << manifest.samples.size() << "\n";
  out << "samples\n";
  for (const Sample& s : manifest.samples)
    out << s.image_path << " " << s.x << " " << s.y << " " << s.yaw << " "
        << split_name(s.split) << "\n";
  if (!out) throw IoError("failed to write manifest: " + path.string());
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  const std::string name = path.string();
  std::string line;
  int line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line != kManifestMagic)
    throw ParseError(name, line_no == 0 ? 1 : line_no,
                     "not a courtloc dataset manifest");

  DatasetManifest manifest;
  std::size_t declared_count = 0;
  bool in_samples = false;

  while (next_line()) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (!in_samples) {
      auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(name, line_no, msg);
      };
      if (key == "court_hash") {
        if (!(ls >> manifest.court_hash)) throw fail("bad court_hash");
      } else if (key == "rig") {
        auto& r = manifest.rig;
        if (!(ls >> r.fx >> r.fy >> r.cx >> r.cy >> r.image_width >>
              r.image_height >> r.mount_height >> r.mount_pitch))
          throw fail("bad rig line");
      } else if (key == "style") {
        auto& st = manifest.style;
        int v[9];
        if (!(ls >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5] >> v[6] >>
              v[7] >> v[8] >> st.noise_std >> st.antialias_samples))
          throw fail("bad style line");
        st.floor_color = {std::uint8_t(v[0]), std::uint8_t(v[1]), std::uint8_t(v[2])};
        st.line_color = {std::uint8_t(v[3]), std::uint8_t(v[4]), std::uint8_t(v[5])};
        st.background_color = {std::uint8_t(v[6]), std::uint8_t(v[7]),
                               std::uint8_t(v[8])};
      } else if (key == "seed") {
        if (!(ls >> manifest.seed)) throw fail("bad seed");
      } else if (key == "mask_a" || key == "mask_b") {
        auto& r = key == "mask_a" ? manifest.pipeline.mask.range_a
                                  : manifest.pipeline.mask.range_b;
        if (!(ls >> r.h_lo >> r.h_hi >> r.s_lo >> r.s_hi >> r.v_lo >> r.v_hi))
          throw fail("bad " + key + " line");
      } else if (key == "scan") {
        auto& sc = manifest.pipeline.scan;
        if (!(ls >> sc.angle_start_deg >> sc.angle_end_deg >> sc.angle_step_deg))
          throw fail("bad scan line");
      } else if (key == "crop_rows") {
        if (!(ls >> manifest.pipeline.crop_rows)) throw fail("bad crop_rows");
      } else if (key == "input_dim") {
        if (!(ls >> manifest.input_dim)) throw fail("bad input_dim");
      } else if (key == "count") {
        if (!(ls >> declared_count)) throw fail("bad count");
      } else if (key == "samples") {
        in_samples = true;
      } else {
        throw fail("unknown manifest key '" + key + "'");
      }
    } else {
      Sample s;
      std::string split_token;
      std::istringstream ss(line);
      if (!(ss >> s.image_path >> s.x >> s.y >> s.yaw >> split_token))
        throw ParseError(name, line_no, "bad sample line");
      if (split_token == "train")
        s.split = Split::Train;
      else if (split_token == "test")
        s.split = Split::Test;
      else
        throw ParseError(name, line_no, "unknown split '" + split_token + "'");
      manifest.samples.push_back(std::move(s));
    }
  }
  if (!in_samples) throw ParseError(name, line_no, "missing samples section");
  if (manifest.samples.size() != declared_count)
    throw ParseError(name, line_no,
                     "sample count " + std::to_string(manifest.samples.size()) +
                         " does not match declared count " +
                         std::to_string(declared_count));
  return manifest;
}

LoadedDataset load(const std::filesystem::path& manifest_path,
                   std::optional<Split> filter) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const std::filesystem::path root = manifest_path.parent_path();

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < manifest.samples.size(); ++i)
    if (!filter || manifest.samples[i].split == *filter) rows.push_back(i);

  LoadedDataset out;
  out.input_dim = manifest.input_dim;
  out.manifest_rows = rows;
  out.features.resize(rows.size() * manifest.input_dim);
  out.labels.resize(rows.size() * 2);

  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Sample& s = manifest.samples[rows[k]];
    const std::filesystem::path img_path = root / s.image_path;
    if (!std::filesystem::exists(img_path))
      throw IoError("missing image file: " + img_path.string());
    const ImageBuffer img = read_ppm(img_path);
    if (img.width != manifest.rig.image_width ||
        img.height != manifest.rig.image_height)
      throw ShapeError("image " + img_path.string() +
                       " does not match the manifest resolution");
    const std::vector<float> feat =
        preprocess::preprocess_pipeline(img, manifest.pipeline);
    if (feat.size() != manifest.input_dim)
      throw ShapeError("feature length " + std::to_string(feat.size()) +
                       " does not match manifest input_dim " +
                       std::to_string(manifest.input_dim));
    std::copy(feat.begin(), feat.end(),
              out.features.begin() + static_cast<std::ptrdiff_t>(k * manifest.input_dim));
    out.labels[k * 2] = s.x;
    out.labels[k * 2 + 1] = s.y;
  }
  return out;
}

}  // namespace courtloc::dataset
