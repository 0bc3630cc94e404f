#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "courtloc/geometry.hpp"
#include "courtloc/nn.hpp"
#include "courtloc/preprocess.hpp"
#include "courtloc/render.hpp"

namespace courtloc::dataset {

enum class Split { Train, Test };

struct Sample {
  std::string image_path;  // relative to the dataset root
  double x = 0.0;          // label, meters
  double y = 0.0;
  double yaw = 0.0;  // full render-time pose
  Split split = Split::Train;
};

struct DatasetManifest {
  std::uint64_t court_hash = 0;
  geometry::CameraRig rig;
  render::RenderStyle style;
  std::uint64_t seed = 0;
  preprocess::PipelineConfig pipeline;
  std::size_t input_dim = 0;
  std::vector<Sample> samples;

  std::size_t count(Split split) const;
};

// Coverage grid used to honor "every part of the arena": with n >= threshold,
// every cell of a grid_x x grid_y partition of the court holds >= 1 sample.
inline constexpr int kCoverageGridX = 10;
inline constexpr int kCoverageGridY = 6;
inline constexpr std::size_t kCoverageThreshold = 500;

bool covers_grid(const std::vector<Sample>& samples,
                 const geometry::CourtSpec& court, int grid_x = kCoverageGridX,
                 int grid_y = kCoverageGridY);

// Renders n pose-labeled views into <root>/images/NNNNNN.ppm and returns the
// manifest (all samples initially assigned to the train split). Deterministic
// per seed.
DatasetManifest generate(const geometry::CourtSpec& court,
                         const geometry::CameraRig& rig,
                         const render::RenderStyle& style, std::size_t n,
                         std::uint64_t seed, geometry::YawMode yaw_mode,
                         const std::filesystem::path& root,
                         const preprocess::PipelineConfig& pipeline);

// Seeded shuffle split: floor(n * train_fraction) train, remainder test.
// Returns true when a warning applies (some split ended up empty).
bool split(DatasetManifest& manifest, double train_fraction, std::uint64_t seed);

void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

// In-memory dataset after preprocess_pipeline: one feature row per sample,
// in manifest order.
struct LoadedDataset {
  std::size_t input_dim = 0;
  std::vector<float> features;             // count x input_dim
  std::vector<double> labels;              // count x 2
  std::vector<std::size_t> manifest_rows;  // source row per loaded sample

  std::size_t count() const { return labels.size() / 2; }
  nn::DataView view() const {
    return {count(), input_dim, 2, features.data(), labels.data()};
  }
};

LoadedDataset load(const std::filesystem::path& manifest_path,
                   std::optional<Split> filter = std::nullopt);

}  // namespace courtloc::dataset
