#include "courtloc/xai.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "courtloc/image.hpp"

namespace courtloc::xai {

namespace {

// Path points are evaluated in batches: same MAC count as one-by-one, but
// the dense kernels get full batches to chew on.
constexpr std::size_t kPathChunk = 64;

}  // namespace

template <typename T>
AttributionMap integrated_gradients(const nn::Mlp<T>& model,
                                    std::span<const T> input,
                                    std::span<const T> baseline, int steps,
                                    std::size_t output_index) {
  const std::size_t dim = model.input_dim();
  if (input.size() != dim || baseline.size() != dim)
    throw ShapeError("integrated_gradients: input/baseline length mismatch");
  if (steps < 1) throw ShapeError("integrated_gradients: steps must be >= 1");
  if (output_index >= model.output_dim())
    throw ShapeError("integrated_gradients: output index out of range");

  std::vector<double> grad_sum(dim, 0.0);
  std::vector<T> points(kPathChunk * dim);
  std::vector<T> grads(kPathChunk * dim);
  const std::size_t m = static_cast<std::size_t>(steps);
  for (std::size_t k0 = 1; k0 <= m; k0 += kPathChunk) {
    const std::size_t chunk = std::min(kPathChunk, m - k0 + 1);
    for (std::size_t j = 0; j < chunk; ++j) {
      const T alpha = static_cast<T>(static_cast<double>(k0 + j) /
                                     static_cast<double>(m));
      T* row = points.data() + j * dim;
      for (std::size_t i = 0; i < dim; ++i)
        row[i] = baseline[i] + alpha * (input[i] - baseline[i]);
    }
    nn::input_gradients(model, points.data(), chunk, output_index, grads.data());
    // Fixed accumulation order (ascending k) keeps the result deterministic.
    for (std::size_t j = 0; j < chunk; ++j) {
      const T* row = grads.data() + j * dim;
      for (std::size_t i = 0; i < dim; ++i)
        grad_sum[i] += static_cast<double>(row[i]);
    }
  }

  AttributionMap out;
  out.values.resize(dim);
  out.output_index = output_index;
  out.steps = steps;
  out.baseline_ref = "explicit baseline vector";
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < dim; ++i) {
    const double delta =
        static_cast<double>(input[i]) - static_cast<double>(baseline[i]);
    out.values[i] = delta * inv_m * grad_sum[i];
    if (!std::isfinite(out.values[i]))
      throw NumericError("integrated_gradients: non-finite attribution");
  }
  return out;
}

template <typename T>
double completeness_gap(const nn::Mlp<T>& model, std::span<const T> input,
                        std::span<const T> baseline,
                        const AttributionMap& attribution,
                        std::size_t output_index) {
  const std::size_t dim = model.input_dim();
  if (input.size() != dim || baseline.size() != dim ||
      attribution.values.size() != dim)
    throw ShapeError("completeness_gap: shape mismatch");
  if (output_index >= model.output_dim())
    throw ShapeError("completeness_gap: output index out of range");
  double total = 0.0;
  for (double v : attribution.values) total += v;
  const double fx = static_cast<double>(nn::forward(model, input)[output_index]);
  const double fb =
      static_cast<double>(nn::forward(model, baseline)[output_index]);
  return std::abs(total - (fx - fb));
}

void export_saliency(const AttributionMap& attribution, int width, int height,
                     const std::filesystem::path& path) {
  if (width <= 0 || height <= 0 ||
      static_cast<std::size_t>(width) * height != attribution.values.size())
    throw ShapeError("export_saliency: width*height must equal attribution length");
  double max_abs = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  for (double v : attribution.values) {
    const double a = std::abs(v);
    max_abs = std::max(max_abs, a);
    min_abs = std::min(min_abs, a);
  }
  ImageBuffer img = ImageBuffer::gray(width, height);
  if (max_abs > min_abs) {
    const double scale = 255.0 / (max_abs - min_abs);
    for (std::size_t i = 0; i < attribution.values.size(); ++i)
      img.data[i] = static_cast<std::uint8_t>(
          std::lround((std::abs(attribution.values[i]) - min_abs) * scale));
  }
  write_pgm(img, path);
}

void export_csv(const AttributionMap& attribution,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open CSV for writing: " + path.string());
  out.precision(17);
  out << "index,value\n";
  for (std::size_t i = 0; i < attribution.values.size(); ++i)
    out << i << "," << attribution.values[i] << "\n";
  if (!out) throw IoError("failed to write CSV: " + path.string());
}

template AttributionMap integrated_gradients<float>(const nn::Mlp<float>&,
                                                    std::span<const float>,
                                                    std::span<const float>, int,
                                                    std::size_t);
template AttributionMap integrated_gradients<double>(const nn::Mlp<double>&,
                                                     std::span<const double>,
                                                     std::span<const double>,
                                                     int, std::size_t);
template double completeness_gap<float>(const nn::Mlp<float>&,
                                        std::span<const float>,
                                        std::span<const float>,
                                        const AttributionMap&, std::size_t);
template double completeness_gap<double>(const nn::Mlp<double>&,
                                         std::span<const double>,
                                         std::span<const double>,
                                         const AttributionMap&, std::size_t);

}  // namespace courtloc::xai
