#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "courtloc/nn.hpp"

namespace courtloc::xai {

struct AttributionMap {
  std::vector<double> values;  // one attribution per input feature
  std::size_t output_index = 0;
  std::string baseline_ref;
  int steps = 0;
};

// Integrated Gradients with a right-endpoint Riemann sum over k = 1..m:
//   IG_i = (x_i - x'_i) * (1/m) * sum_k dF(x' + (k/m)(x - x'))/dx_i
// where F is the selected output coordinate.
template <typename T>
AttributionMap integrated_gradients(const nn::Mlp<T>& model,
                                    std::span<const T> input,
                                    std::span<const T> baseline, int steps,
                                    std::size_t output_index);

// |sum_i IG_i - (F(x) - F(x'))|
template <typename T>
double completeness_gap(const nn::Mlp<T>& model, std::span<const T> input,
                        std::span<const T> baseline,
                        const AttributionMap& attribution,
                        std::size_t output_index);

// |values| min-max scaled to [0, 255], reshaped row-major, written as PGM.
void export_saliency(const AttributionMap& attribution, int width, int height,
                     const std::filesystem::path& path);

// CSV rows of (index, value).
void export_csv(const AttributionMap& attribution,
                const std::filesystem::path& path);

}  // namespace courtloc::xai
