#pragma once

#include <cstdint>

namespace courtloc::costmodel {

// Convolution shape: D_K kernel size, M input channels, N output channels,
// D_F output feature-map size.
struct ConvSpec {
  std::uint64_t kernel_size = 1;
  std::uint64_t in_channels = 1;
  std::uint64_t out_channels = 1;
  std::uint64_t feature_size = 1;
};

void validate(const ConvSpec& spec);  // throws DomainError

// Multiply-accumulate counts, exact integer arithmetic. Overflow raises
// OverflowError.
std::uint64_t cost_standard(const ConvSpec& spec);      // DK^2 * M * N * DF^2
std::uint64_t cost_dw_separable(const ConvSpec& spec);  // DK^2*M*DF^2 + M*N*DF^2

// Reduced fraction.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  bool operator==(const Rational&) const = default;
  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

Rational make_rational(std::uint64_t num, std::uint64_t den);

// cost_dw_separable / cost_standard = 1/N + 1/DK^2, exact.
Rational cost_ratio(const ConvSpec& spec);

}  // namespace courtloc::costmodel
