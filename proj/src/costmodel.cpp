#include "courtloc/costmodel.hpp"

#include <numeric>

#include "courtloc/errors.hpp"

namespace courtloc::costmodel {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t result = 0;
  if (__builtin_mul_overflow(a, b, &result))
    throw OverflowError("convolution cost overflows 64-bit arithmetic");
  return result;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t result = 0;
  if (__builtin_add_overflow(a, b, &result))
    throw OverflowError("convolution cost overflows 64-bit arithmetic");
  return result;
}

}  // namespace

void validate(const ConvSpec& spec) {
  if (spec.kernel_size == 0 || spec.in_channels == 0 || spec.out_channels == 0 ||
      spec.feature_size == 0)
    throw DomainError("convolution spec fields must be strictly positive");
}

std::uint64_t cost_standard(const ConvSpec& spec) {
  validate(spec);
  const std::uint64_t k2 = checked_mul(spec.kernel_size, spec.kernel_size);
  const std::uint64_t f2 = checked_mul(spec.feature_size, spec.feature_size);
  return checked_mul(checked_mul(k2, spec.in_channels),
                     checked_mul(spec.out_channels, f2));
}

std::uint64_t cost_dw_separable(const ConvSpec& spec) {
  validate(spec);
  const std::uint64_t k2 = checked_mul(spec.kernel_size, spec.kernel_size);
  const std::uint64_t f2 = checked_mul(spec.feature_size, spec.feature_size);
  const std::uint64_t depthwise = checked_mul(checked_mul(k2, spec.in_channels), f2);
  const std::uint64_t pointwise =
      checked_mul(checked_mul(spec.in_channels, spec.out_channels), f2);
  return checked_add(depthwise, pointwise);
}

Rational make_rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Rational cost_ratio(const ConvSpec& spec) {
  validate(spec);
  // (DK^2*M*DF^2 + M*N*DF^2) / (DK^2*M*N*DF^2) = (DK^2 + N) / (N*DK^2)
  const std::uint64_t k2 = checked_mul(spec.kernel_size, spec.kernel_size);
  return make_rational(checked_add(k2, spec.out_channels),
                       checked_mul(spec.out_channels, k2));
}

}  // namespace courtloc::costmodel
