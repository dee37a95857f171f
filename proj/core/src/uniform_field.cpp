#include "ringstab/uniform_field.hpp"

#include <stdexcept>
#include <string>

namespace ringstab {
namespace {

/// SplitMix64 finalizer: full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

UniformField::UniformField(std::uint64_t seed, int L) : seed_(seed), L_(L) {
  if (L < 1) throw std::out_of_range("UniformField: L must be >= 1");
}

double UniformField::u(int i, int j, std::int64_t t) const {
  if (i < 0 || i >= L_)
    throw std::out_of_range("UniformField: cell index " + std::to_string(i) +
                            " outside [0," + std::to_string(L_) + ")");
  if (j < 0 || j > L_)
    throw std::out_of_range("UniformField: lane " + std::to_string(j) + " outside [0," +
                            std::to_string(L_) + "]");
  if (t < 0) throw std::out_of_range("UniformField: negative time");

  // Absorb each coordinate behind a full mixing round. The multipliers are
  // odd, so each absorption is injective in its word.
  std::uint64_t h = seed_;
  h = mix64(h ^ (static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ull));
  h = mix64(h ^ (static_cast<std::uint64_t>(j) * 0xC2B2AE3D27D4EB4Full));
  h = mix64(h ^ (static_cast<std::uint64_t>(t) * 0x165667B19E3779F9ull));
  // 53-bit mantissa centered on half-integers: the result is in
  // [2^-54, 1 - 2^-54], never exactly 0 or 1.
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace ringstab
