#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace dmbgn {

/// Malformed or inconsistent input data (files, schemas, checkpoints).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN/Inf detected in a numeric pipeline.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

/// Probabilities are clamped to [kProbEps, 1-kProbEps] before any logarithm.
inline constexpr double kProbEps = 1e-7;

// FNV-1a, used for split assignment and content hashes. Stable across
// platforms, unlike std::hash.
inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t len,
                                   std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t h = 1469598103934665603ull) {
  return fnv1a64_bytes(s.data(), s.size(), h);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derives an independent RNG stream from a base seed and a stream label,
/// e.g. one stream per user in the generator.
inline Rng derive_rng(std::uint64_t seed, const std::string& stream) {
  return Rng(splitmix64(seed ^ fnv1a64(stream)));
}

std::string hex64(std::uint64_t v);

}  // namespace dmbgn
