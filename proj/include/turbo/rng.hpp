#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace turbo {

// Deterministic counter-based random stream.
//
// A stream is identified by (seed, label); the i-th draw from a stream is a
// pure function of that pair, independent of platform and of any other
// stream. Labels namespace independent consumers ("pass1/audio",
// "epoch3/batch7", ...) so reordering unrelated draws cannot change results.
class RngState {
 public:
  explicit RngState(std::uint64_t seed, std::string_view stream = "");

  // Derives a child stream; the parent is not advanced.
  RngState stream(std::string_view label) const;

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double next_uniform();

  double uniform_in(double lo, double hi);

  // Standard normal via Box-Muller; pairs are cached.
  double next_normal();

 private:
  std::uint64_t seed_ = 0;
  std::string label_;
  std::uint64_t state_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace turbo
