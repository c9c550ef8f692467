#include "turbo/rng.hpp"

#include <cmath>

namespace turbo {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// FNV-1a over the label bytes, folded through the splitmix finalizer so that
// similar labels land in unrelated substreams.
std::uint64_t derive_state(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return splitmix_finalize(seed + kGolden * (h | 1ull));
}

}  // namespace

RngState::RngState(std::uint64_t seed, std::string_view stream)
    : seed_(seed), label_(stream), state_(derive_state(seed, stream)) {}

RngState RngState::stream(std::string_view label) const {
  std::string child = label_.empty() ? std::string(label) : label_ + "/" + std::string(label);
  return RngState(seed_, child);
}

std::uint64_t RngState::next_u64() {
  state_ += kGolden;
  return splitmix_finalize(state_);
}

double RngState::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngState::uniform_in(double lo, double hi) {
  return lo + (hi - lo) * next_uniform();
}

double RngState::next_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller on (0,1] x [0,1) uniforms.
  double u1 = 1.0 - next_uniform();
  double u2 = next_uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

}  // namespace turbo
