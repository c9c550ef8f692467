#include "turbo/dropout.hpp"

#include "turbo/error.hpp"

namespace turbo {

DropoutMask sample_dropout_mask(RngState& rng, const Shape& shape, double p) {
  if (p < 0.0 || p >= 1.0) {
    throw ParameterError("sample_dropout_mask: drop probability must lie in [0, 1), got " +
                         std::to_string(p));
  }
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  DropoutMask mask;
  mask.shape = shape;
  mask.drop_p = p;
  mask.scale.resize(n);
  const double keep_scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < n; ++i) {
    mask.scale[i] = rng.next_uniform() < p ? 0.0 : keep_scale;
  }
  return mask;
}

Tensor apply_dropout(const Tensor& x, const DropoutMask& mask) {
  if (x.shape() != mask.shape) {
    throw DimensionError("apply_dropout: tensor and mask shapes disagree");
  }
  Tensor m = Tensor::from_data(mask.shape, mask.scale, false);
  return mul(x, m);
}

}  // namespace turbo
