#pragma once

#include "turbo/rng.hpp"
#include "turbo/tensor.hpp"

namespace turbo {

// Inverted-dropout keep mask: entries are exactly 0 (dropped) or 1/(1-p),
// so no rescaling is needed at evaluation time.
struct DropoutMask {
  Shape shape;
  std::vector<double> scale;
  double drop_p = 0.0;

  std::size_t size() const { return scale.size(); }
};

// Entries are i.i.d.: 0 with probability p, else 1/(1-p). Deterministic per
// (seed, stream, draw index).
DropoutMask sample_dropout_mask(RngState& rng, const Shape& shape, double p);

// Elementwise product with the mask; the backward pass routes gradients
// through the same mask, so dropped units receive exactly zero gradient.
Tensor apply_dropout(const Tensor& x, const DropoutMask& mask);

}  // namespace turbo
