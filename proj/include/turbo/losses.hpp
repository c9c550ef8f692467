#pragma once

#include <cstddef>
#include <vector>

#include "turbo/encoder.hpp"
#include "turbo/tensor.hpp"

namespace turbo {

struct ContrastiveConfig {
  double temperature = 0.07;
  // When set, every cross-modal term is the mean of both anchor directions.
  bool symmetric_cross = false;
};

// The six contrastive terms, their sum, the supervised term and the blended
// total for one batch. All fields are scalar tensors on the live graph.
struct LossBreakdown {
  Tensor in_a, in_t;
  Tensor cross_11, cross_12, cross_21, cross_22;
  Tensor turbo;
  Tensor ce;
  Tensor total;
};

// Mean over anchors i of -log[ exp(cos(a_i, c_i)/tau) / sum_j exp(cos(a_i, c_j)/tau) ].
// The positive candidate of anchor i is index i; the denominator runs over
// the full batch including the positive.
Tensor info_nce(const Tensor& anchor, const Tensor& candidates, double temperature);

// Two in-modal terms plus four cross-modal terms (audio rows as anchors) and
// their sum. The ce/total fields are left for the trainer to fill.
LossBreakdown turbo_loss(const RepresentationQuad& quad, const ContrastiveConfig& config);

// Mean over rows of -log(probs[i, label_i]), probabilities floored at 1e-12.
Tensor cross_entropy_loss(const Tensor& probs, const std::vector<std::size_t>& labels);

// lambda * ce + (1 - lambda) * turbo.
Tensor total_loss(const Tensor& ce, const Tensor& turbo, double lambda);

}  // namespace turbo
