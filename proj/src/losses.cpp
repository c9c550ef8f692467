#include "turbo/losses.hpp"

#include <string>

#include "turbo/error.hpp"

namespace turbo {

Tensor info_nce(const Tensor& anchor, const Tensor& candidates, double temperature) {
  if (temperature <= 0.0) {
    throw ParameterError("info_nce: temperature must be positive, got " + std::to_string(temperature));
  }
  if (anchor.shape() != candidates.shape()) {
    throw DimensionError("info_nce: anchor and candidate batches must share shape");
  }
  Tensor logits = scale(cosine_similarity_matrix(anchor, candidates), 1.0 / temperature);
  // Per-anchor loss logsumexp_j(l_ij) - l_ii; exactly zero when N == 1.
  return mean_all(sub(row_logsumexp(logits), diagonal(logits)));
}

LossBreakdown turbo_loss(const RepresentationQuad& quad, const ContrastiveConfig& config) {
  auto cross = [&](const Tensor& h_a, const Tensor& h_t) {
    Tensor forward = info_nce(h_a, h_t, config.temperature);
    if (!config.symmetric_cross) return forward;
    return scale(add(forward, info_nce(h_t, h_a, config.temperature)), 0.5);
  };

  LossBreakdown out;
  out.in_a = info_nce(quad.h_a1, quad.h_a2, config.temperature);
  out.in_t = info_nce(quad.h_t1, quad.h_t2, config.temperature);
  out.cross_11 = cross(quad.h_a1, quad.h_t1);
  out.cross_12 = cross(quad.h_a1, quad.h_t2);
  out.cross_21 = cross(quad.h_a2, quad.h_t1);
  out.cross_22 = cross(quad.h_a2, quad.h_t2);
  out.turbo = add(add(add(out.in_a, out.in_t), add(out.cross_11, out.cross_12)),
                  add(out.cross_21, out.cross_22));
  return out;
}

Tensor cross_entropy_loss(const Tensor& probs, const std::vector<std::size_t>& labels) {
  if (probs.shape().size() != 2) throw DimensionError("cross_entropy_loss: probs must be [N x C]");
  const std::size_t classes = probs.shape()[1];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= classes) {
      throw ContractError("cross_entropy_loss: label " + std::to_string(labels[i]) + " at row " +
                          std::to_string(i) + " out of range [0, " + std::to_string(classes) + ")");
    }
  }
  return scale(mean_all(log_floored(gather_labels(probs, labels), 1e-12)), -1.0);
}

Tensor total_loss(const Tensor& ce, const Tensor& turbo, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw ParameterError("total_loss: lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  return add(scale(ce, lambda), scale(turbo, 1.0 - lambda));
}

}  // namespace turbo
