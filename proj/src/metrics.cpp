#include "turbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "turbo/error.hpp"

namespace turbo {

namespace {

// Plain-double row normalization; the diagnostics are not differentiated.
std::vector<double> unit_rows(const Tensor& x, const char* what) {
  if (x.shape().size() != 2) throw DimensionError(std::string(what) + ": expected [N x d]");
  const std::size_t n = x.shape()[0], d = x.shape()[1];
  std::vector<double> out(x.values().begin(), x.values().end());
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) sq += out[i * d + j] * out[i * d + j];
    double norm = std::sqrt(sq);
    if (norm < 1e-12) {
      throw DegenerateRowError(std::string(what) + ": row " + std::to_string(i) + " has near-zero norm");
    }
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] /= norm;
  }
  return out;
}

}  // namespace

double alignment(const Tensor& audio, const Tensor& text, double alpha) {
  if (audio.shape() != text.shape()) {
    throw DimensionError("alignment: modality batches must share shape");
  }
  const std::size_t n = audio.shape()[0], d = audio.shape()[1];
  if (n == 0) throw ContractError("alignment: empty batch");
  std::vector<double> a = unit_rows(audio, "alignment");
  std::vector<double> t = unit_rows(text, "alignment");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double diff = a[i * d + j] - t[i * d + j];
      sq += diff * diff;
    }
    sum += alpha == 2.0 ? sq : std::pow(std::sqrt(sq), alpha);
  }
  return sum / static_cast<double>(n);
}

double uniformity(const Tensor& x, double t) {
  const std::size_t n = x.shape().size() == 2 ? x.shape()[0] : 0;
  if (n < 2) throw ContractError("uniformity: need at least two rows");
  const std::size_t d = x.shape()[1];
  std::vector<double> u = unit_rows(x, "uniformity");
  // log-mean-exp over the n(n-1)/2 pairwise potentials, max-shifted.
  std::vector<double> exponents;
  exponents.reserve(n * (n - 1) / 2);
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        double diff = u[i * d + k] - u[j * d + k];
        sq += diff * diff;
      }
      exponents.push_back(-t * sq);
      mx = std::max(mx, exponents.back());
    }
  }
  double sum = 0.0;
  for (double e : exponents) sum += std::exp(e - mx);
  return mx + std::log(sum / static_cast<double>(exponents.size()));
}

ClassificationSummary classification_report(const std::vector<std::size_t>& preds,
                                            const std::vector<std::size_t>& labels,
                                            std::size_t num_classes) {
  if (preds.empty() || preds.size() != labels.size()) {
    throw ContractError("classification_report: need matching non-empty prediction and label lists");
  }
  std::vector<std::size_t> correct(num_classes, 0), count(num_classes, 0);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] >= num_classes || labels[i] >= num_classes) {
      throw ContractError("classification_report: class id out of range at row " + std::to_string(i));
    }
    ++count[labels[i]];
    if (preds[i] == labels[i]) {
      ++hits;
      ++correct[labels[i]];
    }
  }
  double recall_sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (count[c] == 0) continue;
    ++present;
    recall_sum += static_cast<double>(correct[c]) / static_cast<double>(count[c]);
  }
  ClassificationSummary s;
  s.wa = static_cast<double>(hits) / static_cast<double>(preds.size());
  s.acc = s.wa;
  s.ua = recall_sum / static_cast<double>(present);
  return s;
}

double equal_error_rate(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.empty() || scores.size() != labels.size()) {
    throw ContractError("equal_error_rate: need matching non-empty score and label lists");
  }
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ContractError("equal_error_rate: labels must be 0/1");
    (labels[i] == 1 ? pos : neg).push_back(scores[i]);
  }
  if (pos.empty() || neg.empty()) {
    throw ContractError("equal_error_rate: both classes must be present");
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  std::set<double> unique(scores.begin(), scores.end());
  std::vector<double> sweep(unique.begin(), unique.end());

  auto far_at = [&](double th) {  // negatives accepted: score >= th
    std::size_t accepted = neg.end() - std::lower_bound(neg.begin(), neg.end(), th);
    return static_cast<double>(accepted) / static_cast<double>(neg.size());
  };
  auto frr_at = [&](double th) {  // positives rejected: score < th
    std::size_t rejected = std::lower_bound(pos.begin(), pos.end(), th) - pos.begin();
    return static_cast<double>(rejected) / static_cast<double>(pos.size());
  };

  // FRR - FAR rises monotonically from -1 (accept everything) toward +1;
  // the EER sits where it crosses zero.
  double prev_far = 1.0, prev_frr = 0.0;
  for (double th : sweep) {
    double far = far_at(th), frr = frr_at(th);
    if (frr >= far) {
      if (frr == far) return far;
      // Interpolate inside [previous threshold, th].
      double denom = (frr - prev_frr) - (far - prev_far);
      double s = denom != 0.0 ? (prev_far - prev_frr) / denom : 0.0;
      double eer = prev_far + s * (far - prev_far);
      return std::clamp(eer, 0.0, 1.0);
    }
    prev_far = far;
    prev_frr = frr;
  }
  // Past the last score everything is rejected: FAR 0, FRR 1.
  double denom = (1.0 - prev_frr) - (0.0 - prev_far);
  double s = denom != 0.0 ? (prev_far - prev_frr) / denom : 0.0;
  return std::clamp(prev_far + s * (0.0 - prev_far), 0.0, 1.0);
}

double KdeGrid::node(std::size_t index) const {
  if (grid_size < 2) throw ContractError("kde grid needs at least two nodes per axis");
  return lo + (hi - lo) * static_cast<double>(index) / static_cast<double>(grid_size - 1);
}

KdeGrid kde_density_2d(const std::vector<std::array<double, 2>>& points, std::size_t grid_size,
                       double bandwidth) {
  if (points.empty()) throw ContractError("kde_density_2d: need at least one point");
  if (grid_size < 2) throw ParameterError("kde_density_2d: grid size must be >= 2");
  if (!(bandwidth > 0.0)) {
    throw ParameterError("kde_density_2d: bandwidth must be positive, got " + std::to_string(bandwidth));
  }
  KdeGrid grid;
  grid.grid_size = grid_size;
  grid.density.assign(grid_size * grid_size, 0.0);
  const double inv_two_sq = 1.0 / (2.0 * bandwidth * bandwidth);
  const double norm = 1.0 / (static_cast<double>(points.size()) * 2.0 * M_PI * bandwidth * bandwidth);
  for (std::size_t gy = 0; gy < grid_size; ++gy) {
    const double y = grid.node(gy);
    for (std::size_t gx = 0; gx < grid_size; ++gx) {
      const double x = grid.node(gx);
      double sum = 0.0;
      for (const auto& p : points) {
        const double dx = x - p[0], dy = y - p[1];
        sum += std::exp(-(dx * dx + dy * dy) * inv_two_sq);
      }
      grid.density[gy * grid_size + gx] = sum * norm;
    }
  }
  return grid;
}

double scott_bandwidth(const std::vector<std::array<double, 2>>& points) {
  if (points.empty()) throw ContractError("scott_bandwidth: need at least one point");
  const double n = static_cast<double>(points.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : points) {
    mean_x += p[0];
    mean_y += p[1];
  }
  mean_x /= n;
  mean_y /= n;
  double var_x = 0.0, var_y = 0.0;
  for (const auto& p : points) {
    var_x += (p[0] - mean_x) * (p[0] - mean_x);
    var_y += (p[1] - mean_y) * (p[1] - mean_y);
  }
  double sigma = std::sqrt(0.5 * (var_x + var_y) / n);
  return std::pow(n, -1.0 / 6.0) * sigma;
}

}  // namespace turbo
