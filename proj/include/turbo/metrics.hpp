#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "turbo/tensor.hpp"

namespace turbo {

// Task metrics plus representation-quality diagnostics for one split.
struct MetricsReport {
  double wa = 0.0;
  double ua = 0.0;
  double acc = 0.0;
  std::optional<double> eer;  // binary tasks only
  double alignment = 0.0;
  double uniformity_audio = 0.0;
  double uniformity_text = 0.0;
  std::size_t sample_count = 0;

  double uniformity_mean() const { return 0.5 * (uniformity_audio + uniformity_text); }
};

// mean_i ||A_i - T_i||^alpha over matched pairs. Rows are L2-normalized onto
// the unit hypersphere before measuring; a no-op for already-unit rows.
double alignment(const Tensor& audio, const Tensor& text, double alpha = 2.0);

// log of the mean Gaussian potential exp(-t ||x_i - x_j||^2) over unordered
// pairs i < j, rows normalized first. Always <= 0; closer to 0 means more
// collapsed.
double uniformity(const Tensor& x, double t = 2.0);

struct ClassificationSummary {
  double wa = 0.0;  // overall fraction correct
  double ua = 0.0;  // macro-average of per-class recall, absent classes excluded
  double acc = 0.0; // == wa
};

ClassificationSummary classification_report(const std::vector<std::size_t>& preds,
                                            const std::vector<std::size_t>& labels,
                                            std::size_t num_classes);

// Equal error rate under the convention "higher score means positive".
// FAR(th) counts negatives with score >= th, FRR(th) positives with
// score < th; the crossing is linearly interpolated between adjacent sweep
// thresholds. Labels are 0/1 and both classes must be present.
double equal_error_rate(const std::vector<double>& scores, const std::vector<int>& labels);

// G x G Gaussian KDE field over [-1.5, 1.5]^2, row-major with x fastest.
struct KdeGrid {
  std::size_t grid_size = 0;
  double lo = -1.5;
  double hi = 1.5;
  std::vector<double> density;

  double node(std::size_t index) const;  // grid coordinate of row/col index
};

KdeGrid kde_density_2d(const std::vector<std::array<double, 2>>& points, std::size_t grid_size,
                       double bandwidth);

// Scott's rule N^(-1/6) * sigma_hat for 2-D data; sigma_hat is the root mean
// of the per-coordinate variances.
double scott_bandwidth(const std::vector<std::array<double, 2>>& points);

}  // namespace turbo
