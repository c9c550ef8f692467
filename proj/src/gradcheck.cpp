#include "turbo/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "turbo/error.hpp"

namespace turbo {

double grad_check(const std::function<Tensor(const Tensor&)>& f, const Tensor& x, double h) {
  if (h <= 0.0) throw ParameterError("grad_check: step h must be positive");

  std::vector<double> base(x.values().begin(), x.values().end());

  Tensor probe = Tensor::from_data(x.shape(), base, true);
  Tensor loss = f(probe);
  if (loss.size() != 1) throw ContractError("grad_check: f must return a scalar");
  backward(loss);
  std::vector<double> analytic(probe.grad().begin(), probe.grad().end());

  double worst = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::vector<double> bumped = base;
    bumped[i] = base[i] + h;
    double up = f(Tensor::from_data(x.shape(), bumped, false)).value();
    bumped[i] = base[i] - h;
    double down = f(Tensor::from_data(x.shape(), bumped, false)).value();
    double numeric = (up - down) / (2.0 * h);
    double rel = std::abs(analytic[i] - numeric) / std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace turbo
