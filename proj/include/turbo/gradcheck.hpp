#pragma once

#include <functional>

#include "turbo/tensor.hpp"

namespace turbo {

// Compares the analytic gradient of a scalar-valued function against central
// finite differences. Returns the maximum over coordinates of
//   |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
// `f` must be a pure function of the tensor values (re-seed any internal
// randomness per call).
double grad_check(const std::function<Tensor(const Tensor&)>& f, const Tensor& x, double h = 1e-5);

}  // namespace turbo
