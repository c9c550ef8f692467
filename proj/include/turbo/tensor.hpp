#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace turbo {

using Shape = std::vector<std::size_t>;

namespace detail {

struct TensorNode;
using AdjointMap = std::unordered_map<TensorNode*, std::vector<double>>;

// One node of the reverse-mode tape. Nodes are immutable after construction
// except for `grad`, which backward() accumulates into.
struct TensorNode {
  Shape shape;
  std::vector<double> values;
  bool requires_grad = false;
  std::vector<double> grad;  // allocated iff requires_grad, same extent as values

  // Inputs this node was computed from; empty for leaves.
  std::vector<std::shared_ptr<TensorNode>> parents;
  // Pushes this node's adjoint into the parents' adjoints.
  std::function<void(const std::vector<double>& self_adjoint, AdjointMap& adjoints)> backward_fn;

  std::size_t size() const { return values.size(); }
};

}  // namespace detail

// Dense row-major tensor of doubles participating in reverse-mode
// differentiation. Copies are shallow; the underlying node is shared and
// immutable apart from gradient accumulation.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from_data(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t size() const;
  bool requires_grad() const;

  // 2-D accessors; contract error when the tensor is not a matrix.
  std::size_t rows() const;
  std::size_t cols() const;
  double at(std::size_t r, std::size_t c) const;

  std::span<const double> values() const;
  // Value of a one-element tensor.
  double value() const;

  std::span<const double> grad() const;
  void zero_grad() const;

  // Returns a gradient-free copy of the values (a fresh leaf).
  Tensor detached() const;

  bool all_finite() const;

  detail::TensorNode* node() const { return node_.get(); }

 private:
  friend Tensor make_op_result(Shape shape, std::vector<double> values,
                               std::vector<Tensor> inputs,
                               std::function<void(const std::vector<double>&, detail::AdjointMap&)> backward_fn);
  std::shared_ptr<detail::TensorNode> node_;
};

// --- differentiable operations -------------------------------------------

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
// Elementwise product.
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
// a[m x n] + bias broadcast over rows; bias is [n] or [1 x n].
Tensor add_row_broadcast(const Tensor& a, const Tensor& bias);
Tensor tanh(const Tensor& a);
// Max-shifted softmax per row.
Tensor row_softmax(const Tensor& x);
// Max-shifted log(sum(exp(.))) per row; result is [m x 1].
Tensor row_logsumexp(const Tensor& x);
// Rows scaled to unit L2 norm; a row with norm < eps is a degenerate-row error.
Tensor l2_normalize_rows(const Tensor& x, double eps = 1e-12);
// Entry (i,j) = cos(u_i, v_j); composed from normalization and matmul.
Tensor cosine_similarity_matrix(const Tensor& u, const Tensor& v);
// Main diagonal of a square matrix as [n x 1].
Tensor diagonal(const Tensor& x);
// picked[i] = x[i, labels[i]] as [m x 1]; labels must lie in [0, cols).
Tensor gather_labels(const Tensor& x, const std::vector<std::size_t>& labels);
// log(max(x, floor)) elementwise; gradient is zero on the clamped region.
Tensor log_floored(const Tensor& x, double floor);
Tensor mean_all(const Tensor& x);
Tensor sum_all(const Tensor& x);
// [m x p] ++ [m x q] -> [m x (p+q)].
Tensor concat_cols(const Tensor& a, const Tensor& b);

// Accumulates d(loss)/d(node) into the grad buffer of every node that
// requires grad and is reachable from `loss`. Repeated calls accumulate.
void backward(const Tensor& loss);

}  // namespace turbo
