#include "turbo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "turbo/error.hpp"

namespace turbo {

namespace {

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < s.size(); ++i) os << s[i] << (i + 1 < s.size() ? "x" : "");
  os << "]";
  return os.str();
}

std::size_t shape_product(const Shape& s) {
  std::size_t n = 1;
  for (std::size_t e : s) n *= e;
  return n;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
  }
}

void require_matrix(const Tensor& t, const char* op) {
  if (t.shape().size() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got shape " + shape_str(t.shape()));
  }
}

std::vector<double>& adjoint_of(detail::AdjointMap& adjoints, detail::TensorNode* node) {
  auto& a = adjoints[node];
  if (a.empty()) a.assign(node->size(), 0.0);
  return a;
}

}  // namespace

// --- Tensor ----------------------------------------------------------------

Tensor make_op_result(Shape shape, std::vector<double> values, std::vector<Tensor> inputs,
                      std::function<void(const std::vector<double>&, detail::AdjointMap&)> backward_fn) {
  auto node = std::make_shared<detail::TensorNode>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  for (const Tensor& in : inputs) {
    if (in.defined() && in.requires_grad()) node->requires_grad = true;
  }
  if (node->requires_grad) {
    node->grad.assign(node->values.size(), 0.0);
    for (const Tensor& in : inputs) node->parents.push_back(in.node_);
    node->backward_fn = std::move(backward_fn);
  }
  Tensor t;
  t.node_ = std::move(node);
  return t;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  std::size_t n = shape_product(shape);
  return from_data(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from_data(Shape shape, std::vector<double> values, bool requires_grad) {
  for (std::size_t e : shape) {
    if (e == 0) throw DimensionError("tensor extents must be positive, got shape " + shape_str(shape));
  }
  if (shape_product(shape) != values.size()) {
    throw DimensionError("tensor data length " + std::to_string(values.size()) +
                         " does not match shape " + shape_str(shape));
  }
  auto node = std::make_shared<detail::TensorNode>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  if (requires_grad) node->grad.assign(node->values.size(), 0.0);
  Tensor t;
  t.node_ = std::move(node);
  return t;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from_data({1}, {value}, requires_grad);
}

const Shape& Tensor::shape() const {
  if (!node_) throw ContractError("use of an undefined tensor");
  return node_->shape;
}

std::size_t Tensor::size() const { return node_ ? node_->size() : 0; }

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

std::size_t Tensor::rows() const {
  require_matrix(*this, "rows");
  return shape()[0];
}

std::size_t Tensor::cols() const {
  require_matrix(*this, "cols");
  return shape()[1];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  require_matrix(*this, "at");
  if (r >= shape()[0] || c >= shape()[1]) throw ContractError("tensor index out of range");
  return node_->values[r * shape()[1] + c];
}

std::span<const double> Tensor::values() const {
  if (!node_) throw ContractError("use of an undefined tensor");
  return node_->values;
}

double Tensor::value() const {
  if (size() != 1) throw ContractError("value() requires a one-element tensor, got shape " + shape_str(shape()));
  return node_->values[0];
}

std::span<const double> Tensor::grad() const {
  if (!requires_grad()) throw ContractError("grad() on a tensor that does not require grad");
  return node_->grad;
}

void Tensor::zero_grad() const {
  if (requires_grad()) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::detached() const {
  if (!node_) return {};
  return from_data(node_->shape, node_->values, false);
}

bool Tensor::all_finite() const {
  if (!node_) return true;
  for (double v : node_->values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// --- backward ----------------------------------------------------------------

void backward(const Tensor& loss) {
  if (loss.size() != 1) {
    throw ContractError("backward: loss must be scalar, got shape " + shape_str(loss.shape()));
  }
  if (!loss.requires_grad()) {
    throw ContractError("backward: loss is not connected to any parameter requiring grad");
  }

  // Iterative DFS postorder; reversed it gives a topological order from the
  // loss down to the leaves.
  std::vector<detail::TensorNode*> order;
  std::unordered_map<detail::TensorNode*, int> state;  // 0 new, 1 open, 2 done
  std::vector<detail::TensorNode*> stack{loss.node()};
  while (!stack.empty()) {
    detail::TensorNode* n = stack.back();
    int& st = state[n];
    if (st == 0) {
      st = 1;
      for (auto& p : n->parents) {
        if (p->requires_grad && state[p.get()] == 0) stack.push_back(p.get());
      }
    } else {
      stack.pop_back();
      if (st == 1) {
        st = 2;
        order.push_back(n);
      }
    }
  }

  detail::AdjointMap adjoints;
  adjoints[loss.node()] = {1.0};
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::TensorNode* n = *it;
    auto found = adjoints.find(n);
    if (found == adjoints.end()) continue;
    if (n->backward_fn) n->backward_fn(found->second, adjoints);
  }
  for (auto& [node, adj] : adjoints) {
    if (!node->requires_grad) continue;
    for (std::size_t i = 0; i < adj.size(); ++i) node->grad[i] += adj[i];
  }
}

// --- elementwise and linear ops ---------------------------------------------

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<double> out(a.size());
  auto va = a.values(), vb = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] + vb[i];
  detail::TensorNode *pa = a.node(), *pb = b.node();
  return make_op_result(a.shape(), std::move(out), {a, b},
                        [pa, pb](const std::vector<double>& g, detail::AdjointMap& adj) {
                          if (pa->requires_grad) {
                            auto& ga = adjoint_of(adj, pa);
                            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                          }
                          if (pb->requires_grad) {
                            auto& gb = adjoint_of(adj, pb);
                            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
                          }
                        });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  std::vector<double> out(a.size());
  auto va = a.values(), vb = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] - vb[i];
  detail::TensorNode *pa = a.node(), *pb = b.node();
  return make_op_result(a.shape(), std::move(out), {a, b},
                        [pa, pb](const std::vector<double>& g, detail::AdjointMap& adj) {
                          if (pa->requires_grad) {
                            auto& ga = adjoint_of(adj, pa);
                            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                          }
                          if (pb->requires_grad) {
                            auto& gb = adjoint_of(adj, pb);
                            for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
                          }
                        });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<double> out(a.size());
  auto va = a.values(), vb = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] * vb[i];
  detail::TensorNode *pa = a.node(), *pb = b.node();
  return make_op_result(a.shape(), std::move(out), {a, b},
                        [pa, pb](const std::vector<double>& g, detail::AdjointMap& adj) {
                          if (pa->requires_grad) {
                            auto& ga = adjoint_of(adj, pa);
                            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * pb->values[i];
                          }
                          if (pb->requires_grad) {
                            auto& gb = adjoint_of(adj, pb);
                            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * pa->values[i];
                          }
                        });
}

Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.size());
  auto va = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] * factor;
  detail::TensorNode* pa = a.node();
  return make_op_result(a.shape(), std::move(out), {a},
                        [pa, factor](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& ga = adjoint_of(adj, pa);
                          for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * factor;
                        });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  const std::size_t m = a.shape()[0], k = a.shape()[1], k2 = b.shape()[0], n = b.shape()[1];
  if (k != k2) {
    throw DimensionError("matmul: inner extents disagree, " + shape_str(a.shape()) + " times " +
                         shape_str(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  auto va = a.values(), vb = b.values();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = va[i * k + p];
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aip * vb[p * n + j];
    }
  }
  detail::TensorNode *pa = a.node(), *pb = b.node();
  return make_op_result({m, n}, std::move(out), {a, b},
                        [pa, pb, m, k, n](const std::vector<double>& g, detail::AdjointMap& adj) {
                          if (pa->requires_grad) {
                            // dA = g . B^T
                            auto& ga = adjoint_of(adj, pa);
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t j = 0; j < n; ++j) {
                                const double gij = g[i * n + j];
                                if (gij == 0.0) continue;
                                for (std::size_t p = 0; p < k; ++p)
                                  ga[i * k + p] += gij * pb->values[p * n + j];
                              }
                          }
                          if (pb->requires_grad) {
                            // dB = A^T . g
                            auto& gb = adjoint_of(adj, pb);
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t p = 0; p < k; ++p) {
                                const double aip = pa->values[i * k + p];
                                if (aip == 0.0) continue;
                                for (std::size_t j = 0; j < n; ++j)
                                  gb[p * n + j] += aip * g[i * n + j];
                              }
                          }
                        });
}

Tensor transpose(const Tensor& a) {
  require_matrix(a, "transpose");
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  std::vector<double> out(m * n);
  auto va = a.values();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = va[i * n + j];
  detail::TensorNode* pa = a.node();
  return make_op_result({n, m}, std::move(out), {a},
                        [pa, m, n](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& ga = adjoint_of(adj, pa);
                          for (std::size_t i = 0; i < m; ++i)
                            for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += g[j * m + i];
                        });
}

Tensor add_row_broadcast(const Tensor& a, const Tensor& bias) {
  require_matrix(a, "add_row_broadcast");
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  const bool bias_ok = (bias.shape().size() == 1 && bias.shape()[0] == n) ||
                       (bias.shape().size() == 2 && bias.shape()[0] == 1 && bias.shape()[1] == n);
  if (!bias_ok) {
    throw DimensionError("add_row_broadcast: bias shape " + shape_str(bias.shape()) +
                         " does not broadcast over " + shape_str(a.shape()));
  }
  std::vector<double> out(m * n);
  auto va = a.values(), vb = bias.values();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = va[i * n + j] + vb[j];
  detail::TensorNode *pa = a.node(), *pb = bias.node();
  return make_op_result({m, n}, std::move(out), {a, bias},
                        [pa, pb, m, n](const std::vector<double>& g, detail::AdjointMap& adj) {
                          if (pa->requires_grad) {
                            auto& ga = adjoint_of(adj, pa);
                            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                          }
                          if (pb->requires_grad) {
                            auto& gb = adjoint_of(adj, pb);
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t j = 0; j < n; ++j) gb[j] += g[i * n + j];
                          }
                        });
}

Tensor tanh(const Tensor& a) {
  std::vector<double> out(a.size());
  auto va = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(va[i]);
  detail::TensorNode* pa = a.node();
  std::vector<double> saved = out;
  return make_op_result(a.shape(), std::move(out), {a},
                        [pa, saved = std::move(saved)](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& ga = adjoint_of(adj, pa);
                          for (std::size_t i = 0; i < g.size(); ++i)
                            ga[i] += g[i] * (1.0 - saved[i] * saved[i]);
                        });
}

// --- reductions and row ops ---------------------------------------------------

Tensor row_softmax(const Tensor& x) {
  require_matrix(x, "row_softmax");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  std::vector<double> out(m * n);
  auto vx = x.values();
  for (std::size_t i = 0; i < m; ++i) {
    double mx = vx[i * n];
    for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, vx[i * n + j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out[i * n + j] = std::exp(vx[i * n + j] - mx);
      sum += out[i * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] /= sum;
  }
  detail::TensorNode* px = x.node();
  std::vector<double> saved = out;
  return make_op_result({m, n}, std::move(out), {x},
                        [px, m, n, saved = std::move(saved)](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& gx = adjoint_of(adj, px);
                          for (std::size_t i = 0; i < m; ++i) {
                            double dot = 0.0;
                            for (std::size_t j = 0; j < n; ++j) dot += g[i * n + j] * saved[i * n + j];
                            for (std::size_t j = 0; j < n; ++j)
                              gx[i * n + j] += saved[i * n + j] * (g[i * n + j] - dot);
                          }
                        });
}

Tensor row_logsumexp(const Tensor& x) {
  require_matrix(x, "row_logsumexp");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  std::vector<double> out(m);
  std::vector<double> soft(m * n);  // softmax rows, reused by the backward pass
  auto vx = x.values();
  for (std::size_t i = 0; i < m; ++i) {
    double mx = vx[i * n];
    for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, vx[i * n + j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      soft[i * n + j] = std::exp(vx[i * n + j] - mx);
      sum += soft[i * n + j];
    }
    out[i] = mx + std::log(sum);
    for (std::size_t j = 0; j < n; ++j) soft[i * n + j] /= sum;
  }
  detail::TensorNode* px = x.node();
  return make_op_result({m, 1}, std::move(out), {x},
                        [px, m, n, soft = std::move(soft)](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& gx = adjoint_of(adj, px);
                          for (std::size_t i = 0; i < m; ++i)
                            for (std::size_t j = 0; j < n; ++j) gx[i * n + j] += g[i] * soft[i * n + j];
                        });
}

Tensor l2_normalize_rows(const Tensor& x, double eps) {
  require_matrix(x, "l2_normalize_rows");
  if (eps <= 0.0) throw ParameterError("l2_normalize_rows: eps must be positive");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  std::vector<double> out(m * n);
  std::vector<double> inv_norm(m);
  auto vx = x.values();
  for (std::size_t i = 0; i < m; ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) sq += vx[i * n + j] * vx[i * n + j];
    double norm = std::sqrt(sq);
    if (norm < eps) {
      throw DegenerateRowError("l2_normalize_rows: row " + std::to_string(i) + " has norm " +
                               std::to_string(norm) + " < eps");
    }
    inv_norm[i] = 1.0 / norm;
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = vx[i * n + j] * inv_norm[i];
  }
  detail::TensorNode* px = x.node();
  std::vector<double> saved = out;
  return make_op_result({m, n}, std::move(out), {x},
                        [px, m, n, inv_norm = std::move(inv_norm), saved = std::move(saved)](
                            const std::vector<double>& g, detail::AdjointMap& adj) {
                          // d/dx (x/|x|) = (g - (g.y) y) / |x|
                          auto& gx = adjoint_of(adj, px);
                          for (std::size_t i = 0; i < m; ++i) {
                            double dot = 0.0;
                            for (std::size_t j = 0; j < n; ++j) dot += g[i * n + j] * saved[i * n + j];
                            for (std::size_t j = 0; j < n; ++j)
                              gx[i * n + j] += (g[i * n + j] - dot * saved[i * n + j]) * inv_norm[i];
                          }
                        });
}

Tensor cosine_similarity_matrix(const Tensor& u, const Tensor& v) {
  require_matrix(u, "cosine_similarity_matrix");
  require_matrix(v, "cosine_similarity_matrix");
  if (u.shape()[1] != v.shape()[1]) {
    throw DimensionError("cosine_similarity_matrix: feature extents disagree, " + shape_str(u.shape()) +
                         " vs " + shape_str(v.shape()));
  }
  return matmul(l2_normalize_rows(u), transpose(l2_normalize_rows(v)));
}

Tensor diagonal(const Tensor& x) {
  require_matrix(x, "diagonal");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (m != n) throw DimensionError("diagonal: matrix is not square, " + shape_str(x.shape()));
  std::vector<double> out(m);
  auto vx = x.values();
  for (std::size_t i = 0; i < m; ++i) out[i] = vx[i * n + i];
  detail::TensorNode* px = x.node();
  return make_op_result({m, 1}, std::move(out), {x},
                        [px, m, n](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& gx = adjoint_of(adj, px);
                          for (std::size_t i = 0; i < m; ++i) gx[i * n + i] += g[i];
                        });
}

Tensor gather_labels(const Tensor& x, const std::vector<std::size_t>& labels) {
  require_matrix(x, "gather_labels");
  const std::size_t m = x.shape()[0], n = x.shape()[1];
  if (labels.size() != m) {
    throw DimensionError("gather_labels: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(m) + " rows");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (labels[i] >= n) {
      throw ContractError("gather_labels: label " + std::to_string(labels[i]) + " at row " +
                          std::to_string(i) + " out of range [0, " + std::to_string(n) + ")");
    }
  }
  std::vector<double> out(m);
  auto vx = x.values();
  for (std::size_t i = 0; i < m; ++i) out[i] = vx[i * n + labels[i]];
  detail::TensorNode* px = x.node();
  return make_op_result({m, 1}, std::move(out), {x},
                        [px, n, labels](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& gx = adjoint_of(adj, px);
                          for (std::size_t i = 0; i < g.size(); ++i) gx[i * n + labels[i]] += g[i];
                        });
}

Tensor log_floored(const Tensor& x, double floor) {
  if (floor <= 0.0) throw ParameterError("log_floored: floor must be positive");
  std::vector<double> out(x.size());
  auto vx = x.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(std::max(vx[i], floor));
  detail::TensorNode* px = x.node();
  return make_op_result(x.shape(), std::move(out), {x},
                        [px, floor](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& gx = adjoint_of(adj, px);
                          for (std::size_t i = 0; i < g.size(); ++i) {
                            if (px->values[i] > floor) gx[i] += g[i] / px->values[i];
                          }
                        });
}

Tensor mean_all(const Tensor& x) {
  const double inv = 1.0 / static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x.values()) sum += v;
  detail::TensorNode* px = x.node();
  return make_op_result({1}, {sum * inv}, {x},
                        [px, inv](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& gx = adjoint_of(adj, px);
                          for (double& gi : gx) gi += g[0] * inv;
                        });
}

Tensor sum_all(const Tensor& x) {
  double sum = 0.0;
  for (double v : x.values()) sum += v;
  detail::TensorNode* px = x.node();
  return make_op_result({1}, {sum}, {x},
                        [px](const std::vector<double>& g, detail::AdjointMap& adj) {
                          auto& gx = adjoint_of(adj, px);
                          for (double& gi : gx) gi += g[0];
                        });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  require_matrix(a, "concat_cols");
  require_matrix(b, "concat_cols");
  const std::size_t m = a.shape()[0], p = a.shape()[1], q = b.shape()[1];
  if (b.shape()[0] != m) {
    throw DimensionError("concat_cols: row extents disagree, " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
  }
  std::vector<double> out(m * (p + q));
  auto va = a.values(), vb = b.values();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < p; ++j) out[i * (p + q) + j] = va[i * p + j];
    for (std::size_t j = 0; j < q; ++j) out[i * (p + q) + p + j] = vb[i * q + j];
  }
  detail::TensorNode *pa = a.node(), *pb = b.node();
  return make_op_result({m, p + q}, std::move(out), {a, b},
                        [pa, pb, m, p, q](const std::vector<double>& g, detail::AdjointMap& adj) {
                          if (pa->requires_grad) {
                            auto& ga = adjoint_of(adj, pa);
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t j = 0; j < p; ++j) ga[i * p + j] += g[i * (p + q) + j];
                          }
                          if (pb->requires_grad) {
                            auto& gb = adjoint_of(adj, pb);
                            for (std::size_t i = 0; i < m; ++i)
                              for (std::size_t j = 0; j < q; ++j) gb[i * q + j] += g[i * (p + q) + p + j];
                          }
                        });
}

}  // namespace turbo
