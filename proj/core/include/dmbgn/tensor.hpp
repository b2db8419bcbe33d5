#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dmbgn/common.hpp"

namespace dmbgn {

using Shape = std::vector<std::size_t>;

std::string shape_str(const Shape& s);

class Tensor;
using TensorPtr = std::shared_ptr<Tensor>;

/// Dense row-major double tensor. Ops in ops.hpp record the computation
/// graph on the fly: each result keeps references to its inputs plus a
/// closure that pushes the adjoint back to them. backward() walks the
/// recorded graph once, in reverse topological order.
///
/// Tensors already written into a graph are treated as immutable; training
/// code mutates only leaf parameters between forward passes.
class Tensor : public std::enable_shared_from_this<Tensor> {
 public:
  std::vector<double> data;
  std::vector<double> grad;  // allocated lazily by backward()
  bool requires_grad = false;

  // Graph links, populated by ops for tracked results.
  std::vector<TensorPtr> parents;
  std::function<void(Tensor&)> backward_fn;

  explicit Tensor(Shape shape, bool requires_grad = false);

  static TensorPtr create(Shape shape, std::vector<double> values,
                          bool requires_grad = false);
  static TensorPtr zeros(Shape shape, bool requires_grad = false);
  static TensorPtr full(Shape shape, double value, bool requires_grad = false);
  static TensorPtr scalar(double value, bool requires_grad = false);
  static TensorPtr vec(std::vector<double> values, bool requires_grad = false);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t numel() const { return data.size(); }
  bool is_scalar() const { return data.size() == 1; }

  // Rank-2 helpers.
  std::size_t rows() const { return shape_.at(0); }
  std::size_t cols() const { return shape_.at(1); }
  double& at(std::size_t i, std::size_t j) { return data[i * shape_[1] + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * shape_[1] + j]; }

  /// Value of a one-element tensor; throws otherwise.
  double value() const;

  bool tracked() const { return requires_grad || static_cast<bool>(backward_fn); }

  void ensure_grad();
  void zero_grad();

  /// True if every entry is finite.
  bool all_finite() const;

 private:
  Shape shape_;
};

/// Reverse-mode sweep from a scalar loss. Accumulates into .grad of every
/// tensor on the tracked paths; leaf parameter grads persist until
/// zero_grad so per-sample contributions can be summed across a batch.
void backward(const TensorPtr& loss);

/// When enabled, every op verifies its output is finite and throws
/// NumericError otherwise. Off by default (costs a pass per op).
void set_debug_checks(bool enabled);
bool debug_checks_enabled();

}  // namespace dmbgn
