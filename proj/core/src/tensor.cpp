#include "dmbgn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace dmbgn {

namespace {
bool g_debug_checks = false;

std::size_t shape_numel(const Shape& s) {
  std::size_t n = 1;
  for (std::size_t d : s) n *= d;
  return n;
}
}  // namespace

void set_debug_checks(bool enabled) { g_debug_checks = enabled; }
bool debug_checks_enabled() { return g_debug_checks; }

std::string shape_str(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  out += "]";
  return out;
}

Tensor::Tensor(Shape shape, bool requires_grad_)
    : requires_grad(requires_grad_), shape_(std::move(shape)) {
  data.assign(shape_numel(shape_), 0.0);
}

TensorPtr Tensor::create(Shape shape, std::vector<double> values,
                         bool requires_grad) {
  auto t = std::make_shared<Tensor>(std::move(shape), requires_grad);
  if (values.size() != t->data.size()) {
    throw std::invalid_argument("Tensor::create: " + std::to_string(values.size()) +
                                " values for shape " + shape_str(t->shape()));
  }
  t->data = std::move(values);
  return t;
}

TensorPtr Tensor::zeros(Shape shape, bool requires_grad) {
  return std::make_shared<Tensor>(std::move(shape), requires_grad);
}

TensorPtr Tensor::full(Shape shape, double value, bool requires_grad) {
  auto t = std::make_shared<Tensor>(std::move(shape), requires_grad);
  std::fill(t->data.begin(), t->data.end(), value);
  return t;
}

TensorPtr Tensor::scalar(double value, bool requires_grad) {
  auto t = std::make_shared<Tensor>(Shape{}, requires_grad);
  t->data[0] = value;
  return t;
}

TensorPtr Tensor::vec(std::vector<double> values, bool requires_grad) {
  Shape s{values.size()};
  return create(std::move(s), std::move(values), requires_grad);
}

double Tensor::value() const {
  if (data.size() != 1) {
    throw std::invalid_argument("Tensor::value on shape " + shape_str(shape_));
  }
  return data[0];
}

void Tensor::ensure_grad() {
  if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
}

void Tensor::zero_grad() {
  if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
}

bool Tensor::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void backward(const TensorPtr& loss) {
  if (!loss) throw std::invalid_argument("backward: null loss");
  if (!loss->is_scalar()) {
    throw std::invalid_argument("backward: loss has shape " +
                                shape_str(loss->shape()) + ", expected scalar");
  }

  // Iterative post-order DFS; children (parents in graph terms) come out
  // before the nodes that consume them, so reversing gives topo order.
  std::vector<Tensor*> order;
  std::unordered_set<Tensor*> visited;
  std::vector<std::pair<Tensor*, std::size_t>> stack;
  stack.emplace_back(loss.get(), 0);
  visited.insert(loss.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Tensor* p = node->parents[next++].get();
      if (p->backward_fn && visited.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  loss->ensure_grad();
  loss->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Tensor* t = *it;
    t->ensure_grad();
    if (t->backward_fn) t->backward_fn(*t);
  }
}

}  // namespace dmbgn
