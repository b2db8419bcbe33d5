#include "dmbgn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace dmbgn::ops {

namespace {

[[noreturn]] void shape_fail(const char* op, const Shape& a, const Shape& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                              shape_str(a) + " vs " + shape_str(b));
}

void require_same(const char* op, const TensorPtr& a, const TensorPtr& b) {
  if (a->shape() != b->shape()) shape_fail(op, a->shape(), b->shape());
}

void require_rank(const char* op, const TensorPtr& t, std::size_t r) {
  if (t->rank() != r) {
    throw std::invalid_argument(std::string(op) + ": expected rank-" +
                                std::to_string(r) + " operand, got shape " +
                                shape_str(t->shape()));
  }
}

void require_scalar(const char* op, const TensorPtr& t) {
  if (!t->is_scalar()) {
    throw std::invalid_argument(std::string(op) + ": expected scalar, got shape " +
                                shape_str(t->shape()));
  }
}

bool any_tracked(const std::vector<TensorPtr>& ts) {
  return std::any_of(ts.begin(), ts.end(),
                     [](const TensorPtr& t) { return t->tracked(); });
}

/// Attaches graph links unless every input is a constant, in which case the
/// result is folded into a plain constant too.
void finish(const TensorPtr& out, const char* op, std::vector<TensorPtr> parents,
            std::function<void(Tensor&)> fn) {
  if (debug_checks_enabled() && !out->all_finite()) {
    throw NumericError(std::string(op) + ": non-finite output");
  }
  if (!any_tracked(parents)) return;
  out->parents = std::move(parents);
  out->backward_fn = std::move(fn);
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

TensorPtr add(const TensorPtr& a, const TensorPtr& b) {
  require_same("add", a, b);
  auto out = Tensor::zeros(a->shape());
  for (std::size_t i = 0; i < out->numel(); ++i) out->data[i] = a->data[i] + b->data[i];
  finish(out, "add", {a, b}, [a, b](Tensor& self) {
    if (a->tracked()) {
      a->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) a->grad[i] += self.grad[i];
    }
    if (b->tracked()) {
      b->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) b->grad[i] += self.grad[i];
    }
  });
  return out;
}

TensorPtr sub(const TensorPtr& a, const TensorPtr& b) {
  require_same("sub", a, b);
  auto out = Tensor::zeros(a->shape());
  for (std::size_t i = 0; i < out->numel(); ++i) out->data[i] = a->data[i] - b->data[i];
  finish(out, "sub", {a, b}, [a, b](Tensor& self) {
    if (a->tracked()) {
      a->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) a->grad[i] += self.grad[i];
    }
    if (b->tracked()) {
      b->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) b->grad[i] -= self.grad[i];
    }
  });
  return out;
}

TensorPtr mul(const TensorPtr& a, const TensorPtr& b) {
  require_same("mul", a, b);
  auto out = Tensor::zeros(a->shape());
  for (std::size_t i = 0; i < out->numel(); ++i) out->data[i] = a->data[i] * b->data[i];
  finish(out, "mul", {a, b}, [a, b](Tensor& self) {
    if (a->tracked()) {
      a->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) a->grad[i] += self.grad[i] * b->data[i];
    }
    if (b->tracked()) {
      b->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) b->grad[i] += self.grad[i] * a->data[i];
    }
  });
  return out;
}

TensorPtr scale(const TensorPtr& a, double c) {
  auto out = Tensor::zeros(a->shape());
  for (std::size_t i = 0; i < out->numel(); ++i) out->data[i] = c * a->data[i];
  finish(out, "scale", {a}, [a, c](Tensor& self) {
    if (!a->tracked()) return;
    a->ensure_grad();
    for (std::size_t i = 0; i < self.numel(); ++i) a->grad[i] += c * self.grad[i];
  });
  return out;
}

TensorPtr add_rowvec(const TensorPtr& mat, const TensorPtr& v) {
  require_rank("add_rowvec", mat, 2);
  require_rank("add_rowvec", v, 1);
  if (mat->cols() != v->numel()) shape_fail("add_rowvec", mat->shape(), v->shape());
  const std::size_t m = mat->rows(), n = mat->cols();
  auto out = Tensor::zeros(mat->shape());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out->at(i, j) = mat->at(i, j) + v->data[j];
  finish(out, "add_rowvec", {mat, v}, [mat, v, m, n](Tensor& self) {
    if (mat->tracked()) {
      mat->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) mat->grad[i] += self.grad[i];
    }
    if (v->tracked()) {
      v->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) v->grad[j] += self.grad[i * n + j];
    }
  });
  return out;
}

TensorPtr matmul(const TensorPtr& a, const TensorPtr& b) {
  require_rank("matmul", a, 2);
  require_rank("matmul", b, 2);
  if (a->cols() != b->rows()) shape_fail("matmul", a->shape(), b->shape());
  const std::size_t m = a->rows(), k = a->cols(), n = b->cols();
  auto out = Tensor::zeros(Shape{m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a->at(i, p);
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out->at(i, j) += aip * b->at(p, j);
    }
  }
  finish(out, "matmul", {a, b}, [a, b, m, k, n](Tensor& self) {
    if (a->tracked()) {
      a->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += self.grad[i * n + j] * b->at(p, j);
          a->grad[i * k + p] += acc;
        }
    }
    if (b->tracked()) {
      b->ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = a->at(i, p);
          if (aip == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) b->grad[p * n + j] += aip * self.grad[i * n + j];
        }
    }
  });
  return out;
}

TensorPtr vecmat(const TensorPtr& v, const TensorPtr& w) {
  require_rank("vecmat", v, 1);
  require_rank("vecmat", w, 2);
  if (v->numel() != w->rows()) shape_fail("vecmat", v->shape(), w->shape());
  const std::size_t k = w->rows(), n = w->cols();
  auto out = Tensor::zeros(Shape{n});
  for (std::size_t i = 0; i < k; ++i) {
    const double vi = v->data[i];
    if (vi == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) out->data[j] += vi * w->at(i, j);
  }
  finish(out, "vecmat", {v, w}, [v, w, k, n](Tensor& self) {
    if (v->tracked()) {
      v->ensure_grad();
      for (std::size_t i = 0; i < k; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += self.grad[j] * w->at(i, j);
        v->grad[i] += acc;
      }
    }
    if (w->tracked()) {
      w->ensure_grad();
      for (std::size_t i = 0; i < k; ++i) {
        const double vi = v->data[i];
        if (vi == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) w->grad[i * n + j] += vi * self.grad[j];
      }
    }
  });
  return out;
}

TensorPtr matvec(const TensorPtr& m, const TensorPtr& v) {
  require_rank("matvec", m, 2);
  require_rank("matvec", v, 1);
  if (m->cols() != v->numel()) shape_fail("matvec", m->shape(), v->shape());
  const std::size_t r = m->rows(), c = m->cols();
  auto out = Tensor::zeros(Shape{r});
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += m->at(i, j) * v->data[j];
    out->data[i] = acc;
  }
  finish(out, "matvec", {m, v}, [m, v, r, c](Tensor& self) {
    if (m->tracked()) {
      m->ensure_grad();
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m->grad[i * c + j] += self.grad[i] * v->data[j];
    }
    if (v->tracked()) {
      v->ensure_grad();
      for (std::size_t i = 0; i < r; ++i) {
        const double gi = self.grad[i];
        if (gi == 0.0) continue;
        for (std::size_t j = 0; j < c; ++j) v->grad[j] += gi * m->at(i, j);
      }
    }
  });
  return out;
}

TensorPtr dot(const TensorPtr& a, const TensorPtr& b) {
  require_rank("dot", a, 1);
  require_same("dot", a, b);
  auto out = Tensor::scalar(0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < a->numel(); ++i) acc += a->data[i] * b->data[i];
  out->data[0] = acc;
  finish(out, "dot", {a, b}, [a, b](Tensor& self) {
    const double g = self.grad[0];
    if (a->tracked()) {
      a->ensure_grad();
      for (std::size_t i = 0; i < a->numel(); ++i) a->grad[i] += g * b->data[i];
    }
    if (b->tracked()) {
      b->ensure_grad();
      for (std::size_t i = 0; i < b->numel(); ++i) b->grad[i] += g * a->data[i];
    }
  });
  return out;
}

TensorPtr outer_flat(const TensorPtr& a, const TensorPtr& b) {
  require_rank("outer_flat", a, 1);
  require_rank("outer_flat", b, 1);
  const std::size_t m = a->numel(), n = b->numel();
  auto out = Tensor::zeros(Shape{m * n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out->data[i * n + j] = a->data[i] * b->data[j];
  finish(out, "outer_flat", {a, b}, [a, b, m, n](Tensor& self) {
    if (a->tracked()) {
      a->ensure_grad();
      for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += self.grad[i * n + j] * b->data[j];
        a->grad[i] += acc;
      }
    }
    if (b->tracked()) {
      b->ensure_grad();
      for (std::size_t i = 0; i < m; ++i) {
        const double ai = a->data[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) b->grad[j] += ai * self.grad[i * n + j];
      }
    }
  });
  return out;
}

TensorPtr sigmoid(const TensorPtr& x) {
  auto out = Tensor::zeros(x->shape());
  for (std::size_t i = 0; i < x->numel(); ++i) out->data[i] = stable_sigmoid(x->data[i]);
  finish(out, "sigmoid", {x}, [x](Tensor& self) {
    if (!x->tracked()) return;
    x->ensure_grad();
    for (std::size_t i = 0; i < self.numel(); ++i) {
      const double s = self.data[i];
      x->grad[i] += self.grad[i] * s * (1.0 - s);
    }
  });
  return out;
}

TensorPtr tanh(const TensorPtr& x) {
  auto out = Tensor::zeros(x->shape());
  for (std::size_t i = 0; i < x->numel(); ++i) out->data[i] = std::tanh(x->data[i]);
  finish(out, "tanh", {x}, [x](Tensor& self) {
    if (!x->tracked()) return;
    x->ensure_grad();
    for (std::size_t i = 0; i < self.numel(); ++i) {
      const double t = self.data[i];
      x->grad[i] += self.grad[i] * (1.0 - t * t);
    }
  });
  return out;
}

TensorPtr prelu(const TensorPtr& x, const TensorPtr& slope) {
  require_scalar("prelu", slope);
  const double a = slope->data[0];
  auto out = Tensor::zeros(x->shape());
  for (std::size_t i = 0; i < x->numel(); ++i) {
    const double v = x->data[i];
    out->data[i] = v > 0.0 ? v : a * v;
  }
  finish(out, "prelu", {x, slope}, [x, slope, a](Tensor& self) {
    if (x->tracked()) {
      x->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) {
        x->grad[i] += self.grad[i] * (x->data[i] > 0.0 ? 1.0 : a);
      }
    }
    if (slope->tracked()) {
      slope->ensure_grad();
      double acc = 0.0;
      for (std::size_t i = 0; i < self.numel(); ++i) {
        if (x->data[i] <= 0.0) acc += self.grad[i] * x->data[i];
      }
      slope->grad[0] += acc;
    }
  });
  return out;
}

TensorPtr concat(const std::vector<TensorPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no inputs");
  std::size_t total = 0;
  for (const auto& p : parts) {
    require_rank("concat", p, 1);
    total += p->numel();
  }
  auto out = Tensor::zeros(Shape{total});
  std::size_t off = 0;
  for (const auto& p : parts) {
    std::copy(p->data.begin(), p->data.end(), out->data.begin() + off);
    off += p->numel();
  }
  finish(out, "concat", parts, [parts](Tensor& self) {
    std::size_t off = 0;
    for (const auto& p : parts) {
      if (p->tracked()) {
        p->ensure_grad();
        for (std::size_t i = 0; i < p->numel(); ++i) p->grad[i] += self.grad[off + i];
      }
      off += p->numel();
    }
  });
  return out;
}

TensorPtr stack_rows(const std::vector<TensorPtr>& rows) {
  if (rows.empty()) throw std::invalid_argument("stack_rows: no inputs");
  const std::size_t d = rows[0]->numel();
  for (const auto& r : rows) {
    require_rank("stack_rows", r, 1);
    if (r->numel() != d) shape_fail("stack_rows", rows[0]->shape(), r->shape());
  }
  auto out = Tensor::zeros(Shape{rows.size(), d});
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i]->data.begin(), rows[i]->data.end(), out->data.begin() + i * d);
  finish(out, "stack_rows", rows, [rows, d](Tensor& self) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i]->tracked()) continue;
      rows[i]->ensure_grad();
      for (std::size_t j = 0; j < d; ++j) rows[i]->grad[j] += self.grad[i * d + j];
    }
  });
  return out;
}

TensorPtr stack_scalars(const std::vector<TensorPtr>& scalars) {
  if (scalars.empty()) throw std::invalid_argument("stack_scalars: no inputs");
  auto out = Tensor::zeros(Shape{scalars.size()});
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    require_scalar("stack_scalars", scalars[i]);
    out->data[i] = scalars[i]->data[0];
  }
  finish(out, "stack_scalars", scalars, [scalars](Tensor& self) {
    for (std::size_t i = 0; i < scalars.size(); ++i) {
      if (!scalars[i]->tracked()) continue;
      scalars[i]->ensure_grad();
      scalars[i]->grad[0] += self.grad[i];
    }
  });
  return out;
}

TensorPtr take_row(const TensorPtr& mat, std::size_t row) {
  require_rank("take_row", mat, 2);
  if (row >= mat->rows()) {
    throw std::invalid_argument("take_row: row " + std::to_string(row) +
                                " out of range for shape " + shape_str(mat->shape()));
  }
  const std::size_t d = mat->cols();
  auto out = Tensor::zeros(Shape{d});
  std::copy(mat->data.begin() + row * d, mat->data.begin() + (row + 1) * d,
            out->data.begin());
  finish(out, "take_row", {mat}, [mat, row, d](Tensor& self) {
    if (!mat->tracked()) return;
    mat->ensure_grad();
    for (std::size_t j = 0; j < d; ++j) mat->grad[row * d + j] += self.grad[j];
  });
  return out;
}

TensorPtr gather_rows(const TensorPtr& mat, std::vector<std::size_t> idx) {
  require_rank("gather_rows", mat, 2);
  const std::size_t d = mat->cols();
  for (std::size_t r : idx) {
    if (r >= mat->rows()) {
      throw std::invalid_argument("gather_rows: row " + std::to_string(r) +
                                  " out of range for shape " + shape_str(mat->shape()));
    }
  }
  auto out = Tensor::zeros(Shape{idx.size(), d});
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy(mat->data.begin() + idx[i] * d, mat->data.begin() + (idx[i] + 1) * d,
              out->data.begin() + i * d);
  finish(out, "gather_rows", {mat}, [mat, idx = std::move(idx), d](Tensor& self) {
    if (!mat->tracked()) return;
    mat->ensure_grad();
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < d; ++j) mat->grad[idx[i] * d + j] += self.grad[i * d + j];
  });
  return out;
}

TensorPtr prepend_row(const TensorPtr& v, const TensorPtr& mat) {
  require_rank("prepend_row", v, 1);
  require_rank("prepend_row", mat, 2);
  const std::size_t d = mat->cols();
  if (v->numel() != d) shape_fail("prepend_row", v->shape(), mat->shape());
  auto out = Tensor::zeros(Shape{mat->rows() + 1, d});
  std::copy(v->data.begin(), v->data.end(), out->data.begin());
  std::copy(mat->data.begin(), mat->data.end(), out->data.begin() + d);
  finish(out, "prepend_row", {v, mat}, [v, mat, d](Tensor& self) {
    if (v->tracked()) {
      v->ensure_grad();
      for (std::size_t j = 0; j < d; ++j) v->grad[j] += self.grad[j];
    }
    if (mat->tracked()) {
      mat->ensure_grad();
      for (std::size_t i = 0; i < mat->numel(); ++i) mat->grad[i] += self.grad[d + i];
    }
  });
  return out;
}

TensorPtr gather_elems(const TensorPtr& v, std::vector<std::size_t> idx) {
  require_rank("gather_elems", v, 1);
  for (std::size_t i : idx) {
    if (i >= v->numel()) {
      throw std::invalid_argument("gather_elems: index " + std::to_string(i) +
                                  " out of range for shape " + shape_str(v->shape()));
    }
  }
  auto out = Tensor::zeros(Shape{idx.size()});
  for (std::size_t i = 0; i < idx.size(); ++i) out->data[i] = v->data[idx[i]];
  finish(out, "gather_elems", {v}, [v, idx = std::move(idx)](Tensor& self) {
    if (!v->tracked()) return;
    v->ensure_grad();
    for (std::size_t i = 0; i < idx.size(); ++i) v->grad[idx[i]] += self.grad[i];
  });
  return out;
}

TensorPtr elem(const TensorPtr& v, std::size_t i) {
  if (i >= v->numel()) {
    throw std::invalid_argument("elem: index " + std::to_string(i) +
                                " out of range for shape " + shape_str(v->shape()));
  }
  auto out = Tensor::scalar(v->data[i]);
  finish(out, "elem", {v}, [v, i](Tensor& self) {
    if (!v->tracked()) return;
    v->ensure_grad();
    v->grad[i] += self.grad[0];
  });
  return out;
}

TensorPtr mean_rows(const TensorPtr& mat) {
  require_rank("mean_rows", mat, 2);
  const std::size_t n = mat->rows(), d = mat->cols();
  if (n == 0) throw std::invalid_argument("mean_rows: empty matrix");
  auto out = Tensor::zeros(Shape{d});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out->data[j] += mat->at(i, j);
  for (std::size_t j = 0; j < d; ++j) out->data[j] /= static_cast<double>(n);
  finish(out, "mean_rows", {mat}, [mat, n, d](Tensor& self) {
    if (!mat->tracked()) return;
    mat->ensure_grad();
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) mat->grad[i * d + j] += self.grad[j] * inv;
  });
  return out;
}

TensorPtr max_rows(const TensorPtr& mat) {
  require_rank("max_rows", mat, 2);
  const std::size_t n = mat->rows(), d = mat->cols();
  if (n == 0) throw std::invalid_argument("max_rows: empty matrix");
  auto out = Tensor::zeros(Shape{d});
  std::vector<std::size_t> arg(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    double best = mat->at(0, j);
    std::size_t bi = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (mat->at(i, j) > best) {
        best = mat->at(i, j);
        bi = i;
      }
    }
    out->data[j] = best;
    arg[j] = bi;
  }
  finish(out, "max_rows", {mat}, [mat, arg = std::move(arg), d](Tensor& self) {
    if (!mat->tracked()) return;
    mat->ensure_grad();
    for (std::size_t j = 0; j < d; ++j) mat->grad[arg[j] * d + j] += self.grad[j];
  });
  return out;
}

TensorPtr mean_all(const TensorPtr& x) {
  if (x->numel() == 0) throw std::invalid_argument("mean_all: empty tensor");
  auto out = Tensor::scalar(0.0);
  double acc = 0.0;
  for (double v : x->data) acc += v;
  out->data[0] = acc / static_cast<double>(x->numel());
  finish(out, "mean_all", {x}, [x](Tensor& self) {
    if (!x->tracked()) return;
    x->ensure_grad();
    const double g = self.grad[0] / static_cast<double>(x->numel());
    for (std::size_t i = 0; i < x->numel(); ++i) x->grad[i] += g;
  });
  return out;
}

TensorPtr max_all(const TensorPtr& x) {
  if (x->numel() == 0) throw std::invalid_argument("max_all: empty tensor");
  std::size_t arg = 0;
  for (std::size_t i = 1; i < x->numel(); ++i) {
    if (x->data[i] > x->data[arg]) arg = i;
  }
  auto out = Tensor::scalar(x->data[arg]);
  finish(out, "max_all", {x}, [x, arg](Tensor& self) {
    if (!x->tracked()) return;
    x->ensure_grad();
    x->grad[arg] += self.grad[0];
  });
  return out;
}

TensorPtr add_n(const std::vector<TensorPtr>& xs) {
  if (xs.empty()) throw std::invalid_argument("add_n: no inputs");
  for (const auto& x : xs) require_same("add_n", xs[0], x);
  auto out = Tensor::zeros(xs[0]->shape());
  for (const auto& x : xs)
    for (std::size_t i = 0; i < out->numel(); ++i) out->data[i] += x->data[i];
  finish(out, "add_n", xs, [xs](Tensor& self) {
    for (const auto& x : xs) {
      if (!x->tracked()) continue;
      x->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) x->grad[i] += self.grad[i];
    }
  });
  return out;
}

TensorPtr rows_scale(const TensorPtr& mat, const TensorPtr& gates) {
  require_rank("rows_scale", mat, 2);
  require_rank("rows_scale", gates, 1);
  if (mat->rows() != gates->numel()) shape_fail("rows_scale", mat->shape(), gates->shape());
  const std::size_t n = mat->rows(), d = mat->cols();
  auto out = Tensor::zeros(mat->shape());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out->at(i, j) = mat->at(i, j) * gates->data[i];
  finish(out, "rows_scale", {mat, gates}, [mat, gates, n, d](Tensor& self) {
    if (mat->tracked()) {
      mat->ensure_grad();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
          mat->grad[i * d + j] += self.grad[i * d + j] * gates->data[i];
    }
    if (gates->tracked()) {
      gates->ensure_grad();
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += self.grad[i * d + j] * mat->at(i, j);
        gates->grad[i] += acc;
      }
    }
  });
  return out;
}

TensorPtr scale_t(const TensorPtr& x, const TensorPtr& s) {
  require_scalar("scale_t", s);
  const double sv = s->data[0];
  auto out = Tensor::zeros(x->shape());
  for (std::size_t i = 0; i < x->numel(); ++i) out->data[i] = x->data[i] * sv;
  finish(out, "scale_t", {x, s}, [x, s, sv](Tensor& self) {
    if (x->tracked()) {
      x->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) x->grad[i] += self.grad[i] * sv;
    }
    if (s->tracked()) {
      s->ensure_grad();
      double acc = 0.0;
      for (std::size_t i = 0; i < self.numel(); ++i) acc += self.grad[i] * x->data[i];
      s->grad[0] += acc;
    }
  });
  return out;
}

TensorPtr divide_t(const TensorPtr& x, const TensorPtr& s) {
  require_scalar("divide_t", s);
  const double sv = s->data[0];
  if (sv == 0.0) throw NumericError("divide_t: division by zero");
  auto out = Tensor::zeros(x->shape());
  for (std::size_t i = 0; i < x->numel(); ++i) out->data[i] = x->data[i] / sv;
  finish(out, "divide_t", {x, s}, [x, s, sv](Tensor& self) {
    if (x->tracked()) {
      x->ensure_grad();
      for (std::size_t i = 0; i < self.numel(); ++i) x->grad[i] += self.grad[i] / sv;
    }
    if (s->tracked()) {
      s->ensure_grad();
      double acc = 0.0;
      for (std::size_t i = 0; i < self.numel(); ++i) acc += self.grad[i] * x->data[i];
      s->grad[0] -= acc / (sv * sv);
    }
  });
  return out;
}

TensorPtr neighbor_sum(const TensorPtr& x, const std::vector<std::vector<int>>& adj) {
  require_rank("neighbor_sum", x, 2);
  const std::size_t n = x->rows(), d = x->cols();
  if (adj.size() != n) {
    throw std::invalid_argument("neighbor_sum: adjacency for " +
                                std::to_string(adj.size()) + " nodes, features for " +
                                std::to_string(n));
  }
  for (const auto& nbrs : adj)
    for (int w : nbrs) {
      if (w < 0 || static_cast<std::size_t>(w) >= n) {
        throw std::invalid_argument("neighbor_sum: neighbor index " + std::to_string(w) +
                                    " out of range for " + std::to_string(n) + " nodes");
      }
    }
  auto out = Tensor::zeros(x->shape());
  for (std::size_t i = 0; i < n; ++i)
    for (int w : adj[i])
      for (std::size_t j = 0; j < d; ++j)
        out->data[i * d + j] += x->data[static_cast<std::size_t>(w) * d + j];
  finish(out, "neighbor_sum", {x}, [x, adj, n, d](Tensor& self) {
    if (!x->tracked()) return;
    x->ensure_grad();
    for (std::size_t i = 0; i < n; ++i)
      for (int w : adj[i])
        for (std::size_t j = 0; j < d; ++j)
          x->grad[static_cast<std::size_t>(w) * d + j] += self.grad[i * d + j];
  });
  return out;
}

TensorPtr embed_row(const TensorPtr& table, std::size_t row) {
  return take_row(table, row);
}

TensorPtr gather_sum_rows(const std::vector<TensorPtr>& tables,
                          const std::vector<std::vector<RowPick>>& picks,
                          double scale) {
  if (tables.empty()) throw std::invalid_argument("gather_sum_rows: no tables");
  const std::size_t d = tables[0]->cols();
  for (const auto& t : tables) {
    require_rank("gather_sum_rows", t, 2);
    if (t->cols() != d) {
      throw std::invalid_argument("gather_sum_rows: table width " +
                                  std::to_string(t->cols()) + " != " + std::to_string(d));
    }
  }
  for (const auto& row_picks : picks)
    for (const auto& p : row_picks) {
      if (p.table < 0 || static_cast<std::size_t>(p.table) >= tables.size()) {
        throw std::invalid_argument("gather_sum_rows: table index " +
                                    std::to_string(p.table) + " out of range");
      }
      if (p.row >= tables[static_cast<std::size_t>(p.table)]->rows()) {
        throw std::invalid_argument("gather_sum_rows: row " + std::to_string(p.row) +
                                    " out of range for table " + std::to_string(p.table));
      }
    }
  const std::size_t n = picks.size();
  auto out = Tensor::zeros({n, d});
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& p : picks[i]) {
      const auto& src = tables[static_cast<std::size_t>(p.table)]->data;
      for (std::size_t j = 0; j < d; ++j)
        out->data[i * d + j] += scale * src[p.row * d + j];
    }
  std::vector<TensorPtr> parents(tables.begin(), tables.end());
  finish(out, "gather_sum_rows", parents, [tables, picks, scale, d](Tensor& self) {
    for (std::size_t i = 0; i < picks.size(); ++i)
      for (const auto& p : picks[i]) {
        const auto& t = tables[static_cast<std::size_t>(p.table)];
        if (!t->tracked()) continue;
        t->ensure_grad();
        for (std::size_t j = 0; j < d; ++j)
          t->grad[p.row * d + j] += scale * self.grad[i * d + j];
      }
  });
  return out;
}

TensorPtr l2norm(const TensorPtr& v) {
  require_rank("l2norm", v, 1);
  double sq = 0.0;
  for (double x : v->data) sq += x * x;
  const double norm = std::sqrt(sq + 1e-24);
  auto out = Tensor::scalar(norm);
  finish(out, "l2norm", {v, }, [v, norm](Tensor& self) {
    if (!v->tracked()) return;
    v->ensure_grad();
    const double g = self.grad[0] / norm;
    for (std::size_t i = 0; i < v->numel(); ++i) v->grad[i] += g * v->data[i];
  });
  return out;
}

TensorPtr softmax_vec(const TensorPtr& v) {
  require_rank("softmax_vec", v, 1);
  if (v->numel() == 0) throw std::invalid_argument("softmax_vec: empty input");
  auto out = Tensor::zeros(v->shape());
  const double mx = *std::max_element(v->data.begin(), v->data.end());
  double denom = 0.0;
  for (std::size_t i = 0; i < v->numel(); ++i) {
    out->data[i] = std::exp(v->data[i] - mx);
    denom += out->data[i];
  }
  for (std::size_t i = 0; i < v->numel(); ++i) out->data[i] /= denom;
  finish(out, "softmax_vec", {v}, [v](Tensor& self) {
    if (!v->tracked()) return;
    v->ensure_grad();
    double inner = 0.0;
    for (std::size_t i = 0; i < self.numel(); ++i) inner += self.grad[i] * self.data[i];
    for (std::size_t i = 0; i < self.numel(); ++i)
      v->grad[i] += self.data[i] * (self.grad[i] - inner);
  });
  return out;
}

TensorPtr neg_log(const TensorPtr& x) {
  auto out = Tensor::zeros(x->shape());
  for (std::size_t i = 0; i < x->numel(); ++i)
    out->data[i] = -std::log(std::max(x->data[i], kProbEps));
  finish(out, "neg_log", {x}, [x](Tensor& self) {
    if (!x->tracked()) return;
    x->ensure_grad();
    for (std::size_t i = 0; i < self.numel(); ++i) {
      if (x->data[i] > kProbEps) x->grad[i] -= self.grad[i] / x->data[i];
    }
  });
  return out;
}

TensorPtr bce(const TensorPtr& prediction, double label) {
  require_scalar("bce", prediction);
  if (label != 0.0 && label != 1.0) {
    throw std::invalid_argument("bce: label must be 0 or 1, got " + std::to_string(label));
  }
  const double p = std::clamp(prediction->data[0], kProbEps, 1.0 - kProbEps);
  auto out = Tensor::scalar(-(label * std::log(p) + (1.0 - label) * std::log(1.0 - p)));
  finish(out, "bce", {prediction}, [prediction, label](Tensor& self) {
    if (!prediction->tracked()) return;
    prediction->ensure_grad();
    const double raw = prediction->data[0];
    if (raw <= kProbEps || raw >= 1.0 - kProbEps) return;  // clamped: flat
    prediction->grad[0] += self.grad[0] * (raw - label) / (raw * (1.0 - raw));
  });
  return out;
}

TensorPtr dropout(const TensorPtr& x, double rate, bool training, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) {
    throw std::invalid_argument("dropout: rate " + std::to_string(rate) +
                                " outside [0,1)");
  }
  if (!training || rate == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - rate);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> mask(x->numel());
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = uni(rng) < rate ? 0.0 : keep_scale;
  auto out = Tensor::zeros(x->shape());
  for (std::size_t i = 0; i < x->numel(); ++i) out->data[i] = x->data[i] * mask[i];
  finish(out, "dropout", {x}, [x, mask = std::move(mask)](Tensor& self) {
    if (!x->tracked()) return;
    x->ensure_grad();
    for (std::size_t i = 0; i < self.numel(); ++i) x->grad[i] += self.grad[i] * mask[i];
  });
  return out;
}

}  // namespace dmbgn::ops
