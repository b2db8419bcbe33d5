#include "dmbgn/nn.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dmbgn::nn {

void glorot_fill(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> uni(-bound, bound);
  for (double& v : t.data) v = uni(rng);
}

TensorPtr ParamStore::add(const std::string& name, TensorPtr t, bool trainable,
                          bool l2) {
  if (index_.count(name)) {
    throw std::invalid_argument("ParamStore: duplicate parameter " + name);
  }
  t->requires_grad = true;
  index_[name] = entries_.size();
  entries_.push_back(Entry{name, t, trainable, l2});
  return entries_.back().tensor;
}

bool ParamStore::has(const std::string& name) const { return index_.count(name) > 0; }

TensorPtr ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw std::invalid_argument("ParamStore: unknown parameter " + name);
  }
  return entries_[it->second].tensor;
}

void ParamStore::set_trainable(const std::string& name, bool trainable) {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw std::invalid_argument("ParamStore: unknown parameter " + name);
  }
  entries_[it->second].trainable = trainable;
}

void ParamStore::set_trainable_prefix(const std::string& prefix, bool trainable) {
  bool hit = false;
  for (auto& e : entries_) {
    if (e.name.rfind(prefix, 0) == 0) {
      e.trainable = trainable;
      hit = true;
    }
  }
  if (!hit) {
    throw std::invalid_argument("ParamStore: no parameter under prefix " + prefix);
  }
}

void ParamStore::zero_grads() {
  for (auto& e : entries_) e.tensor->zero_grad();
}

void apply_l2(ParamStore& params, double coeff) {
  if (coeff == 0.0) return;
  for (auto& e : params.entries()) {
    if (!e.l2 || !e.trainable) continue;
    e.tensor->ensure_grad();
    for (std::size_t i = 0; i < e.tensor->numel(); ++i) {
      e.tensor->grad[i] += 2.0 * coeff * e.tensor->data[i];
    }
  }
}

Linear::Linear(ParamStore& ps, const std::string& prefix, std::size_t in,
               std::size_t out, Rng& rng) {
  auto w = Tensor::zeros(Shape{in, out});
  glorot_fill(*w, in, out, rng);
  W = ps.add(prefix + "/W", w, true, true);
  b = ps.add(prefix + "/b", Tensor::zeros(Shape{out}), true, false);
}

TensorPtr Linear::apply(const TensorPtr& x) const {
  return ops::add(ops::vecmat(x, W), b);
}

TensorPtr Linear::apply_rows(const TensorPtr& x) const {
  return ops::add_rowvec(ops::matmul(x, W), b);
}

Mlp::Mlp(ParamStore& ps, const std::string& prefix, std::size_t in,
         const std::vector<std::size_t>& hidden, std::size_t out, double dropout,
         Rng& rng)
    : dropout_rate(dropout) {
  std::size_t cur = in;
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    layers.emplace_back(ps, prefix + "/h" + std::to_string(i), cur, hidden[i], rng);
    slopes.push_back(
        ps.add(prefix + "/a" + std::to_string(i), Tensor::scalar(0.25), true, false));
    cur = hidden[i];
  }
  layers.emplace_back(ps, prefix + "/out", cur, out, rng);
}

TensorPtr Mlp::apply(const TensorPtr& x, bool training, Rng& rng) const {
  TensorPtr h = x;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    h = ops::prelu(layers[i].apply(h), slopes[i]);
    h = ops::dropout(h, dropout_rate, training, rng);
  }
  return layers.back().apply(h);
}

AttentionUnit::AttentionUnit(ParamStore& ps, const std::string& prefix,
                             std::size_t dim_, std::size_t hidden, double dropout,
                             Rng& rng, bool softmax_norm_, bool outer_full_)
    : dim(dim_), softmax_norm(softmax_norm_), outer_full(outer_full_) {
  const std::size_t in = outer_full ? 3 * dim + dim * dim : 4 * dim;
  mlp = Mlp(ps, prefix, in, {hidden}, 1, dropout, rng);
}

TensorPtr AttentionUnit::weight(const TensorPtr& e_hist, const TensorPtr& e_target,
                                bool training, Rng& rng) const {
  TensorPtr interaction = outer_full ? ops::outer_flat(e_hist, e_target)
                                     : ops::mul(e_hist, e_target);
  auto in = ops::concat({e_hist, e_target, interaction, ops::sub(e_hist, e_target)});
  return mlp.apply(in, training, rng);  // shape [1]
}

TensorPtr AttentionUnit::pool(const std::vector<TensorPtr>& history,
                              const TensorPtr& target, bool training,
                              Rng& rng) const {
  if (history.empty()) return Tensor::zeros(Shape{dim});
  std::vector<TensorPtr> weights;
  weights.reserve(history.size());
  for (const auto& e : history) weights.push_back(weight(e, target, training, rng));
  if (softmax_norm) {
    auto w = ops::softmax_vec(ops::concat(weights));
    weights.clear();
    for (std::size_t r = 0; r < history.size(); ++r)
      weights.push_back(ops::elem(w, r));
  }
  std::vector<TensorPtr> terms;
  terms.reserve(history.size());
  for (std::size_t r = 0; r < history.size(); ++r)
    terms.push_back(ops::scale_t(history[r], weights[r]));
  return terms.size() == 1 ? terms[0] : ops::add_n(terms);
}

}  // namespace dmbgn::nn
