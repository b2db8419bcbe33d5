#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dmbgn/ops.hpp"
#include "dmbgn/tensor.hpp"

namespace dmbgn::nn {

/// Uniform fill in +-sqrt(6/(fan_in+fan_out)).
void glorot_fill(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

/// Named parameter registry. Iteration order is insertion order so optimizer
/// state and checkpoints line up deterministically across runs.
class ParamStore {
 public:
  struct Entry {
    std::string name;
    TensorPtr tensor;
    bool trainable = true;
    bool l2 = false;  // weight matrices only; never biases, slopes, embeddings
  };

  /// Registers a tensor; the same name twice is a wiring bug and throws.
  TensorPtr add(const std::string& name, TensorPtr t, bool trainable = true,
                bool l2 = false);
  bool has(const std::string& name) const;
  TensorPtr get(const std::string& name) const;
  void set_trainable(const std::string& name, bool trainable);
  /// Flips every entry whose name starts with prefix; unknown prefix throws.
  void set_trainable_prefix(const std::string& prefix, bool trainable);

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry>& entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }

  void zero_grads();

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

/// grad += 2*coeff*W for every L2-flagged entry; the penalty enters training
/// through gradients only, so logged losses stay comparable across configs.
void apply_l2(ParamStore& params, double coeff);

/// y = x.W + b with W [in,out] glorot-initialized, b zeros.
struct Linear {
  TensorPtr W, b;

  Linear() = default;
  Linear(ParamStore& ps, const std::string& prefix, std::size_t in,
         std::size_t out, Rng& rng);

  TensorPtr apply(const TensorPtr& x) const;       // [in] -> [out]
  TensorPtr apply_rows(const TensorPtr& x) const;  // [n,in] -> [n,out]
};

/// MLP with PReLU hidden activations (learned scalar slope per layer, init
/// 0.25), inverted dropout after each hidden activation, linear output.
struct Mlp {
  std::vector<Linear> layers;
  std::vector<TensorPtr> slopes;
  double dropout_rate = 0.0;

  Mlp() = default;
  Mlp(ParamStore& ps, const std::string& prefix, std::size_t in,
      const std::vector<std::size_t>& hidden, std::size_t out, double dropout,
      Rng& rng);

  TensorPtr apply(const TensorPtr& x, bool training, Rng& rng) const;
};

/// Feed-forward scoring unit for (historical, target) embedding pairs.
/// Input is concat(e_r, e_T, interaction, e_r - e_T) where the interaction
/// is elementwise product by default or the flattened outer product when
/// outer_full is set. Weights are unnormalized unless softmax_norm.
struct AttentionUnit {
  Mlp mlp;
  std::size_t dim = 0;
  bool softmax_norm = false;
  bool outer_full = false;

  AttentionUnit() = default;
  AttentionUnit(ParamStore& ps, const std::string& prefix, std::size_t dim,
                std::size_t hidden, double dropout, Rng& rng,
                bool softmax_norm = false, bool outer_full = false);

  /// Unnormalized scalar weight for one pair.
  TensorPtr weight(const TensorPtr& e_hist, const TensorPtr& e_target,
                   bool training, Rng& rng) const;

  /// Weighted sum over the history; empty history -> zero vector.
  TensorPtr pool(const std::vector<TensorPtr>& history, const TensorPtr& target,
                 bool training, Rng& rng) const;
};

}  // namespace dmbgn::nn
