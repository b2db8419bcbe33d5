#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dmbgn/data.hpp"
#include "dmbgn/embeddings.hpp"
#include "dmbgn/model.hpp"
#include "dmbgn/nn.hpp"
#include "dmbgn/train.hpp"

namespace dmbgn {

/// Shared per-sample encoding for the reference models: profile buckets,
/// normalized dense features, target voucher rows, and (for attention
/// models) the user's previous redeemed vouchers, oldest first.
struct BaselineSample {
  std::size_t age_row = 0, gender_row = 0, purchase_row = 0;
  double order_count_z = 0.0, order_amount_z = 0.0;
  double min_spend_z = 0.0, discount_z = 0.0;
  std::size_t voucher_row = 0, activity_row = 0;
  struct HistVoucher {
    std::size_t voucher_row = 0, activity_row = 0;
    double min_spend_z = 0.0, discount_z = 0.0;
  };
  std::vector<HistVoucher> history;
  int label = 0;
  std::string key;
};

std::vector<BaselineSample> encode_baseline_samples(const Dataset& ds,
                                                    const FeatureSpace& fs,
                                                    std::size_t history_len);

class BaselineModel : public TrainableModel {
 public:
  const std::string& name() const override { return name_; }
  nn::ParamStore& params() override { return params_; }
  std::size_t sample_count() const override { return samples_.size(); }
  int label(std::size_t idx) const override { return samples_[idx].label; }
  const std::string& sample_key(std::size_t idx) const override {
    return samples_[idx].key;
  }
  void save(TensorStore& out, const std::string& section) const;

 protected:
  BaselineModel(std::string name, const FeatureSpace& fs,
                std::vector<BaselineSample> samples)
      : name_(std::move(name)), fs_(fs), samples_(std::move(samples)) {}

  std::string name_;
  FeatureSpace fs_;
  std::string config_text_;  // model-config echo, empty for config-free models
  nn::ParamStore params_;
  std::vector<BaselineSample> samples_;
};

/// Logistic regression on the four dense features.
class LrModel final : public BaselineModel {
 public:
  LrModel(const Dataset& ds, const FeatureSpace& fs, std::uint64_t seed);
  SampleLoss train_forward(std::size_t idx, Rng& dropout_rng) override;
  double predict(std::size_t idx) override;

 private:
  TensorPtr prob(std::size_t idx);
  nn::Linear lin_;
  TensorPtr age_w_, gender_w_, purchase_w_, voucher_w_, activity_w_;
};

/// Embedding MLP over profile and target-voucher ids plus the dense features.
class DnnModel final : public BaselineModel {
 public:
  DnnModel(const Dataset& ds, const FeatureSpace& fs, const ModelConfig& cfg,
           std::uint64_t seed);
  SampleLoss train_forward(std::size_t idx, Rng& dropout_rng) override;
  double predict(std::size_t idx) override;

 private:
  TensorPtr prob(std::size_t idx, bool training, Rng& rng);
  std::size_t dim_ = 0;
  TensorPtr age_table_, gender_table_, purchase_table_, voucher_table_, activity_table_;
  nn::Mlp mlp_;
};

/// The embedding MLP plus attention pooling over the user's previous
/// redeemed vouchers, scored against the target voucher encoding.
class DinModel final : public BaselineModel {
 public:
  DinModel(const Dataset& ds, const FeatureSpace& fs, const ModelConfig& cfg,
           std::uint64_t seed);
  SampleLoss train_forward(std::size_t idx, Rng& dropout_rng) override;
  double predict(std::size_t idx) override;

 private:
  TensorPtr prob(std::size_t idx, bool training, Rng& rng);
  std::size_t dim_ = 0;
  TensorPtr voucher_table_;
  VoucherFeatures voucher_features_;
  TensorPtr age_table_, gender_table_, purchase_table_;
  nn::AttentionUnit attention_;
  nn::Mlp mlp_;
};

}  // namespace dmbgn
