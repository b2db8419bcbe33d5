#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dmbgn/checkpoint.hpp"
#include "dmbgn/config.hpp"
#include "dmbgn/data.hpp"
#include "dmbgn/embeddings.hpp"
#include "dmbgn/model.hpp"
#include "dmbgn/train.hpp"

namespace dmbgn {

struct SgnsConfig {
  std::size_t dim = 16;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double lr = 0.025;
  std::uint64_t seed = 0;

  static SgnsConfig from_config(const Config& cfg);
};

/// Item and side-information tables produced by sequence pre-training.
/// Row 0 of each table is the untouched out-of-vocabulary slot.
struct ItemTables {
  TensorPtr item_atc, item_ord;  // per-action id tables [V,d]
  TensorPtr side_cat, side_brand, side_shop;
};

/// Skip-gram with negative sampling over per-user chronological item
/// sequences, run per action. A center item is represented by the average
/// of its id vector and its three side-information vectors, so the side
/// tables train jointly and are shared across actions.
ItemTables train_item_embeddings(const Dataset& ds, const FeatureSpace& fs,
                                 const SgnsConfig& cfg);

/// Writes the tables plus their vocabularies as an item checkpoint.
void save_item_checkpoint(TensorStore& out, const ItemTables& tables,
                          const FeatureSpace& fs);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

/// Compatibility pre-training of the graph stack: every session becomes a
/// historical-form graph and sigmoid(behavior . voucher) is fit to the
/// redemption label. Item and side tables come frozen from the item
/// checkpoint; graph weights, behavior MLP, and voucher-side parameters
/// train. Saving produces the checkpoint the main task loads.
class VoucherPretrainModel final : public TrainableModel {
 public:
  VoucherPretrainModel(const Dataset& ds, const FeatureSpace& fs,
                       const ModelConfig& cfg, const TensorStore& item_ckpt,
                       std::uint64_t seed);

  const std::string& name() const override { return name_; }
  nn::ParamStore& params() override { return params_; }
  std::size_t sample_count() const override { return graphs_.size(); }
  int label(std::size_t idx) const override { return graphs_[idx].label; }
  const std::string& sample_key(std::size_t idx) const override { return keys_[idx]; }
  SampleLoss train_forward(std::size_t idx, Rng& dropout_rng) override;
  double predict(std::size_t idx) override;

  /// Eval-mode behavior embedding of one session graph.
  std::vector<double> behavior_embedding(std::size_t idx);

  void save(TensorStore& out) const;

 private:
  std::string name_ = "voucher-pretrain";
  ModelConfig cfg_;
  FeatureSpace fs_;
  nn::ParamStore params_;
  UvgEncoder encoder_;
  std::vector<EncodedUvg> graphs_;
  std::vector<std::string> keys_;
};

}  // namespace dmbgn
