#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmbgn/common.hpp"
#include "dmbgn/nn.hpp"
#include "dmbgn/tensor.hpp"

namespace dmbgn {

/// Anything the optimizer loop can fit: owns parameters and pre-encoded
/// samples, exposes per-sample loss tapes and eval-mode predictions.
class TrainableModel {
 public:
  virtual ~TrainableModel() = default;

  virtual const std::string& name() const = 0;
  virtual nn::ParamStore& params() = 0;
  virtual std::size_t sample_count() const = 0;
  virtual int label(std::size_t idx) const = 0;
  virtual const std::string& sample_key(std::size_t idx) const = 0;

  struct SampleLoss {
    TensorPtr target;                    // scalar loss on the redemption label
    TensorPtr aux;                       // scalar history term, null when absent
    std::vector<double> history_scores;  // raw per-history-graph scores
  };
  /// Builds the tape for one sample in training mode. The rng feeds dropout
  /// and is consumed in sample order within a batch.
  virtual SampleLoss train_forward(std::size_t idx, Rng& dropout_rng) = 0;

  /// True when train_forward will return an auxiliary loss for this sample;
  /// the loop needs the count up front to scale both terms as batch means.
  virtual bool has_aux(std::size_t) const { return false; }

  /// Eval-mode probability; must not touch any rng.
  virtual double predict(std::size_t idx) = 0;
};

struct TrainLoopConfig {
  int epochs = 5;
  std::size_t batch_size = 1024;
  double lr = 1e-3;
  double l2 = 0.1;
  double alpha = 1.0;  // weight of the auxiliary history loss
  double test_frac = 0.2;
  std::uint64_t seed = 0;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double history_score_mean = 0.0;  // over all history graphs seen this epoch
  double test_auc = 0.0;
  double test_logloss = 0.0;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  double test_auc = 0.0;
  double test_logloss = 0.0;
  std::string split_hash;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
};

/// Hash-split of sample indices on their session keys.
void split_indices(TrainableModel& model, double test_frac,
                   std::vector<std::size_t>& train_idx,
                   std::vector<std::size_t>& test_idx);

/// Minibatch training with Adam, per-batch weight decay, and a test-split
/// evaluation after each epoch. When log_path is nonempty, appends one JSON
/// line per split per epoch.
TrainResult train_model(TrainableModel& model, const TrainLoopConfig& cfg,
                        const std::string& log_path = "");

}  // namespace dmbgn
