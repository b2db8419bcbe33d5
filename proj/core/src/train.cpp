#include "dmbgn/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "dmbgn/adam.hpp"
#include "dmbgn/data.hpp"
#include "dmbgn/metrics.hpp"
#include "dmbgn/ops.hpp"

namespace dmbgn {

void split_indices(TrainableModel& model, double test_frac,
                   std::vector<std::size_t>& train_idx,
                   std::vector<std::size_t>& test_idx) {
  train_idx.clear();
  test_idx.clear();
  for (std::size_t i = 0; i < model.sample_count(); ++i) {
    auto& side = is_test_session(model.sample_key(i), test_frac) ? test_idx : train_idx;
    side.push_back(i);
  }
}

namespace {

struct EvalOut {
  double auc = 0.0;
  double logloss = 0.0;
};

EvalOut evaluate(TrainableModel& model, const std::vector<std::size_t>& idx) {
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(idx.size());
  labels.reserve(idx.size());
  for (std::size_t i : idx) {
    scores.push_back(model.predict(i));
    labels.push_back(model.label(i));
  }
  return {metrics::auc(scores, labels), metrics::logloss(scores, labels)};
}

}  // namespace

TrainResult train_model(TrainableModel& model, const TrainLoopConfig& cfg,
                        const std::string& log_path) {
  if (cfg.epochs < 1) throw DataError("epochs must be >= 1");
  if (cfg.batch_size < 1) throw DataError("batch_size must be >= 1");
  if (cfg.alpha < 0.0) throw DataError("alpha must be >= 0");
  if (!(cfg.test_frac > 0.0 && cfg.test_frac < 1.0)) {
    throw DataError("test_frac must be in (0, 1)");
  }

  std::vector<std::size_t> train_idx, test_idx;
  split_indices(model, cfg.test_frac, train_idx, test_idx);
  if (train_idx.empty() || test_idx.empty()) {
    throw DataError("split produced an empty side: " +
                    std::to_string(train_idx.size()) + " train / " +
                    std::to_string(test_idx.size()) + " test");
  }

  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::trunc);
    if (!log) throw DataError("cannot open train log '" + log_path + "'");
  }

  Adam adam(AdamConfig{cfg.lr, 0.9, 0.999, 1e-8});
  Rng dropout_rng = derive_rng(cfg.seed, "dropout");

  TrainResult result;
  std::vector<std::string> test_keys;
  test_keys.reserve(test_idx.size());
  for (std::size_t i : test_idx) test_keys.push_back(model.sample_key(i));
  result.split_hash = split_hash_from_keys(std::move(test_keys));
  result.train_count = train_idx.size();
  result.test_count = test_idx.size();

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng = derive_rng(cfg.seed, "shuffle:" + std::to_string(epoch));
    std::shuffle(train_idx.begin(), train_idx.end(), shuffle_rng);

    double loss_sum = 0.0;
    std::size_t batches = 0;
    double score_sum = 0.0;
    std::size_t score_count = 0;

    for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(train_idx.size(), start + cfg.batch_size);
      const double b = static_cast<double>(end - start);
      std::size_t b_aux = 0;
      for (std::size_t i = start; i < end; ++i) {
        if (model.has_aux(train_idx[i])) ++b_aux;
      }

      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        auto sl = model.train_forward(train_idx[i], dropout_rng);
        TensorPtr total = ops::scale(sl.target, 1.0 / b);
        if (sl.aux && cfg.alpha > 0.0) {
          total = ops::add(total,
                           ops::scale(sl.aux, cfg.alpha / static_cast<double>(b_aux)));
        }
        backward(total);
        batch_loss += total->value();
        for (double s : sl.history_scores) {
          score_sum += s;
          ++score_count;
        }
      }
      if (!std::isfinite(batch_loss)) {
        throw NumericError("non-finite training loss in epoch " +
                           std::to_string(epoch));
      }
      nn::apply_l2(model.params(), cfg.l2);
      adam.step(model.params());
      model.params().zero_grads();
      loss_sum += batch_loss;
      ++batches;
    }

    EpochLog el;
    el.epoch = epoch;
    el.train_loss = loss_sum / static_cast<double>(batches);
    el.history_score_mean =
        score_count == 0 ? 0.0 : score_sum / static_cast<double>(score_count);
    const EvalOut ev = evaluate(model, test_idx);
    el.test_auc = ev.auc;
    el.test_logloss = ev.logloss;
    result.epochs.push_back(el);

    if (log.is_open()) {
      nlohmann::ordered_json train_line{{"epoch", epoch},
                                        {"split", "train"},
                                        {"loss", el.train_loss},
                                        {"history_score_mean", el.history_score_mean}};
      nlohmann::ordered_json test_line{{"epoch", epoch},
                                       {"split", "test"},
                                       {"auc", el.test_auc},
                                       {"logloss", el.test_logloss}};
      log << train_line.dump() << "\n" << test_line.dump() << "\n";
      log.flush();
    }
  }

  result.test_auc = result.epochs.back().test_auc;
  result.test_logloss = result.epochs.back().test_logloss;
  return result;
}

}  // namespace dmbgn
