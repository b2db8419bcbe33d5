#include "dmbgn/baselines.hpp"

#include <algorithm>

namespace dmbgn {

namespace {

TensorPtr add_table(nn::ParamStore& ps, const std::string& name, std::size_t rows,
                    std::size_t dim, Rng& rng) {
  auto t = Tensor::zeros({rows, dim});
  nn::glorot_fill(*t, rows, dim, rng);
  return ps.add(name, std::move(t));
}

}  // namespace

std::vector<BaselineSample> encode_baseline_samples(const Dataset& ds,
                                                    const FeatureSpace& fs,
                                                    std::size_t history_len) {
  std::vector<BaselineSample> out;
  out.reserve(ds.samples.size());
  for (const auto& ref : ds.samples) {
    const auto& sess = ds.sessions[ref.session_idx];
    const auto& prof = ds.profile_for(sess.user_id);
    BaselineSample s;
    s.age_row = fs.ages.row(prof.age_level);
    s.gender_row = fs.genders.row(prof.gender);
    s.purchase_row = fs.purchase_levels.row(prof.purchase_level);
    s.order_count_z = prof.order_count;
    s.order_amount_z = prof.order_amount;
    s.min_spend_z = ds.min_spend_stats.z(sess.voucher.min_spend);
    s.discount_z = ds.discount_stats.z(sess.voucher.discount_amount);
    s.voucher_row = fs.vouchers.row(sess.voucher.voucher_id);
    s.activity_row = fs.activities.row(sess.voucher.activity_id);
    s.label = sess.label;
    s.key = sess.key();
    const std::size_t take = std::min(history_len, ref.history.size());
    for (std::size_t i = ref.history.size() - take; i < ref.history.size(); ++i) {
      const auto& hv = ds.sessions[ref.history[i]].voucher;
      BaselineSample::HistVoucher h;
      h.voucher_row = fs.vouchers.row(hv.voucher_id);
      h.activity_row = fs.activities.row(hv.activity_id);
      h.min_spend_z = ds.min_spend_stats.z(hv.min_spend);
      h.discount_z = ds.discount_stats.z(hv.discount_amount);
      s.history.push_back(h);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void BaselineModel::save(TensorStore& out, const std::string& section) const {
  save_params(out, params_, section);
  save_vocabs(out, section, fs_);
  if (!config_text_.empty()) out.put_text(section + "config", config_text_);
  out.put_text("kind", name_);
}

LrModel::LrModel(const Dataset& ds, const FeatureSpace& fs, std::uint64_t seed)
    : BaselineModel("lr", fs, encode_baseline_samples(ds, fs, 0)) {
  // Zero init: a linear model starting at logit 0 converges in a few epochs,
  // while random id weights would take many more steps to unlearn.
  Rng init = derive_rng(seed, "init:lr");
  lin_ = nn::Linear(params_, "lin", 4, 1, init);
  lin_.W->data.assign(lin_.W->data.size(), 0.0);
  auto weight_col = [&](const char* name, std::size_t rows) {
    return params_.add(name, Tensor::zeros({rows, 1}));
  };
  age_w_ = weight_col("id_w/age", fs.ages.size());
  gender_w_ = weight_col("id_w/gender", fs.genders.size());
  purchase_w_ = weight_col("id_w/purchase", fs.purchase_levels.size());
  voucher_w_ = weight_col("id_w/voucher", fs.vouchers.size());
  activity_w_ = weight_col("id_w/activity", fs.activities.size());
}

TensorPtr LrModel::prob(std::size_t idx) {
  const auto& s = samples_[idx];
  auto x = Tensor::vec({s.order_count_z, s.order_amount_z, s.min_spend_z, s.discount_z});
  auto ids = ops::add_n({ops::embed_row(age_w_, s.age_row),
                         ops::embed_row(gender_w_, s.gender_row),
                         ops::embed_row(purchase_w_, s.purchase_row),
                         ops::embed_row(voucher_w_, s.voucher_row),
                         ops::embed_row(activity_w_, s.activity_row)});
  auto logit = ops::add(ops::elem(lin_.apply(x), 0), ops::elem(ids, 0));
  return ops::sigmoid(logit);
}

TrainableModel::SampleLoss LrModel::train_forward(std::size_t idx, Rng&) {
  SampleLoss out;
  out.target = ops::bce(prob(idx), samples_[idx].label);
  return out;
}

double LrModel::predict(std::size_t idx) { return prob(idx)->value(); }

DnnModel::DnnModel(const Dataset& ds, const FeatureSpace& fs, const ModelConfig& cfg,
                   std::uint64_t seed)
    : BaselineModel("dnn", fs, encode_baseline_samples(ds, fs, 0)),
      dim_(cfg.emb_dim) {
  config_text_ = model_config_echo(cfg).dump();
  Rng init = derive_rng(seed, "init:dnn");
  age_table_ = add_table(params_, "prof_emb/age", fs.ages.size(), dim_, init);
  gender_table_ = add_table(params_, "prof_emb/gender", fs.genders.size(), dim_, init);
  purchase_table_ =
      add_table(params_, "prof_emb/purchase", fs.purchase_levels.size(), dim_, init);
  voucher_table_ = add_table(params_, "voucher_emb", fs.vouchers.size(), dim_, init);
  activity_table_ =
      add_table(params_, "activity_emb", fs.activities.size(), dim_, init);
  mlp_ = nn::Mlp(params_, "mlp", 4 + 5 * dim_, cfg.mlp_hidden, 1, cfg.dropout, init);
}

TensorPtr DnnModel::prob(std::size_t idx, bool training, Rng& rng) {
  const auto& s = samples_[idx];
  auto x = ops::concat({Tensor::vec({s.order_count_z, s.order_amount_z, s.min_spend_z,
                                     s.discount_z}),
                        ops::embed_row(age_table_, s.age_row),
                        ops::embed_row(gender_table_, s.gender_row),
                        ops::embed_row(purchase_table_, s.purchase_row),
                        ops::embed_row(voucher_table_, s.voucher_row),
                        ops::embed_row(activity_table_, s.activity_row)});
  return ops::sigmoid(ops::elem(mlp_.apply(x, training, rng), 0));
}

TrainableModel::SampleLoss DnnModel::train_forward(std::size_t idx, Rng& dropout_rng) {
  SampleLoss out;
  out.target = ops::bce(prob(idx, true, dropout_rng), samples_[idx].label);
  return out;
}

double DnnModel::predict(std::size_t idx) {
  Rng unused(0);
  return prob(idx, false, unused)->value();
}

DinModel::DinModel(const Dataset& ds, const FeatureSpace& fs, const ModelConfig& cfg,
                   std::uint64_t seed)
    : BaselineModel("din", fs, encode_baseline_samples(ds, fs, cfg.history_len)),
      dim_(cfg.emb_dim) {
  config_text_ = model_config_echo(cfg).dump();
  Rng init = derive_rng(seed, "init:din");
  voucher_table_ = add_table(params_, "voucher_emb", fs.vouchers.size(), dim_, init);
  voucher_features_ = VoucherFeatures(params_, dim_, fs.activities.size(), init);
  age_table_ = add_table(params_, "prof_emb/age", fs.ages.size(), dim_, init);
  gender_table_ = add_table(params_, "prof_emb/gender", fs.genders.size(), dim_, init);
  purchase_table_ =
      add_table(params_, "prof_emb/purchase", fs.purchase_levels.size(), dim_, init);
  attention_ = nn::AttentionUnit(params_, "att", dim_, cfg.attention_hidden,
                                 cfg.dropout, init, cfg.att_softmax,
                                 cfg.att_interaction == AttInteraction::outer);
  mlp_ = nn::Mlp(params_, "mlp", 4 + 6 * dim_, cfg.mlp_hidden, 1, cfg.dropout, init);
}

TensorPtr DinModel::prob(std::size_t idx, bool training, Rng& rng) {
  const auto& s = samples_[idx];
  auto target = voucher_features_.encode(voucher_table_, s.voucher_row, s.activity_row,
                                         s.min_spend_z, s.discount_z);
  std::vector<TensorPtr> history;
  history.reserve(s.history.size());
  for (const auto& h : s.history) {
    history.push_back(voucher_features_.encode(voucher_table_, h.voucher_row,
                                               h.activity_row, h.min_spend_z,
                                               h.discount_z));
  }
  auto pooled = attention_.pool(history, target, training, rng);
  auto x = ops::concat({Tensor::vec({s.order_count_z, s.order_amount_z, s.min_spend_z,
                                     s.discount_z}),
                        ops::embed_row(age_table_, s.age_row),
                        ops::embed_row(gender_table_, s.gender_row),
                        ops::embed_row(purchase_table_, s.purchase_row),
                        ops::embed_row(voucher_table_, s.voucher_row),
                        ops::embed_row(voucher_features_.activity_table(), s.activity_row),
                        pooled});
  return ops::sigmoid(ops::elem(mlp_.apply(x, training, rng), 0));
}

TrainableModel::SampleLoss DinModel::train_forward(std::size_t idx, Rng& dropout_rng) {
  SampleLoss out;
  out.target = ops::bce(prob(idx, true, dropout_rng), samples_[idx].label);
  return out;
}

double DinModel::predict(std::size_t idx) {
  Rng unused(0);
  return prob(idx, false, unused)->value();
}

}  // namespace dmbgn
