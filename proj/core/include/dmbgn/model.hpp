#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmbgn/checkpoint.hpp"
#include "dmbgn/config.hpp"
#include "dmbgn/data.hpp"
#include "dmbgn/embeddings.hpp"
#include "dmbgn/nn.hpp"
#include "dmbgn/train.hpp"

namespace dmbgn {

/// How the graph model relates to a pre-training checkpoint.
enum class DmbgnVariant {
  scratch,     // no checkpoint, everything randomly initialized
  avgpool,     // frozen pre-trained item features, mean-pooled, no graph stack
  pretrained,  // checkpoint loaded, graph-convolution weights frozen
  finetune,    // checkpoint loaded, everything trainable
};
const char* variant_name(DmbgnVariant v);

enum class EdgeDirection { chrono, reversed };
enum class AttInteraction { elementwise, outer };

struct ModelConfig {
  std::size_t emb_dim = 16;
  int gnn_layers = 1;
  double topk_ratio = 0.9;
  int voucher_links = 6;        // Z: item -> voucher edges per zone
  std::size_t history_len = 6;  // R: history graphs per sample
  double dropout = 0.5;
  std::vector<std::size_t> mlp_hidden = {128, 64};
  std::size_t attention_hidden = 64;
  bool att_softmax = false;
  AttInteraction att_interaction = AttInteraction::elementwise;
  EdgeDirection edge_dir = EdgeDirection::chrono;
  bool use_post_zones = true;
  DmbgnVariant variant = DmbgnVariant::scratch;
  bool load_gnn = true;
  bool load_mlp = true;

  /// Reads the keys above from a flat config; unknown variants and malformed
  /// lists throw DataError.
  static ModelConfig from_config(const Config& cfg);
  void validate() const;
};

/// A session graph reduced to table rows and adjacency, ready for repeated
/// forward passes. Node 0 is the voucher; item node i sits at row i+1.
struct EncodedUvg {
  struct ItemNode {
    int zone = 0;  // Zone enum value
    bool is_ord = false;
    std::size_t item_row = 0, cat_row = 0, brand_row = 0, shop_row = 0;
  };
  std::vector<ItemNode> items;
  std::vector<std::vector<int>> in_nbrs;  // per node, message sources
  std::size_t voucher_row = 0;
  bool scratch_voucher = false;  // target graphs use the from-scratch table
  std::size_t activity_row = 0;
  double min_spend_z = 0.0, discount_z = 0.0;
  int label = 0;
};

/// Row/adjacency encoding of a built graph. Nodes are re-sorted into
/// (zone, timestamp, item_id) order so any storage permutation of the same
/// session yields an identical encoding. Post zones are dropped when
/// use_post is false.
EncodedUvg encode_uvg(const Uvg& g, const FeatureSpace& fs, const ZStats& ms_stats,
                      const ZStats& da_stats, EdgeDirection dir, bool use_post,
                      bool scratch_voucher);

/// One graph convolution: row i becomes sigmoid(F[i]*self_w + sum over
/// in-neighbors j of F[j]*nbr_w). Every node, the voucher included, updates.
TensorPtr gnn_layer(const TensorPtr& features, const TensorPtr& self_w,
                    const TensorPtr& nbr_w,
                    const std::vector<std::vector<int>>& in_nbrs);

/// Dense voucher description: id embedding plus an encoding of the voucher
/// schema (activity id, normalized min-spend and discount). The id table is
/// supplied per call so historical and target vouchers can come from
/// different tables.
class VoucherFeatures {
 public:
  static constexpr std::size_t kNumericDim = 4;  // width per numeric projection

  VoucherFeatures() = default;
  VoucherFeatures(nn::ParamStore& ps, std::size_t dim, std::size_t n_activities,
                  Rng& rng);

  TensorPtr encode(const TensorPtr& voucher_table, std::size_t voucher_row,
                   std::size_t activity_row, double min_spend_z,
                   double discount_z) const;

  const TensorPtr& activity_table() const { return activity_table_; }

 private:
  TensorPtr activity_table_, proj_ms_, proj_da_;
  nn::Linear enc_;
};

/// The shared graph stack: initial node features, graph convolution,
/// importance pooling, per-zone readout, behavior MLP. Produces the behavior
/// embedding, the voucher-node embedding, and their compatibility score.
class UvgEncoder {
 public:
  struct Encoded {
    TensorPtr behavior;  // [d]
    TensorPtr voucher;   // [d]
    TensorPtr joint;     // [2d] concat(behavior, voucher)
    TensorPtr score;     // scalar sigmoid(dot)
  };

  UvgEncoder() = default;
  UvgEncoder(nn::ParamStore& ps, const ModelConfig& cfg, const FeatureSpace& fs,
             Rng& rng);

  Encoded apply(const EncodedUvg& g, bool training, Rng& rng) const;
  /// Pooling-only path: behavior = mean of initial item features, voucher =
  /// its initial feature; the graph stack is bypassed entirely.
  Encoded apply_avgpool(const EncodedUvg& g) const;

  TensorPtr item_features(const EncodedUvg& g) const;  // [m,d] initial features
  TensorPtr voucher_feature(const EncodedUvg& g) const;

  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_ = 0;
  int layers_ = 1;
  double topk_ratio_ = 0.9;
  TensorPtr item_atc_, item_ord_;
  TensorPtr side_cat_, side_brand_, side_shop_;
  TensorPtr voucher_hist_, voucher_scratch_;
  VoucherFeatures voucher_features_;
  std::vector<TensorPtr> self_w_, nbr_w_;
  TensorPtr topk_p_;
  nn::Mlp behavior_mlp_;
};

/// Graph model over voucher sessions: encodes the target session and up to R
/// historical redeemed sessions, pools history with an attention unit keyed
/// by the target embedding, and scores redemption probability with an MLP
/// head over profile, history, and target features.
class DmbgnModel : public TrainableModel {
 public:
  DmbgnModel(const Dataset& ds, const FeatureSpace& fs, const ModelConfig& cfg,
             std::uint64_t seed, std::string name = "dmbgn");

  /// Applies the variant's checkpoint policy: verifies vocabularies, loads
  /// the requested parameter groups, then freezes per variant.
  void load_pretrained(const TensorStore& ckpt);

  const std::string& name() const override { return name_; }
  nn::ParamStore& params() override { return params_; }
  std::size_t sample_count() const override { return samples_.size(); }
  int label(std::size_t idx) const override { return samples_[idx].label; }
  const std::string& sample_key(std::size_t idx) const override {
    return samples_[idx].key;
  }
  SampleLoss train_forward(std::size_t idx, Rng& dropout_rng) override;
  double predict(std::size_t idx) override;
  bool has_aux(std::size_t idx) const override {
    return !samples_[idx].history_sessions.empty();
  }

  /// Truncated history length, for error analysis by history depth.
  std::size_t history_len(std::size_t idx) const {
    return samples_[idx].history_sessions.size();
  }
  const ModelConfig& config() const { return cfg_; }
  const FeatureSpace& feature_space() const { return fs_; }

  /// Parameters plus vocabulary texts under the given section prefix.
  void save(TensorStore& out, const std::string& section) const;

 private:
  struct Sample {
    std::size_t age_row = 0, gender_row = 0, purchase_row = 0;
    double order_count_z = 0.0, order_amount_z = 0.0;
    EncodedUvg target;
    std::vector<std::size_t> history_sessions;  // oldest first, size <= R
    int label = 0;
    std::string key;
  };

  struct Forward {
    TensorPtr prob;
    std::vector<TensorPtr> history_scores;
  };
  Forward forward(const Sample& s, bool training, Rng& rng);
  UvgEncoder::Encoded encode_graph(const EncodedUvg& g, bool training, Rng& rng);

  std::string name_;
  ModelConfig cfg_;
  FeatureSpace fs_;
  nn::ParamStore params_;
  UvgEncoder encoder_;
  TensorPtr age_table_, gender_table_, purchase_table_;
  nn::AttentionUnit attention_;
  nn::Mlp head_;
  std::vector<EncodedUvg> history_graphs_;  // indexed by session, lazily built
  std::vector<char> history_built_;
  std::vector<Sample> samples_;
};

/// Writes vocabulary texts under section (e.g. "dmbgn/vocab/items") and
/// verifies them on load.
void save_vocabs(TensorStore& out, const std::string& section, const FeatureSpace& fs);
void verify_vocabs(const TensorStore& ckpt, const std::string& section,
                   const FeatureSpace& fs);

/// Inverse of ModelConfig::from_config; every key round-trips.
Config model_config_echo(const ModelConfig& m);

/// Rebuilds the id spaces a checkpoint was trained with from its vocabulary
/// texts; ids unseen at training time then fall into the shared slot.
FeatureSpace feature_space_from_ckpt(const TensorStore& ckpt,
                                     const std::string& section);

}  // namespace dmbgn
