#include "dmbgn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmbgn {

namespace {

std::vector<std::size_t> parse_size_list(const std::string& text, const char* key) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string part = text.substr(pos, comma == std::string::npos
                                                  ? std::string::npos
                                                  : comma - pos);
    try {
      std::size_t used = 0;
      const long v = std::stol(part, &used);
      if (used != part.size() || v <= 0) throw std::invalid_argument(part);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw DataError(std::string(key) + ": expected comma-separated positive "
                      "integers, got '" + text + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

DmbgnVariant parse_variant(const std::string& s) {
  if (s == "scratch") return DmbgnVariant::scratch;
  if (s == "avgpool") return DmbgnVariant::avgpool;
  if (s == "pretrained") return DmbgnVariant::pretrained;
  if (s == "finetune") return DmbgnVariant::finetune;
  throw DataError("variant must be scratch|avgpool|pretrained|finetune, got '" + s + "'");
}

TensorPtr add_table(nn::ParamStore& ps, const std::string& name, std::size_t rows,
                    std::size_t dim, Rng& rng) {
  auto t = Tensor::zeros({rows, dim});
  nn::glorot_fill(*t, rows, dim, rng);
  return ps.add(name, std::move(t));
}

TensorPtr add_vec(nn::ParamStore& ps, const std::string& name, std::size_t n, Rng& rng) {
  auto t = Tensor::zeros({n});
  nn::glorot_fill(*t, 1, n, rng);
  return ps.add(name, std::move(t));
}

}  // namespace

const char* variant_name(DmbgnVariant v) {
  switch (v) {
    case DmbgnVariant::scratch: return "scratch";
    case DmbgnVariant::avgpool: return "avgpool";
    case DmbgnVariant::pretrained: return "pretrained";
    case DmbgnVariant::finetune: return "finetune";
  }
  return "?";
}

ModelConfig ModelConfig::from_config(const Config& cfg) {
  ModelConfig m;
  m.emb_dim = static_cast<std::size_t>(cfg.get_int("emb_dim", 16));
  m.gnn_layers = static_cast<int>(cfg.get_int("gnn_layers", 1));
  m.topk_ratio = cfg.get_double("topk_ratio", 0.9);
  m.voucher_links = static_cast<int>(cfg.get_int("Z", 6));
  m.history_len = static_cast<std::size_t>(cfg.get_int("R", 6));
  m.dropout = cfg.get_double("dropout", 0.5);
  m.mlp_hidden = parse_size_list(cfg.get_str("mlp_hidden", "128,64"), "mlp_hidden");
  m.attention_hidden = static_cast<std::size_t>(cfg.get_int("attention_hidden", 64));
  m.att_softmax = cfg.get_bool("att_softmax", false);
  const std::string outer = cfg.get_str("att_outer", "elem");
  if (outer == "elem") {
    m.att_interaction = AttInteraction::elementwise;
  } else if (outer == "full") {
    m.att_interaction = AttInteraction::outer;
  } else {
    throw DataError("att_outer must be elem or full, got '" + outer + "'");
  }
  const std::string dir = cfg.get_str("edge_dir", "chrono");
  if (dir == "chrono") {
    m.edge_dir = EdgeDirection::chrono;
  } else if (dir == "reversed") {
    m.edge_dir = EdgeDirection::reversed;
  } else {
    throw DataError("edge_dir must be chrono or reversed, got '" + dir + "'");
  }
  m.use_post_zones = cfg.get_bool("use_post", true);
  m.variant = parse_variant(cfg.get_str("variant", "scratch"));
  m.load_gnn = cfg.get_bool("load_gnn", true);
  m.load_mlp = cfg.get_bool("load_mlp", true);
  m.validate();
  return m;
}

void ModelConfig::validate() const {
  if (emb_dim == 0) throw DataError("emb_dim must be positive");
  if (gnn_layers < 1) throw DataError("gnn_layers must be >= 1");
  if (!(topk_ratio > 0.0 && topk_ratio <= 1.0)) {
    throw DataError("topk_ratio must be in (0, 1], got " + std::to_string(topk_ratio));
  }
  if (voucher_links < 1) throw DataError("Z must be >= 1");
  if (history_len < 1) throw DataError("R must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw DataError("dropout must be in [0, 1), got " + std::to_string(dropout));
  }
  if (mlp_hidden.empty()) throw DataError("mlp_hidden must name at least one layer");
}

EncodedUvg encode_uvg(const Uvg& g, const FeatureSpace& fs, const ZStats& ms_stats,
                      const ZStats& da_stats, EdgeDirection dir, bool use_post,
                      bool scratch_voucher) {
  std::vector<int> kept;
  for (int i = 1; i < static_cast<int>(g.nodes.size()); ++i) {
    if (!use_post && !zone_is_pre(g.nodes[static_cast<std::size_t>(i)].zone)) continue;
    kept.push_back(i);
  }
  // Canonical node order makes the encoding independent of storage order.
  std::stable_sort(kept.begin(), kept.end(), [&](int a, int b) {
    const auto& na = g.nodes[static_cast<std::size_t>(a)];
    const auto& nb = g.nodes[static_cast<std::size_t>(b)];
    if (na.zone != nb.zone) return static_cast<int>(na.zone) < static_cast<int>(nb.zone);
    if (na.item.timestamp != nb.item.timestamp) return na.item.timestamp < nb.item.timestamp;
    return na.item.item_id < nb.item.item_id;
  });

  std::vector<int> remap(g.nodes.size(), -1);
  remap[0] = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    remap[static_cast<std::size_t>(kept[i])] = static_cast<int>(i) + 1;
  }

  EncodedUvg e;
  e.items.reserve(kept.size());
  for (int orig : kept) {
    const auto& n = g.nodes[static_cast<std::size_t>(orig)];
    EncodedUvg::ItemNode it;
    it.zone = static_cast<int>(n.zone);
    it.is_ord = zone_action(n.zone) == Action::ord;
    it.item_row = fs.items.row(n.item.item_id);
    it.cat_row = fs.categories.row(n.item.category_id);
    it.brand_row = fs.brands.row(n.item.brand_id);
    it.shop_row = fs.shops.row(n.item.shop_id);
    e.items.push_back(it);
  }
  e.in_nbrs.assign(kept.size() + 1, {});
  for (const auto& edge : g.edges) {
    const int src = remap[static_cast<std::size_t>(edge.src)];
    const int dst = remap[static_cast<std::size_t>(edge.dst)];
    if (src < 0 || dst < 0) continue;
    if (dir == EdgeDirection::chrono) {
      e.in_nbrs[static_cast<std::size_t>(dst)].push_back(src);
    } else {
      e.in_nbrs[static_cast<std::size_t>(src)].push_back(dst);
    }
  }
  for (auto& nbrs : e.in_nbrs) std::sort(nbrs.begin(), nbrs.end());

  e.voucher_row = fs.vouchers.row(g.voucher.voucher_id);
  e.scratch_voucher = scratch_voucher;
  e.activity_row = fs.activities.row(g.voucher.activity_id);
  e.min_spend_z = ms_stats.z(g.voucher.min_spend);
  e.discount_z = da_stats.z(g.voucher.discount_amount);
  e.label = g.label;
  return e;
}

VoucherFeatures::VoucherFeatures(nn::ParamStore& ps, std::size_t dim,
                                 std::size_t n_activities, Rng& rng) {
  activity_table_ = add_table(ps, "activity_emb", n_activities, dim, rng);
  proj_ms_ = add_vec(ps, "venc/proj_ms", kNumericDim, rng);
  proj_da_ = add_vec(ps, "venc/proj_da", kNumericDim, rng);
  enc_ = nn::Linear(ps, "venc", dim + 2 * kNumericDim, dim, rng);
}

TensorPtr VoucherFeatures::encode(const TensorPtr& voucher_table, std::size_t voucher_row,
                                  std::size_t activity_row, double min_spend_z,
                                  double discount_z) const {
  auto schema = ops::concat({ops::embed_row(activity_table_, activity_row),
                             ops::scale(proj_ms_, min_spend_z),
                             ops::scale(proj_da_, discount_z)});
  return ops::add(ops::embed_row(voucher_table, voucher_row), enc_.apply(schema));
}

UvgEncoder::UvgEncoder(nn::ParamStore& ps, const ModelConfig& cfg,
                       const FeatureSpace& fs, Rng& rng)
    : dim_(cfg.emb_dim), layers_(cfg.gnn_layers), topk_ratio_(cfg.topk_ratio) {
  item_atc_ = add_table(ps, "item_emb/atc", fs.items.size(), dim_, rng);
  item_ord_ = add_table(ps, "item_emb/ord", fs.items.size(), dim_, rng);
  side_cat_ = add_table(ps, "side_emb/category_id", fs.categories.size(), dim_, rng);
  side_brand_ = add_table(ps, "side_emb/brand_id", fs.brands.size(), dim_, rng);
  side_shop_ = add_table(ps, "side_emb/shop_id", fs.shops.size(), dim_, rng);
  voucher_hist_ = add_table(ps, "voucher_emb", fs.vouchers.size(), dim_, rng);
  voucher_scratch_ = add_table(ps, "voucher_scratch", fs.vouchers.size(), dim_, rng);
  voucher_features_ = VoucherFeatures(ps, dim_, fs.activities.size(), rng);
  for (int l = 0; l < layers_; ++l) {
    auto w1 = Tensor::zeros({dim_, dim_});
    nn::glorot_fill(*w1, dim_, dim_, rng);
    self_w_.push_back(ps.add("gnn/W1_l" + std::to_string(l), std::move(w1), true, true));
    auto w2 = Tensor::zeros({dim_, dim_});
    nn::glorot_fill(*w2, dim_, dim_, rng);
    nbr_w_.push_back(ps.add("gnn/W2_l" + std::to_string(l), std::move(w2), true, true));
  }
  topk_p_ = add_vec(ps, "gnn/topk_p", dim_, rng);
  behavior_mlp_ = nn::Mlp(ps, "bmlp", kZoneCount * 2 * dim_, cfg.mlp_hidden, dim_,
                          cfg.dropout, rng);
}

TensorPtr gnn_layer(const TensorPtr& features, const TensorPtr& self_w,
                    const TensorPtr& nbr_w,
                    const std::vector<std::vector<int>>& in_nbrs) {
  auto self_part = ops::matmul(features, self_w);
  auto nbr_part = ops::neighbor_sum(ops::matmul(features, nbr_w), in_nbrs);
  return ops::sigmoid(ops::add(self_part, nbr_part));
}

TensorPtr UvgEncoder::item_features(const EncodedUvg& g) const {
  std::vector<TensorPtr> tables = {item_atc_, item_ord_, side_cat_, side_brand_,
                                   side_shop_};
  std::vector<std::vector<ops::RowPick>> picks;
  picks.reserve(g.items.size());
  for (const auto& it : g.items) {
    picks.push_back({{it.is_ord ? 1 : 0, it.item_row},
                     {2, it.cat_row},
                     {3, it.brand_row},
                     {4, it.shop_row}});
  }
  return ops::gather_sum_rows(tables, picks, 0.25);
}

TensorPtr UvgEncoder::voucher_feature(const EncodedUvg& g) const {
  const TensorPtr& table = g.scratch_voucher ? voucher_scratch_ : voucher_hist_;
  return voucher_features_.encode(table, g.voucher_row, g.activity_row,
                                  g.min_spend_z, g.discount_z);
}

UvgEncoder::Encoded UvgEncoder::apply(const EncodedUvg& g, bool training,
                                      Rng& rng) const {
  const std::size_t m = g.items.size();
  TensorPtr f = voucher_feature(g);
  TensorPtr features =
      m == 0 ? ops::stack_rows({f}) : ops::prepend_row(f, item_features(g));
  for (int l = 0; l < layers_; ++l) {
    features = gnn_layer(features, self_w_[static_cast<std::size_t>(l)],
                         nbr_w_[static_cast<std::size_t>(l)], g.in_nbrs);
  }

  TensorPtr readout;
  if (m == 0) {
    readout = Tensor::zeros({kZoneCount * 2 * dim_});
  } else {
    std::vector<std::size_t> item_rows(m);
    std::iota(item_rows.begin(), item_rows.end(), 1);
    auto h_items = ops::gather_rows(features, std::move(item_rows));
    auto scores = ops::divide_t(ops::matvec(h_items, topk_p_), ops::l2norm(topk_p_));
    auto gated = ops::rows_scale(h_items, ops::tanh(scores));

    // Keep the ceil(ratio*m) highest-scoring items; ties keep the earlier node.
    std::size_t k = static_cast<std::size_t>(
        std::ceil(topk_ratio_ * static_cast<double>(m)));
    k = std::min(std::max<std::size_t>(k, 1), m);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores->data[a] != scores->data[b]) return scores->data[a] > scores->data[b];
      return a < b;
    });
    std::vector<std::size_t> chosen(order.begin(),
                                    order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());

    std::vector<std::vector<std::size_t>> zone_rows(kZoneCount);
    for (std::size_t i : chosen) {
      zone_rows[static_cast<std::size_t>(g.items[i].zone)].push_back(i);
    }
    std::vector<TensorPtr> blocks;
    blocks.reserve(kZoneCount);
    for (int z = 0; z < kZoneCount; ++z) {
      auto& rows = zone_rows[static_cast<std::size_t>(z)];
      if (rows.empty()) {
        blocks.push_back(Tensor::zeros({2 * dim_}));
      } else {
        auto zr = ops::gather_rows(gated, rows);
        blocks.push_back(ops::concat({ops::mean_rows(zr), ops::max_rows(zr)}));
      }
    }
    readout = ops::concat(blocks);
  }

  Encoded out;
  out.behavior = behavior_mlp_.apply(readout, training, rng);
  out.voucher = ops::take_row(features, 0);
  out.joint = ops::concat({out.behavior, out.voucher});
  out.score = ops::sigmoid(ops::dot(out.behavior, out.voucher));
  return out;
}

UvgEncoder::Encoded UvgEncoder::apply_avgpool(const EncodedUvg& g) const {
  Encoded out;
  out.behavior = g.items.empty() ? Tensor::zeros({dim_})
                                 : ops::mean_rows(item_features(g));
  out.voucher = voucher_feature(g);
  out.joint = ops::concat({out.behavior, out.voucher});
  out.score = ops::sigmoid(ops::dot(out.behavior, out.voucher));
  return out;
}

DmbgnModel::DmbgnModel(const Dataset& ds, const FeatureSpace& fs, const ModelConfig& cfg,
                       std::uint64_t seed, std::string name)
    : name_(std::move(name)), cfg_(cfg), fs_(fs) {
  cfg_.validate();
  Rng init = derive_rng(seed, "init:" + name_);
  encoder_ = UvgEncoder(params_, cfg_, fs_, init);
  age_table_ = add_table(params_, "prof_emb/age", fs_.ages.size(), cfg_.emb_dim, init);
  gender_table_ =
      add_table(params_, "prof_emb/gender", fs_.genders.size(), cfg_.emb_dim, init);
  purchase_table_ = add_table(params_, "prof_emb/purchase", fs_.purchase_levels.size(),
                              cfg_.emb_dim, init);
  attention_ = nn::AttentionUnit(params_, "att", 2 * cfg_.emb_dim, cfg_.attention_hidden,
                                 cfg_.dropout, init, cfg_.att_softmax,
                                 cfg_.att_interaction == AttInteraction::outer);
  const std::size_t profile_dim = 3 * cfg_.emb_dim + 2;
  const std::size_t head_in = profile_dim + 2 * cfg_.emb_dim + 3 + 2 * cfg_.emb_dim;
  head_ = nn::Mlp(params_, "head", head_in, cfg_.mlp_hidden, 1, cfg_.dropout, init);

  history_graphs_.resize(ds.sessions.size());
  history_built_.assign(ds.sessions.size(), 0);
  samples_.reserve(ds.samples.size());
  for (const auto& ref : ds.samples) {
    const auto& sess = ds.sessions[ref.session_idx];
    const auto& prof = ds.profile_for(sess.user_id);
    Sample s;
    s.age_row = fs_.ages.row(prof.age_level);
    s.gender_row = fs_.genders.row(prof.gender);
    s.purchase_row = fs_.purchase_levels.row(prof.purchase_level);
    s.order_count_z = prof.order_count;
    s.order_amount_z = prof.order_amount;
    s.label = sess.label;
    s.key = sess.key();
    s.target = encode_uvg(build_uvg(sess, UvgMode::target, cfg_.voucher_links), fs_,
                          ds.min_spend_stats, ds.discount_stats, cfg_.edge_dir,
                          cfg_.use_post_zones, /*scratch_voucher=*/true);
    const std::size_t take = std::min<std::size_t>(cfg_.history_len, ref.history.size());
    for (std::size_t i = ref.history.size() - take; i < ref.history.size(); ++i) {
      const std::size_t h = ref.history[i];
      if (!history_built_[h]) {
        history_graphs_[h] = encode_uvg(
            build_uvg(ds.sessions[h], UvgMode::historical, cfg_.voucher_links), fs_,
            ds.min_spend_stats, ds.discount_stats, cfg_.edge_dir, cfg_.use_post_zones,
            /*scratch_voucher=*/false);
        history_built_[h] = 1;
      }
      s.history_sessions.push_back(h);
    }
    samples_.push_back(std::move(s));
  }
}

UvgEncoder::Encoded DmbgnModel::encode_graph(const EncodedUvg& g, bool training,
                                             Rng& rng) {
  if (cfg_.variant == DmbgnVariant::avgpool) return encoder_.apply_avgpool(g);
  return encoder_.apply(g, training, rng);
}

DmbgnModel::Forward DmbgnModel::forward(const Sample& s, bool training, Rng& rng) {
  Forward fw;
  auto target = encode_graph(s.target, training, rng);
  std::vector<TensorPtr> history;
  history.reserve(s.history_sessions.size());
  for (std::size_t h : s.history_sessions) {
    auto enc = encode_graph(history_graphs_[h], training, rng);
    history.push_back(enc.joint);
    fw.history_scores.push_back(enc.score);
  }
  auto pooled = attention_.pool(history, target.joint, training, rng);

  const double depth = static_cast<double>(s.history_sessions.size()) /
                       static_cast<double>(cfg_.history_len);
  TensorPtr score_summary;
  if (fw.history_scores.empty()) {
    score_summary = Tensor::vec({0.0, 0.0, depth});
  } else {
    auto stacked = ops::stack_scalars(fw.history_scores);
    score_summary = ops::stack_scalars(
        {ops::mean_all(stacked), ops::max_all(stacked), Tensor::scalar(depth)});
  }

  auto profile = ops::concat({ops::embed_row(age_table_, s.age_row),
                              ops::embed_row(gender_table_, s.gender_row),
                              ops::embed_row(purchase_table_, s.purchase_row),
                              Tensor::vec({s.order_count_z, s.order_amount_z})});
  auto head_in = ops::concat({profile, pooled, score_summary, target.joint});
  auto logit = head_.apply(head_in, training, rng);
  fw.prob = ops::sigmoid(ops::elem(logit, 0));
  return fw;
}

TrainableModel::SampleLoss DmbgnModel::train_forward(std::size_t idx, Rng& dropout_rng) {
  const auto& s = samples_[idx];
  auto fw = forward(s, /*training=*/true, dropout_rng);
  SampleLoss out;
  out.target = ops::bce(fw.prob, s.label);
  if (!fw.history_scores.empty()) {
    std::vector<TensorPtr> terms;
    terms.reserve(fw.history_scores.size());
    for (const auto& sc : fw.history_scores) {
      terms.push_back(ops::neg_log(sc));
      out.history_scores.push_back(sc->value());
    }
    out.aux = ops::scale(ops::add_n(terms), 1.0 / static_cast<double>(terms.size()));
  }
  return out;
}

double DmbgnModel::predict(std::size_t idx) {
  Rng unused(0);
  auto fw = forward(samples_[idx], /*training=*/false, unused);
  return fw.prob->value();
}

void DmbgnModel::load_pretrained(const TensorStore& ckpt) {
  if (cfg_.variant == DmbgnVariant::scratch) {
    throw DataError("variant scratch does not take a checkpoint");
  }
  verify_vocabs(ckpt, "", fs_);
  std::vector<std::string> groups = {"item_emb/", "side_emb/", "voucher_emb",
                                     "activity_emb", "venc/"};
  if (cfg_.variant != DmbgnVariant::avgpool) {
    if (cfg_.load_gnn) groups.push_back("gnn/");
    if (cfg_.load_mlp) groups.push_back("bmlp/");
  }
  for (const auto& g : groups) {
    if (load_params_matching(ckpt, params_, "", {g}) == 0) {
      throw DataError("checkpoint has no tensors under '" + g + "'");
    }
  }
  switch (cfg_.variant) {
    case DmbgnVariant::pretrained:
      params_.set_trainable_prefix("gnn/", false);
      break;
    case DmbgnVariant::avgpool:
      params_.set_trainable_prefix("item_emb/", false);
      params_.set_trainable_prefix("side_emb/", false);
      break;
    default:
      break;
  }
}

void DmbgnModel::save(TensorStore& out, const std::string& section) const {
  save_params(out, params_, section);
  save_vocabs(out, section, fs_);
  out.put_text(section + "config", model_config_echo(cfg_).dump());
  out.put_text("kind", "dmbgn");
}

void save_vocabs(TensorStore& out, const std::string& section, const FeatureSpace& fs) {
  out.put_text(section + "vocab/items", fs.items.serialize());
  out.put_text(section + "vocab/categories", fs.categories.serialize());
  out.put_text(section + "vocab/brands", fs.brands.serialize());
  out.put_text(section + "vocab/shops", fs.shops.serialize());
  out.put_text(section + "vocab/vouchers", fs.vouchers.serialize());
  out.put_text(section + "vocab/activities", fs.activities.serialize());
  out.put_text(section + "vocab/ages", fs.ages.serialize());
  out.put_text(section + "vocab/genders", fs.genders.serialize());
  out.put_text(section + "vocab/purchase_levels", fs.purchase_levels.serialize());
}

void verify_vocabs(const TensorStore& ckpt, const std::string& section,
                   const FeatureSpace& fs) {
  const std::vector<std::pair<std::string, const Vocab*>> checks = {
      {"items", &fs.items},           {"categories", &fs.categories},
      {"brands", &fs.brands},         {"shops", &fs.shops},
      {"vouchers", &fs.vouchers},     {"activities", &fs.activities},
      {"ages", &fs.ages},             {"genders", &fs.genders},
      {"purchase_levels", &fs.purchase_levels}};
  for (const auto& [name, vocab] : checks) {
    const std::string key = section + "vocab/" + name;
    if (!ckpt.has_text(key)) continue;
    if (!(Vocab::deserialize(ckpt.get_text(key)) == *vocab)) {
      throw DataError("checkpoint vocabulary '" + name +
                      "' does not match the dataset");
    }
  }
}

Config model_config_echo(const ModelConfig& m) {
  Config c;
  c.set_int("emb_dim", static_cast<std::int64_t>(m.emb_dim));
  c.set_int("gnn_layers", m.gnn_layers);
  c.set_double("topk_ratio", m.topk_ratio);
  c.set_int("Z", m.voucher_links);
  c.set_int("R", static_cast<std::int64_t>(m.history_len));
  c.set_double("dropout", m.dropout);
  std::string hidden;
  for (std::size_t h : m.mlp_hidden) {
    if (!hidden.empty()) hidden += ",";
    hidden += std::to_string(h);
  }
  c.set("mlp_hidden", hidden);
  c.set_int("attention_hidden", static_cast<std::int64_t>(m.attention_hidden));
  c.set("att_softmax", m.att_softmax ? "true" : "false");
  c.set("att_outer", m.att_interaction == AttInteraction::outer ? "full" : "elem");
  c.set("edge_dir", m.edge_dir == EdgeDirection::reversed ? "reversed" : "chrono");
  c.set("use_post", m.use_post_zones ? "true" : "false");
  c.set("variant", variant_name(m.variant));
  c.set("load_gnn", m.load_gnn ? "true" : "false");
  c.set("load_mlp", m.load_mlp ? "true" : "false");
  return c;
}

FeatureSpace feature_space_from_ckpt(const TensorStore& ckpt,
                                     const std::string& section) {
  auto read = [&](const char* name) {
    const std::string key = section + "vocab/" + name;
    if (!ckpt.has_text(key))
      throw DataError("checkpoint is missing vocabulary '" + std::string(name) + "'");
    return Vocab::deserialize(ckpt.get_text(key));
  };
  FeatureSpace fs;
  fs.items = read("items");
  fs.categories = read("categories");
  fs.brands = read("brands");
  fs.shops = read("shops");
  fs.vouchers = read("vouchers");
  fs.activities = read("activities");
  fs.ages = read("ages");
  fs.genders = read("genders");
  fs.purchase_levels = read("purchase_levels");
  return fs;
}

}  // namespace dmbgn
