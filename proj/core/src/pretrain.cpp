#include "dmbgn/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "dmbgn/common.hpp"
#include "dmbgn/ops.hpp"

namespace dmbgn {

SgnsConfig SgnsConfig::from_config(const Config& cfg) {
  SgnsConfig out;
  out.dim = static_cast<std::size_t>(
      cfg.get_int("emb_dim", static_cast<std::int64_t>(out.dim)));
  out.window = static_cast<int>(cfg.get_int("window", out.window));
  out.negatives = static_cast<int>(cfg.get_int("negatives", out.negatives));
  out.epochs = static_cast<int>(cfg.get_int("epochs", out.epochs));
  out.lr = cfg.get_double("lr", out.lr);
  out.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  if (out.dim == 0) throw DataError("emb_dim must be positive");
  if (out.window < 1) throw DataError("window must be at least 1");
  if (out.negatives < 1) throw DataError("negatives must be at least 1");
  if (out.epochs < 1) throw DataError("epochs must be at least 1");
  if (!(out.lr > 0.0)) throw DataError("lr must be positive");
  return out;
}

namespace {

struct Token {
  std::size_t item, cat, brand, shop;
};

// One chronological sequence per (user, action); user order follows the
// sorted event layout so runs are reproducible.
std::vector<std::vector<Token>> build_corpora(const Dataset& ds,
                                              const FeatureSpace& fs, Action action) {
  std::vector<std::vector<Token>> corpora;
  for (const auto& [user, span] : ds.user_event_span) {
    std::vector<Token> seq;
    for (std::size_t i = span.first; i < span.second; ++i) {
      const Event& e = ds.events[i];
      if (e.action != action) continue;
      seq.push_back({fs.items.row(e.item_id), fs.categories.row(e.category_id),
                     fs.brands.row(e.brand_id), fs.shops.row(e.shop_id)});
    }
    if (seq.size() >= 2) corpora.push_back(std::move(seq));
  }
  return corpora;
}

double u01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Cumulative table over count^0.75; zero-count rows are unreachable.
struct NegativeSampler {
  std::vector<double> cum;

  explicit NegativeSampler(const std::vector<std::size_t>& counts) {
    cum.resize(counts.size());
    double total = 0.0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
      if (counts[r] > 0) total += std::pow(static_cast<double>(counts[r]), 0.75);
      cum[r] = total;
    }
    if (total <= 0.0) throw DataError("empty corpus for negative sampling");
  }

  std::size_t draw(Rng& rng) const {
    double u = u01(rng) * cum.back();
    return static_cast<std::size_t>(
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
  }
};

TensorPtr make_input_table(std::size_t rows, std::size_t dim, Rng& rng) {
  auto t = Tensor::zeros({rows, dim});
  double bound = 0.5 / static_cast<double>(dim);
  for (double& v : t->data) v = (u01(rng) * 2.0 - 1.0) * bound;
  return t;
}

double* row_ptr(const TensorPtr& t, std::size_t row) {
  return t->data.data() + row * t->cols();
}

}  // namespace

ItemTables train_item_embeddings(const Dataset& ds, const FeatureSpace& fs,
                                 const SgnsConfig& cfg) {
  const std::size_t d = cfg.dim;
  Rng init = derive_rng(cfg.seed, "sgns-init");
  ItemTables t;
  t.item_atc = make_input_table(fs.items.size(), d, init);
  t.item_ord = make_input_table(fs.items.size(), d, init);
  t.side_cat = make_input_table(fs.categories.size(), d, init);
  t.side_brand = make_input_table(fs.brands.size(), d, init);
  t.side_shop = make_input_table(fs.shops.size(), d, init);

  Rng rng = derive_rng(cfg.seed, "sgns");
  std::vector<double> v(d), neu1e(d);
  for (Action action : {Action::atc, Action::ord}) {
    auto corpora = build_corpora(ds, fs, action);
    if (corpora.empty()) continue;
    TensorPtr input = action == Action::atc ? t.item_atc : t.item_ord;
    std::vector<double> ctx(fs.items.size() * d, 0.0);

    std::vector<std::size_t> counts(fs.items.size(), 0);
    for (const auto& seq : corpora)
      for (const Token& tok : seq) ++counts[tok.item];
    NegativeSampler sampler(counts);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (const auto& seq : corpora) {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(seq.size());
        for (std::ptrdiff_t i = 0; i < n; ++i) {
          const Token& c = seq[static_cast<std::size_t>(i)];
          double* in_rows[4] = {row_ptr(input, c.item), row_ptr(t.side_cat, c.cat),
                                row_ptr(t.side_brand, c.brand),
                                row_ptr(t.side_shop, c.shop)};
          for (std::size_t k = 0; k < d; ++k)
            v[k] = 0.25 * (in_rows[0][k] + in_rows[1][k] + in_rows[2][k] +
                           in_rows[3][k]);

          const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - cfg.window);
          const std::ptrdiff_t hi = std::min(n - 1, i + cfg.window);
          for (std::ptrdiff_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            const std::size_t pos = seq[static_cast<std::size_t>(j)].item;
            std::fill(neu1e.begin(), neu1e.end(), 0.0);
            for (int s = 0; s < cfg.negatives + 1; ++s) {
              std::size_t target;
              double label;
              if (s == 0) {
                target = pos;
                label = 1.0;
              } else {
                target = sampler.draw(rng);
                if (target == pos) continue;
                label = 0.0;
              }
              double* u = ctx.data() + target * d;
              double score = 0.0;
              for (std::size_t k = 0; k < d; ++k) score += v[k] * u[k];
              double g = (label - 1.0 / (1.0 + std::exp(-score))) * cfg.lr;
              for (std::size_t k = 0; k < d; ++k) neu1e[k] += g * u[k];
              for (std::size_t k = 0; k < d; ++k) u[k] += g * v[k];
            }
            // Averaged input: each source row carries a quarter of the pull.
            for (double* row : in_rows)
              for (std::size_t k = 0; k < d; ++k) row[k] += 0.25 * neu1e[k];
          }
        }
      }
    }
  }
  return t;
}

void save_item_checkpoint(TensorStore& out, const ItemTables& tables,
                          const FeatureSpace& fs) {
  out.put("item_emb/atc", tables.item_atc);
  out.put("item_emb/ord", tables.item_ord);
  out.put("side_emb/category_id", tables.side_cat);
  out.put("side_emb/brand_id", tables.side_brand);
  out.put("side_emb/shop_id", tables.side_shop);
  save_vocabs(out, "", fs);
  out.put_text("kind", "items");
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw DataError("cosine requires equal nonzero lengths");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb + 1e-24);
}

VoucherPretrainModel::VoucherPretrainModel(const Dataset& ds, const FeatureSpace& fs,
                                           const ModelConfig& cfg,
                                           const TensorStore& item_ckpt,
                                           std::uint64_t seed)
    : cfg_(cfg), fs_(fs) {
  cfg_.validate();
  Rng init = derive_rng(seed, "init:" + name_);
  encoder_ = UvgEncoder(params_, cfg_, fs_, init);

  verify_vocabs(item_ckpt, "", fs_);
  for (const char* group : {"item_emb/", "side_emb/"}) {
    if (load_params_matching(item_ckpt, params_, "", {group}) == 0)
      throw DataError(std::string("checkpoint has no tensors under '") + group + "'");
  }
  params_.set_trainable_prefix("item_emb/", false);
  params_.set_trainable_prefix("side_emb/", false);
  // The from-scratch voucher table is unused here; freezing it keeps its
  // random bytes identical through training.
  params_.set_trainable("voucher_scratch", false);

  graphs_.reserve(ds.sessions.size());
  keys_.reserve(ds.sessions.size());
  for (const VoucherSession& s : ds.sessions) {
    Uvg g = build_uvg(s, UvgMode::historical, cfg_.voucher_links);
    graphs_.push_back(encode_uvg(g, fs_, ds.min_spend_stats, ds.discount_stats,
                                 cfg_.edge_dir, cfg_.use_post_zones,
                                 /*scratch_voucher=*/false));
    keys_.push_back(s.key());
  }
}

TrainableModel::SampleLoss VoucherPretrainModel::train_forward(std::size_t idx,
                                                               Rng& dropout_rng) {
  auto enc = encoder_.apply(graphs_[idx], true, dropout_rng);
  return {ops::bce(enc.score, graphs_[idx].label), nullptr, {}};
}

double VoucherPretrainModel::predict(std::size_t idx) {
  Rng unused(0);
  return encoder_.apply(graphs_[idx], false, unused).score->value();
}

std::vector<double> VoucherPretrainModel::behavior_embedding(std::size_t idx) {
  Rng unused(0);
  return encoder_.apply(graphs_[idx], false, unused).behavior->data;
}

void VoucherPretrainModel::save(TensorStore& out) const {
  save_params(out, params_, "");
  save_vocabs(out, "", fs_);
  out.put_text("config", model_config_echo(cfg_).dump());
  out.put_text("kind", "voucher-pretrain");
}

}  // namespace dmbgn
