#include "dmbgn/syngen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "dmbgn/common.hpp"
#include "dmbgn/csv.hpp"
#include "dmbgn/data.hpp"
#include "dmbgn/metrics.hpp"

namespace dmbgn {

SyntheticConfig SyntheticConfig::from_config(const Config& cfg) {
  SyntheticConfig c;
  auto size = [&](const char* key, std::size_t dflt) {
    return static_cast<std::size_t>(
        cfg.get_int(key, static_cast<std::int64_t>(dflt)));
  };
  c.users = size("users", c.users);
  c.sessions_per_user =
      static_cast<int>(cfg.get_int("sessions_per_user", c.sessions_per_user));
  c.themes = size("themes", c.themes);
  c.vouchers = size("vouchers", c.vouchers);
  c.items_per_theme = size("items_per_theme", c.items_per_theme);
  c.brands = size("brands", c.brands);
  c.shops = size("shops", c.shops);
  c.base_rate = cfg.get_double("base_rate", c.base_rate);
  c.noise_floor = cfg.get_double("noise_floor", c.noise_floor);
  c.w_affinity = cfg.get_double("w_affinity", c.w_affinity);
  c.w_budget_fit = cfg.get_double("w_budget_fit", c.w_budget_fit);
  c.w_discount = cfg.get_double("w_discount", c.w_discount);
  c.w_match = cfg.get_double("w_match", c.w_match);
  c.w_history = cfg.get_double("w_history", c.w_history);
  c.mean_pre_atc = cfg.get_double("mean_pre_atc", c.mean_pre_atc);
  c.mean_pre_ord = cfg.get_double("mean_pre_ord", c.mean_pre_ord);
  c.mean_post_atc = cfg.get_double("mean_post_atc", c.mean_post_atc);
  c.mean_post_ord = cfg.get_double("mean_post_ord", c.mean_post_ord);
  c.post_boost = cfg.get_double("post_boost", c.post_boost);
  c.validity = cfg.get_int("validity", c.validity);
  c.gap = cfg.get_int("gap", c.gap);
  c.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  c.validate();
  return c;
}

void SyntheticConfig::validate() const {
  if (users == 0 || sessions_per_user < 1)
    throw DataError("need at least one user and one session per user");
  if (themes == 0 || vouchers == 0 || items_per_theme == 0 || brands == 0 ||
      shops == 0)
    throw DataError("catalog sizes must be positive");
  if (!(noise_floor >= 0.0 && noise_floor < 0.5))
    throw DataError("noise_floor must lie in [0, 0.5)");
  if (!(base_rate > noise_floor && base_rate < 1.0 - noise_floor))
    throw DataError("base_rate " + std::to_string(base_rate) +
                    " is outside the achievable range (" +
                    std::to_string(noise_floor) + ", " +
                    std::to_string(1.0 - noise_floor) + ")");
  if (mean_pre_atc < 0 || mean_pre_ord < 0 || mean_post_atc < 0 ||
      mean_post_ord < 0 || post_boost < 0)
    throw DataError("event volume parameters must be nonnegative");
  if (validity < 600) throw DataError("validity must be at least 600 seconds");
  if (gap < 0) throw DataError("gap must be nonnegative");
}

namespace {

constexpr std::int64_t kEpochBase = 1600000000;
constexpr double kMedianBudget = 150.0;
constexpr double kBudgetSigma = 0.6;
constexpr double kFitWidth = 0.5;

double u01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(Rng& rng, std::size_t n) {
  return std::min<std::size_t>(n - 1, static_cast<std::size_t>(u01(rng) * n));
}

std::string pad_id(char prefix, std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, width, value);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct VoucherSpec {
  std::size_t theme = 0;
  double min_spend = 0.0, discount = 0.0;
};

struct UserTraits {
  double budget = 0.0;
  std::vector<double> affinity_cum;  // cumulative category affinity
  double habit = 0.0;       // habitual-redeemer trait in [0, 1]
  double match_incl = 0.0;  // cart-matches-voucher trait in [0, 1]
};

std::size_t draw_category(const UserTraits& t, Rng& rng) {
  double u = u01(rng) * t.affinity_cum.back();
  return static_cast<std::size_t>(
      std::upper_bound(t.affinity_cum.begin(), t.affinity_cum.end(), u) -
      t.affinity_cum.begin());
}

// Quintile bucket of ln(budget) under the generating normal.
int purchase_bucket(double budget) {
  static const double z[4] = {-0.8416, -0.2533, 0.2533, 0.8416};
  double x = (std::log(budget) - std::log(kMedianBudget)) / kBudgetSigma;
  int b = 0;
  while (b < 4 && x > z[b]) ++b;
  return b + 1;
}

}  // namespace

SyntheticSummary generate_dataset(const SyntheticConfig& cfg,
                                  const std::string& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);

  // Voucher catalog: theme cycles, spend and discount tiers drawn once.
  static const double kSpendTiers[] = {50, 100, 150, 200, 300, 400};
  static const double kDiscountFracs[] = {0.15, 0.25, 0.35, 0.45};
  std::vector<VoucherSpec> vouchers(cfg.vouchers);
  {
    Rng rng = derive_rng(cfg.seed, "vouchers");
    for (std::size_t v = 0; v < cfg.vouchers; ++v) {
      vouchers[v].theme = v % cfg.themes;
      vouchers[v].min_spend = kSpendTiers[pick(rng, 6)];
      vouchers[v].discount = vouchers[v].min_spend * kDiscountFracs[pick(rng, 4)];
    }
  }

  const std::size_t n_users = cfg.users;
  const std::size_t per_user = static_cast<std::size_t>(cfg.sessions_per_user);
  const std::size_t n_sessions = n_users * per_user;

  std::vector<UserTraits> traits(n_users);
  std::vector<std::size_t> session_voucher(n_sessions);
  std::vector<std::string> profile_rows_oc(n_users), profile_rows_oa(n_users);
  std::vector<int> profile_age(n_users), profile_gender(n_users),
      profile_purchase(n_users);

  // Raw probability components, one entry per session. The match component
  // is a count taken from the generated events, so events come first.
  enum { kAff, kFit, kDisc, kMatch, kHist, kComponents };
  std::vector<std::vector<double>> comp(kComponents,
                                        std::vector<double>(n_sessions));

  for (std::size_t u = 0; u < n_users; ++u) {
    const std::string uid = pad_id('u', u, 5);
    Rng rng = derive_rng(cfg.seed, "user:" + uid);
    UserTraits& t = traits[u];

    std::normal_distribution<double> stdnorm(0.0, 1.0);
    t.budget = kMedianBudget * std::exp(kBudgetSigma * stdnorm(rng));
    std::gamma_distribution<double> gamma(0.7, 1.0);
    t.affinity_cum.resize(cfg.themes);
    double total = 0.0;
    for (std::size_t k = 0; k < cfg.themes; ++k) {
      total += gamma(rng) + 1e-9;
      t.affinity_cum[k] = total;
    }
    t.habit = u01(rng);
    t.match_incl = u01(rng);

    profile_age[u] = 1 + static_cast<int>(pick(rng, 7));
    profile_gender[u] = static_cast<int>(pick(rng, 3));
    profile_purchase[u] = purchase_bucket(t.budget);
    // Order count is deliberately uninformative noise; order amount tracks
    // the budget so spend capacity is visible to feature-based models.
    profile_rows_oc[u] = fmt(std::exp(std::log(20.0) + 0.5 * stdnorm(rng)));
    profile_rows_oa[u] = fmt(t.budget * std::exp(0.3 * stdnorm(rng)));

    Rng srng = derive_rng(cfg.seed, "sessions:" + uid);
    for (std::size_t k = 0; k < per_user; ++k) {
      const std::size_t s = u * per_user + k;
      const std::size_t v = pick(srng, cfg.vouchers);
      session_voucher[s] = v;
      const VoucherSpec& vs = vouchers[v];

      double aff_lo = vs.theme == 0 ? 0.0 : t.affinity_cum[vs.theme - 1];
      comp[kAff][s] = (t.affinity_cum[vs.theme] - aff_lo) / t.affinity_cum.back();
      double d = std::log(t.budget / vs.min_spend);
      comp[kFit][s] = std::exp(-d * d / (2.0 * kFitWidth * kFitWidth));
      comp[kDisc][s] = vs.discount / vs.min_spend;
      comp[kHist][s] = t.habit;
    }
  }

  // Behavior events. Post-collection add-to-carts lean toward the session
  // voucher's theme with the user's match inclination, so past post-collection
  // cart composition is evidence for the trait that drives future labels. The
  // number that land on the theme becomes the match component. The habitual
  // trait only scales post volume.
  std::vector<std::vector<std::string>> event_rows;
  for (std::size_t u = 0; u < n_users; ++u) {
    const std::string uid = pad_id('u', u, 5);
    const UserTraits& t = traits[u];
    Rng rng = derive_rng(cfg.seed, "events:" + uid);
    const double boost = 1.0 + cfg.post_boost * t.habit;

    auto emit = [&](std::size_t cat, Action action, std::int64_t ts) {
      std::size_t idx = cat + pick(rng, cfg.items_per_theme) * cfg.themes;
      event_rows.push_back({uid, pad_id('i', idx, 5),
                            action == Action::atc ? "atc" : "ord",
                            std::to_string(ts), pad_id('c', cat, 2),
                            pad_id('b', idx % cfg.brands, 3),
                            pad_id('s', idx % cfg.shops, 3),
                            std::to_string(1 + static_cast<int>(idx % 5))});
    };

    for (std::size_t k = 0; k < per_user; ++k) {
      const std::size_t s = u * per_user + k;
      const std::size_t theme = vouchers[session_voucher[s]].theme;
      const std::int64_t collect =
          kEpochBase + static_cast<std::int64_t>(k) * (cfg.validity + cfg.gap);
      auto pre_ts = [&] {
        return collect - 60 -
               static_cast<std::int64_t>(u01(rng) * (86400.0 - 120.0));
      };
      auto post_ts = [&] {
        return collect + 60 +
               static_cast<std::int64_t>(u01(rng) *
                                         static_cast<double>(cfg.validity - 120));
      };
      std::poisson_distribution<int> pre_atc(cfg.mean_pre_atc),
          pre_ord(cfg.mean_pre_ord), post_atc(cfg.mean_post_atc * boost),
          post_ord(cfg.mean_post_ord * boost);

      for (int n = pre_atc(rng); n > 0; --n)
        emit(draw_category(t, rng), Action::atc, pre_ts());
      for (int n = pre_ord(rng); n > 0; --n)
        emit(draw_category(t, rng), Action::ord, pre_ts());
      int matches = 0;
      for (int n = post_atc(rng); n > 0; --n) {
        std::size_t cat =
            u01(rng) < t.match_incl ? theme : draw_category(t, rng);
        matches += cat == theme ? 1 : 0;
        emit(cat, Action::atc, post_ts());
      }
      comp[kMatch][s] = static_cast<double>(matches);
      for (int n = post_ord(rng); n > 0; --n)
        emit(draw_category(t, rng), Action::ord, post_ts());
    }
  }

  // Population-normalize each component, then solve the intercept so the
  // mean probability hits base_rate exactly.
  const double weights[kComponents] = {cfg.w_affinity, cfg.w_budget_fit,
                                       cfg.w_discount, cfg.w_match,
                                       cfg.w_history};
  std::vector<double> logits(n_sessions, 0.0);
  for (int c = 0; c < kComponents; ++c) {
    double mean = 0.0;
    for (double x : comp[c]) mean += x;
    mean /= static_cast<double>(n_sessions);
    double var = 0.0;
    for (double x : comp[c]) var += (x - mean) * (x - mean);
    double sd = std::sqrt(var / static_cast<double>(n_sessions));
    if (sd < 1e-12) continue;
    for (std::size_t s = 0; s < n_sessions; ++s)
      logits[s] += weights[c] * (comp[c][s] - mean) / sd;
  }

  const double q = cfg.noise_floor;
  const double target_mean = (cfg.base_rate - q) / (1.0 - 2.0 * q);
  auto mean_prob = [&](double b0) {
    double m = 0.0;
    for (double g : logits) m += 1.0 / (1.0 + std::exp(-(g + b0)));
    return m / static_cast<double>(n_sessions);
  };
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mean_prob(mid) < target_mean ? lo : hi) = mid;
  }
  const double bias = 0.5 * (lo + hi);

  std::vector<double> p_true(n_sessions);
  for (std::size_t s = 0; s < n_sessions; ++s)
    p_true[s] = q + (1.0 - 2.0 * q) / (1.0 + std::exp(-(logits[s] + bias)));

  // Labels, session keys, and per-session rows.
  std::vector<int> labels(n_sessions);
  std::vector<std::vector<std::string>> session_rows, truth_rows;
  session_rows.reserve(n_sessions);
  truth_rows.reserve(n_sessions);
  std::size_t redeemed = 0;
  for (std::size_t u = 0; u < n_users; ++u) {
    const std::string uid = pad_id('u', u, 5);
    for (std::size_t k = 0; k < per_user; ++k) {
      const std::size_t s = u * per_user + k;
      const std::int64_t collect =
          kEpochBase + static_cast<std::int64_t>(k) * (cfg.validity + cfg.gap);
      const std::string vid = pad_id('v', session_voucher[s], 4);
      const std::string key = uid + ":" + vid + ":" + std::to_string(collect);
      Rng lrng = derive_rng(cfg.seed, "label:" + key);
      labels[s] = u01(lrng) < p_true[s] ? 1 : 0;
      redeemed += static_cast<std::size_t>(labels[s]);
      session_rows.push_back({uid, vid, std::to_string(collect),
                              std::to_string(collect + cfg.validity),
                              std::to_string(labels[s])});
      truth_rows.push_back({key, fmt(p_true[s])});
    }
  }

  static const char* kGenders[] = {"m", "f", "u"};
  std::vector<std::vector<std::string>> voucher_rows, profile_rows;
  for (std::size_t v = 0; v < cfg.vouchers; ++v)
    voucher_rows.push_back({pad_id('v', v, 4), pad_id('a', vouchers[v].theme, 2),
                            fmt(vouchers[v].min_spend), fmt(vouchers[v].discount)});
  for (std::size_t u = 0; u < n_users; ++u)
    profile_rows.push_back(
        {pad_id('u', u, 5), "age" + std::to_string(profile_age[u]),
         kGenders[profile_gender[u]], "p" + std::to_string(profile_purchase[u]),
         profile_rows_oc[u], profile_rows_oa[u]});

  namespace fs = std::filesystem;
  write_csv((fs::path(out_dir) / "events.csv").string(),
            {"user_id", "item_id", "action", "timestamp", "category_id",
             "brand_id", "shop_id", "price_level"},
            event_rows);
  write_csv((fs::path(out_dir) / "vouchers.csv").string(),
            {"voucher_id", "activity_id", "min_spend", "discount_amount"},
            voucher_rows);
  write_csv((fs::path(out_dir) / "sessions.csv").string(),
            {"user_id", "voucher_id", "collect_ts", "end_ts", "label"},
            session_rows);
  write_csv((fs::path(out_dir) / "profiles.csv").string(),
            {"user_id", "age_level", "gender", "purchase_level", "order_count",
             "order_amount"},
            profile_rows);
  write_csv((fs::path(out_dir) / "ground_truth.csv").string(),
            {"session_key", "p_true"}, truth_rows);

  SyntheticSummary sum;
  sum.users = n_users;
  sum.sessions = n_sessions;
  sum.events = event_rows.size();
  sum.empirical_rate =
      static_cast<double>(redeemed) / static_cast<double>(n_sessions);
  sum.best_auc = metrics::auc(p_true, labels);
  sum.bias = bias;

  nlohmann::ordered_json manifest;
  manifest["users"] = sum.users;
  manifest["sessions"] = sum.sessions;
  manifest["events"] = sum.events;
  manifest["empirical_rate"] = sum.empirical_rate;
  manifest["best_auc"] = sum.best_auc;
  manifest["bias"] = sum.bias;
  nlohmann::ordered_json echo;
  echo["users"] = cfg.users;
  echo["sessions_per_user"] = cfg.sessions_per_user;
  echo["themes"] = cfg.themes;
  echo["vouchers"] = cfg.vouchers;
  echo["items_per_theme"] = cfg.items_per_theme;
  echo["brands"] = cfg.brands;
  echo["shops"] = cfg.shops;
  echo["base_rate"] = cfg.base_rate;
  echo["noise_floor"] = cfg.noise_floor;
  echo["w_affinity"] = cfg.w_affinity;
  echo["w_budget_fit"] = cfg.w_budget_fit;
  echo["w_discount"] = cfg.w_discount;
  echo["w_match"] = cfg.w_match;
  echo["w_history"] = cfg.w_history;
  echo["mean_pre_atc"] = cfg.mean_pre_atc;
  echo["mean_pre_ord"] = cfg.mean_pre_ord;
  echo["mean_post_atc"] = cfg.mean_post_atc;
  echo["mean_post_ord"] = cfg.mean_post_ord;
  echo["post_boost"] = cfg.post_boost;
  echo["validity"] = cfg.validity;
  echo["gap"] = cfg.gap;
  echo["seed"] = cfg.seed;
  manifest["config"] = std::move(echo);
  std::ofstream mf(fs::path(out_dir) / "gen_manifest.json",
                   std::ios::binary | std::ios::trunc);
  mf << manifest.dump(2) << "\n";
  if (!mf) throw DataError("cannot write gen_manifest.json in " + out_dir);
  return sum;
}

}  // namespace dmbgn
