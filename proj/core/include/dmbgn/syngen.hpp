#pragma once

#include <cstdint>
#include <string>

#include "dmbgn/config.hpp"

namespace dmbgn {

/// Synthetic event-log generator with known redemption probabilities.
///
/// Each user carries latent traits: a spending budget, a category-affinity
/// profile, a habitual-redeemer trait, and a match inclination that tilts
/// post-collection add-to-carts toward the collected voucher's theme. Because
/// the inclination is a user trait, the post-zone cart mix of past sessions is
/// evidence for it, which makes the match component learnable only by models
/// that read item-level graph content. Redemption probability is a logistic
/// over five population-normalized components, each observable through a
/// different feature channel:
///   affinity    user's taste for the voucher's theme   -> browsing categories
///   budget_fit  |log(budget / min_spend)| bump         -> purchase level, order amount
///   discount    discount / min_spend                   -> voucher schema
///   match       post-collection add-to-carts that hit
///               the voucher's theme (count)            -> post-zone item mix
///   history     habitual-redeemer trait                -> redeemed-session count, post volume
/// Events are generated before probabilities so the match count feeds the
/// label without the label ever feeding the events. Labels are drawn from
/// the resulting probability, so the best reachable ranking quality is the
/// score of the true probabilities themselves; the generator reports it
/// alongside the realized redemption rate.
struct SyntheticConfig {
  std::size_t users = 5000;
  int sessions_per_user = 10;
  std::size_t themes = 12;  // category count; one activity id per theme
  std::size_t vouchers = 96;
  std::size_t items_per_theme = 40;
  std::size_t brands = 30;
  std::size_t shops = 20;

  double base_rate = 0.2;    // target mean redemption probability
  double noise_floor = 0.05; // probabilities squashed into [q, 1-q]

  double w_affinity = 1.0;
  double w_budget_fit = 0.8;
  double w_discount = 0.4;
  double w_match = 1.2;
  double w_history = 1.0;

  double mean_pre_atc = 8.0, mean_pre_ord = 3.0;
  double mean_post_atc = 6.0, mean_post_ord = 2.5;
  double post_boost = 0.6;  // post volume scales by 1 + post_boost * trait

  std::int64_t validity = 259200;  // collection-to-expiry window, seconds
  std::int64_t gap = 86400;        // idle time between sessions

  std::uint64_t seed = 0;

  static SyntheticConfig from_config(const Config& cfg);
  void validate() const;
};

struct SyntheticSummary {
  std::size_t users = 0, sessions = 0, events = 0;
  double empirical_rate = 0.0;
  double best_auc = 0.0;  // ranking quality of the true probabilities
  double bias = 0.0;      // logistic intercept solved for base_rate
};

/// Writes events.csv, vouchers.csv, sessions.csv, profiles.csv,
/// ground_truth.csv (session_key, p_true), and gen_manifest.json into
/// out_dir. Rerunning with the same config reproduces the files byte for
/// byte.
SyntheticSummary generate_dataset(const SyntheticConfig& cfg,
                                  const std::string& out_dir);

}  // namespace dmbgn
