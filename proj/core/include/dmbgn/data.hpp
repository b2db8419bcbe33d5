#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dmbgn {

enum class Action { atc, ord };
const char* action_name(Action a);

struct Event {
  std::string user_id;
  std::string item_id;
  Action action = Action::atc;
  std::int64_t timestamp = 0;
  std::string category_id, brand_id, shop_id;
  int price_level = 0;
};

struct VoucherInfo {
  std::string voucher_id;
  std::string activity_id;
  double min_spend = 0.0;
  double discount_amount = 0.0;
};

struct UserProfile {
  std::string user_id;
  std::string age_level, gender, purchase_level;  // categorical bucket ids
  double order_count = 0.0;   // z-normalized at dataset build
  double order_amount = 0.0;  // z-normalized at dataset build
};

struct BehaviorCaps {
  std::size_t atc = 45;
  std::size_t ord = 20;
};

/// One user-voucher interaction with its surrounding behavior, split by
/// phase (before/after collection) and action.
struct VoucherSession {
  std::string user_id;
  VoucherInfo voucher;
  std::int64_t collect_ts = 0;
  std::int64_t end_ts = 0;  // redemption time or expiry
  std::vector<Event> pre_atc, pre_ord, post_atc, post_ord;
  int label = 0;

  std::string key() const;  // user:voucher:collect_ts
};

// Zone enumeration order fixes the concatenation order of zone embeddings.
enum class Zone { atc_pre = 0, ord_pre = 1, atc_post = 2, ord_post = 3 };
inline constexpr int kZoneCount = 4;
const char* zone_name(Zone z);
Action zone_action(Zone z);
bool zone_is_pre(Zone z);

enum class EdgeKind { chain, to_voucher };

struct UvgNode {
  bool is_voucher = false;
  Zone zone = Zone::atc_pre;  // item nodes only
  Event item;                 // item nodes only
};

struct UvgEdge {
  int src = 0;
  int dst = 0;
  EdgeKind kind = EdgeKind::chain;
};

enum class UvgMode { historical, target };

/// Satellite graph: nodes[0] is the voucher node, item nodes follow in
/// (zone, timestamp, item_id) order. Edges are stored in chronological
/// direction (earlier -> later) and item -> voucher; consumers may flip.
struct Uvg {
  VoucherInfo voucher;
  std::int64_t collect_ts = 0;
  std::vector<UvgNode> nodes;
  std::vector<UvgEdge> edges;
  bool target_mode = false;
  int label = 0;
  std::string session_key;
};

/// A target session plus the indices of this user's earlier redeemed
/// sessions (chronological, most recent last, untruncated; the model takes
/// the last R).
struct SampleRef {
  std::size_t session_idx = 0;
  std::vector<std::size_t> history;
};

struct ZStats {
  double mean = 0.0;
  double stddev = 0.0;
  double z(double x) const { return stddev > 1e-12 ? (x - mean) / stddev : 0.0; }
};

struct Dataset {
  // Events sorted by (user_id, timestamp, item_id); span per user.
  std::vector<Event> events;
  std::map<std::string, std::pair<std::size_t, std::size_t>> user_event_span;

  std::vector<VoucherInfo> vouchers;
  std::map<std::string, std::size_t> voucher_by_id;

  std::vector<UserProfile> profiles;  // numerics already z-normalized
  std::map<std::string, std::size_t> profile_by_user;

  // Sessions sorted by (user_id, collect_ts, voucher_id); samples align
  // one-to-one with sessions.
  std::vector<VoucherSession> sessions;
  std::vector<SampleRef> samples;

  // Normalization statistics computed at build time over the raw inputs.
  ZStats order_count_stats, order_amount_stats;  // profiles
  ZStats min_spend_stats, discount_stats;        // vouchers

  std::vector<std::string> rejects;  // "file:line: reason" per rejected row

  const UserProfile& profile_for(const std::string& user_id) const;
};

/// Parses and validates the four input files. Malformed rows land in
/// Dataset::rejects with file, line, and reason; structural problems
/// (missing file, missing column) throw DataError.
Dataset ingest(const std::string& events_path, const std::string& vouchers_path,
               const std::string& sessions_path, const std::string& profiles_path,
               BehaviorCaps caps = {});

/// Assembles one session from a user's chronologically sorted events:
/// pre lists take the latest events before collect_ts up to the cap, post
/// lists the earliest events in [collect_ts, end_ts] up to the cap.
VoucherSession build_session(const std::string& user_id, const VoucherInfo& voucher,
                             std::int64_t collect_ts, std::int64_t end_ts, int label,
                             const std::vector<Event>& user_events,
                             BehaviorCaps caps = {});

/// Builds the satellite graph. Target mode keeps only pre-collection zones.
/// Z caps the number of item->voucher edges per zone, favoring the items
/// closest in time to collection.
Uvg build_uvg(const VoucherSession& session, UvgMode mode, int Z);

struct ActionStats {
  double before_mean = 0.0;
  double after_mean = 0.0;
  std::optional<double> diff_pct;  // after/before - 1, absent when before == 0
};

struct DatasetStats {
  ActionStats atc, ord;
  std::size_t sessions = 0;
  std::size_t users = 0;
  std::size_t redeemed = 0;
};

DatasetStats dataset_stats(const std::vector<VoucherSession>& sessions);
std::string stats_json(const DatasetStats& stats);

/// Structural checks used by the invariant suites; returns human-readable
/// violations, empty when clean.
std::vector<std::string> check_session(const VoucherSession& s, BehaviorCaps caps = {});
std::vector<std::string> check_uvg(const Uvg& g, int Z);

/// Deterministic content-hash split on the session key.
bool is_test_session(const std::string& session_key, double test_frac);

/// Order-independent hash over the test-half session keys; equal hashes
/// guarantee two runs scored the same split.
std::string split_hash(const Dataset& data, double test_frac);
std::string split_hash_from_keys(std::vector<std::string> test_keys);

}  // namespace dmbgn
