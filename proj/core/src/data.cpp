#include "dmbgn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dmbgn/common.hpp"
#include "dmbgn/csv.hpp"

namespace dmbgn {

const char* action_name(Action a) { return a == Action::atc ? "atc" : "ord"; }

const char* zone_name(Zone z) {
  switch (z) {
    case Zone::atc_pre: return "atc_pre";
    case Zone::ord_pre: return "ord_pre";
    case Zone::atc_post: return "atc_post";
    case Zone::ord_post: return "ord_post";
  }
  return "?";
}

Action zone_action(Zone z) {
  return (z == Zone::atc_pre || z == Zone::atc_post) ? Action::atc : Action::ord;
}

bool zone_is_pre(Zone z) { return z == Zone::atc_pre || z == Zone::ord_pre; }

std::string VoucherSession::key() const {
  return user_id + ":" + voucher.voucher_id + ":" + std::to_string(collect_ts);
}

namespace {

std::optional<std::int64_t> parse_i64(const std::string& s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_f64(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool event_before(const Event& a, const Event& b) {
  if (a.user_id != b.user_id) return a.user_id < b.user_id;
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.item_id < b.item_id;
}

bool ts_item_before(const Event& a, const Event& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.item_id < b.item_id;
}

ZStats compute_zstats(const std::vector<double>& xs) {
  ZStats st;
  if (xs.empty()) return st;
  double acc = 0.0;
  for (double x : xs) acc += x;
  st.mean = acc / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - st.mean) * (x - st.mean);
  st.stddev = std::sqrt(var / static_cast<double>(xs.size()));
  return st;
}

void reject(Dataset& ds, const std::string& file, std::size_t row_idx,
            const std::string& reason) {
  // Header is line 1; data row i sits on line i+2.
  ds.rejects.push_back(file + ":" + std::to_string(row_idx + 2) + ": " + reason);
}

}  // namespace

const UserProfile& Dataset::profile_for(const std::string& user_id) const {
  auto it = profile_by_user.find(user_id);
  if (it == profile_by_user.end()) {
    throw DataError("no profile for user " + user_id);
  }
  return profiles[it->second];
}

VoucherSession build_session(const std::string& user_id, const VoucherInfo& voucher,
                             std::int64_t collect_ts, std::int64_t end_ts, int label,
                             const std::vector<Event>& user_events,
                             BehaviorCaps caps) {
  if (end_ts < collect_ts) {
    throw DataError("session for user " + user_id + ": end_ts " +
                    std::to_string(end_ts) + " before collect_ts " +
                    std::to_string(collect_ts));
  }
  for (const auto& e : user_events) {
    if (e.user_id != user_id) {
      throw std::invalid_argument("build_session: event for user " + e.user_id +
                                  " passed to session of user " + user_id);
    }
  }
  std::vector<Event> sorted = user_events;
  std::stable_sort(sorted.begin(), sorted.end(), ts_item_before);

  VoucherSession s;
  s.user_id = user_id;
  s.voucher = voucher;
  s.collect_ts = collect_ts;
  s.end_ts = end_ts;
  s.label = label;

  for (const auto& e : sorted) {
    const bool pre = e.timestamp < collect_ts;
    const bool post = e.timestamp >= collect_ts && e.timestamp <= end_ts;
    if (!pre && !post) continue;
    auto& list = pre ? (e.action == Action::atc ? s.pre_atc : s.pre_ord)
                     : (e.action == Action::atc ? s.post_atc : s.post_ord);
    list.push_back(e);
  }
  // Pre lists keep the latest events up to the cap; post lists keep the
  // earliest, so both phases hug the collection time on overflow.
  auto trim = [](std::vector<Event>& list, std::size_t cap, bool keep_tail) {
    if (list.size() <= cap) return;
    if (keep_tail) {
      list.erase(list.begin(), list.end() - static_cast<std::ptrdiff_t>(cap));
    } else {
      list.resize(cap);
    }
  };
  trim(s.pre_atc, caps.atc, true);
  trim(s.pre_ord, caps.ord, true);
  trim(s.post_atc, caps.atc, false);
  trim(s.post_ord, caps.ord, false);
  return s;
}

Uvg build_uvg(const VoucherSession& session, UvgMode mode, int Z) {
  if (Z < 1) throw std::invalid_argument("build_uvg: Z must be >= 1, got " +
                                         std::to_string(Z));
  Uvg g;
  g.voucher = session.voucher;
  g.collect_ts = session.collect_ts;
  g.target_mode = mode == UvgMode::target;
  g.label = session.label;
  g.session_key = session.key();

  UvgNode voucher_node;
  voucher_node.is_voucher = true;
  g.nodes.push_back(voucher_node);

  auto add_zone = [&](Zone zone, const std::vector<Event>& items) {
    const int first = static_cast<int>(g.nodes.size());
    for (const auto& e : items) {
      UvgNode n;
      n.zone = zone;
      n.item = e;
      g.nodes.push_back(n);
    }
    const int count = static_cast<int>(items.size());
    for (int i = 0; i + 1 < count; ++i) {
      g.edges.push_back(UvgEdge{first + i, first + i + 1, EdgeKind::chain});
    }
    // Items closest to collection time get the voucher links.
    std::vector<int> order(count);
    for (int i = 0; i < count; ++i) order[i] = i;
    auto dist = [&](int i) {
      const std::int64_t d = items[static_cast<std::size_t>(i)].timestamp -
                             session.collect_ts;
      return d < 0 ? -d : d;
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (dist(a) != dist(b)) return dist(a) < dist(b);
      const auto& ea = items[static_cast<std::size_t>(a)];
      const auto& eb = items[static_cast<std::size_t>(b)];
      if (ea.timestamp != eb.timestamp) return ea.timestamp < eb.timestamp;
      return ea.item_id < eb.item_id;
    });
    const int links = std::min(count, Z);
    std::vector<int> chosen(order.begin(), order.begin() + links);
    std::sort(chosen.begin(), chosen.end());
    for (int i : chosen) {
      g.edges.push_back(UvgEdge{first + i, 0, EdgeKind::to_voucher});
    }
  };

  add_zone(Zone::atc_pre, session.pre_atc);
  add_zone(Zone::ord_pre, session.pre_ord);
  if (mode == UvgMode::historical) {
    add_zone(Zone::atc_post, session.post_atc);
    add_zone(Zone::ord_post, session.post_ord);
  }
  return g;
}

Dataset ingest(const std::string& events_path, const std::string& vouchers_path,
               const std::string& sessions_path, const std::string& profiles_path,
               BehaviorCaps caps) {
  Dataset ds;

  // Vouchers.
  {
    CsvTable t = read_csv(vouchers_path);
    require_columns(t, {"voucher_id", "activity_id", "min_spend", "discount_amount"});
    const std::size_t c_id = t.col("voucher_id"), c_act = t.col("activity_id");
    const std::size_t c_ms = t.col("min_spend"), c_da = t.col("discount_amount");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      if (row.size() != t.columns.size()) {
        reject(ds, vouchers_path, i, "wrong field count");
        continue;
      }
      auto ms = parse_f64(row[c_ms]);
      auto da = parse_f64(row[c_da]);
      if (!ms || !da) {
        reject(ds, vouchers_path, i, "unparseable min_spend/discount_amount");
        continue;
      }
      if (!(*da > 0.0 && *da <= *ms)) {
        reject(ds, vouchers_path, i,
               "schema violation: requires 0 < discount_amount <= min_spend, got "
               "discount_amount=" + row[c_da] + " min_spend=" + row[c_ms]);
        continue;
      }
      if (ds.voucher_by_id.count(row[c_id])) {
        reject(ds, vouchers_path, i, "duplicate voucher_id " + row[c_id]);
        continue;
      }
      VoucherInfo v;
      v.voucher_id = row[c_id];
      v.activity_id = row[c_act];
      v.min_spend = *ms;
      v.discount_amount = *da;
      ds.voucher_by_id[v.voucher_id] = ds.vouchers.size();
      ds.vouchers.push_back(std::move(v));
    }
  }

  // Profiles.
  {
    CsvTable t = read_csv(profiles_path);
    require_columns(t, {"user_id", "age_level", "gender", "purchase_level",
                        "order_count", "order_amount"});
    const std::size_t c_u = t.col("user_id"), c_age = t.col("age_level");
    const std::size_t c_g = t.col("gender"), c_p = t.col("purchase_level");
    const std::size_t c_oc = t.col("order_count"), c_oa = t.col("order_amount");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      if (row.size() != t.columns.size()) {
        reject(ds, profiles_path, i, "wrong field count");
        continue;
      }
      auto oc = parse_f64(row[c_oc]);
      auto oa = parse_f64(row[c_oa]);
      if (!oc || !oa) {
        reject(ds, profiles_path, i, "unparseable order_count/order_amount");
        continue;
      }
      if (ds.profile_by_user.count(row[c_u])) {
        reject(ds, profiles_path, i, "duplicate user_id " + row[c_u]);
        continue;
      }
      UserProfile p;
      p.user_id = row[c_u];
      p.age_level = row[c_age];
      p.gender = row[c_g];
      p.purchase_level = row[c_p];
      p.order_count = *oc;
      p.order_amount = *oa;
      ds.profile_by_user[p.user_id] = ds.profiles.size();
      ds.profiles.push_back(std::move(p));
    }
    std::vector<double> ocs, oas;
    for (const auto& p : ds.profiles) {
      ocs.push_back(p.order_count);
      oas.push_back(p.order_amount);
    }
    ds.order_count_stats = compute_zstats(ocs);
    ds.order_amount_stats = compute_zstats(oas);
    for (auto& p : ds.profiles) {
      p.order_count = ds.order_count_stats.z(p.order_count);
      p.order_amount = ds.order_amount_stats.z(p.order_amount);
    }
  }

  {
    std::vector<double> mss, das;
    for (const auto& v : ds.vouchers) {
      mss.push_back(v.min_spend);
      das.push_back(v.discount_amount);
    }
    ds.min_spend_stats = compute_zstats(mss);
    ds.discount_stats = compute_zstats(das);
  }

  // Events.
  {
    CsvTable t = read_csv(events_path);
    require_columns(t, {"user_id", "item_id", "action", "timestamp", "category_id",
                        "brand_id", "shop_id", "price_level"});
    const std::size_t c_u = t.col("user_id"), c_i = t.col("item_id");
    const std::size_t c_a = t.col("action"), c_ts = t.col("timestamp");
    const std::size_t c_cat = t.col("category_id"), c_b = t.col("brand_id");
    const std::size_t c_s = t.col("shop_id"), c_pl = t.col("price_level");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      if (row.size() != t.columns.size()) {
        reject(ds, events_path, i, "wrong field count");
        continue;
      }
      Event e;
      if (row[c_a] == "atc") {
        e.action = Action::atc;
      } else if (row[c_a] == "ord") {
        e.action = Action::ord;
      } else {
        reject(ds, events_path, i, "unsupported action '" + row[c_a] + "'");
        continue;
      }
      auto ts = parse_i64(row[c_ts]);
      if (!ts || *ts <= 0) {
        reject(ds, events_path, i, "timestamp must be a positive integer, got '" +
                                       row[c_ts] + "'");
        continue;
      }
      auto pl = parse_i64(row[c_pl]);
      if (!pl) {
        reject(ds, events_path, i, "unparseable price_level '" + row[c_pl] + "'");
        continue;
      }
      e.user_id = row[c_u];
      e.item_id = row[c_i];
      e.timestamp = *ts;
      e.category_id = row[c_cat];
      e.brand_id = row[c_b];
      e.shop_id = row[c_s];
      e.price_level = static_cast<int>(*pl);
      ds.events.push_back(std::move(e));
    }
    std::stable_sort(ds.events.begin(), ds.events.end(), event_before);
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= ds.events.size(); ++i) {
      if (i == ds.events.size() || ds.events[i].user_id != ds.events[begin].user_id) {
        ds.user_event_span[ds.events[begin].user_id] = {begin, i};
        begin = i;
      }
    }
  }

  // Sessions.
  struct RawSession {
    std::string user_id;
    std::size_t voucher_idx;
    std::int64_t collect_ts, end_ts;
    int label;
  };
  std::vector<RawSession> raw;
  {
    CsvTable t = read_csv(sessions_path);
    require_columns(t, {"user_id", "voucher_id", "collect_ts", "end_ts", "label"});
    const std::size_t c_u = t.col("user_id"), c_v = t.col("voucher_id");
    const std::size_t c_c = t.col("collect_ts"), c_e = t.col("end_ts");
    const std::size_t c_l = t.col("label");
    std::set<std::string> seen_keys;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      if (row.size() != t.columns.size()) {
        reject(ds, sessions_path, i, "wrong field count");
        continue;
      }
      auto vit = ds.voucher_by_id.find(row[c_v]);
      if (vit == ds.voucher_by_id.end()) {
        reject(ds, sessions_path, i, "unknown or rejected voucher " + row[c_v]);
        continue;
      }
      if (!ds.profile_by_user.count(row[c_u])) {
        reject(ds, sessions_path, i, "no profile for user " + row[c_u]);
        continue;
      }
      auto ct = parse_i64(row[c_c]);
      auto et = parse_i64(row[c_e]);
      if (!ct || !et) {
        reject(ds, sessions_path, i, "unparseable collect_ts/end_ts");
        continue;
      }
      if (*et < *ct) {
        reject(ds, sessions_path, i, "end_ts before collect_ts");
        continue;
      }
      auto lb = parse_i64(row[c_l]);
      if (!lb || (*lb != 0 && *lb != 1)) {
        reject(ds, sessions_path, i, "label must be 0 or 1, got '" + row[c_l] + "'");
        continue;
      }
      const std::string key = row[c_u] + ":" + row[c_v] + ":" + row[c_c];
      if (!seen_keys.insert(key).second) {
        reject(ds, sessions_path, i, "duplicate session " + key);
        continue;
      }
      raw.push_back(RawSession{row[c_u], vit->second, *ct, *et,
                               static_cast<int>(*lb)});
    }
  }
  std::sort(raw.begin(), raw.end(), [&](const RawSession& a, const RawSession& b) {
    if (a.user_id != b.user_id) return a.user_id < b.user_id;
    if (a.collect_ts != b.collect_ts) return a.collect_ts < b.collect_ts;
    return ds.vouchers[a.voucher_idx].voucher_id < ds.vouchers[b.voucher_idx].voucher_id;
  });

  const std::vector<Event> no_events;
  for (const auto& r : raw) {
    std::vector<Event> user_events;
    auto span = ds.user_event_span.find(r.user_id);
    if (span != ds.user_event_span.end()) {
      user_events.assign(ds.events.begin() + static_cast<std::ptrdiff_t>(span->second.first),
                         ds.events.begin() + static_cast<std::ptrdiff_t>(span->second.second));
    }
    ds.sessions.push_back(build_session(r.user_id, ds.vouchers[r.voucher_idx],
                                        r.collect_ts, r.end_ts, r.label, user_events,
                                        caps));
  }

  // Sessions are sorted by user, so each user's block is contiguous.
  std::map<std::string, std::pair<std::size_t, std::size_t>> user_session_span;
  {
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= ds.sessions.size(); ++i) {
      if (i == ds.sessions.size() ||
          ds.sessions[i].user_id != ds.sessions[begin].user_id) {
        user_session_span[ds.sessions[begin].user_id] = {begin, i};
        begin = i;
      }
    }
  }

  // History: the user's redeemed sessions that ended strictly before the
  // target's collection, chronological by redemption time.
  for (std::size_t i = 0; i < ds.sessions.size(); ++i) {
    const auto& target = ds.sessions[i];
    SampleRef ref;
    ref.session_idx = i;
    std::vector<std::size_t> hist;
    const auto [u_begin, u_end] = user_session_span.at(target.user_id);
    for (std::size_t j = u_begin; j < u_end; ++j) {
      if (j == i) continue;
      const auto& cand = ds.sessions[j];
      if (cand.label != 1) continue;
      if (cand.end_ts >= target.collect_ts) continue;
      hist.push_back(j);
    }
    std::sort(hist.begin(), hist.end(), [&](std::size_t a, std::size_t b) {
      const auto& sa = ds.sessions[a];
      const auto& sb = ds.sessions[b];
      if (sa.end_ts != sb.end_ts) return sa.end_ts < sb.end_ts;
      if (sa.collect_ts != sb.collect_ts) return sa.collect_ts < sb.collect_ts;
      return sa.voucher.voucher_id < sb.voucher.voucher_id;
    });
    ref.history = std::move(hist);
    ds.samples.push_back(std::move(ref));
  }
  return ds;
}

DatasetStats dataset_stats(const std::vector<VoucherSession>& sessions) {
  if (sessions.empty()) throw std::invalid_argument("dataset_stats: no sessions");
  DatasetStats st;
  st.sessions = sessions.size();
  std::set<std::string> users;
  double atc_pre = 0, atc_post = 0, ord_pre = 0, ord_post = 0;
  for (const auto& s : sessions) {
    users.insert(s.user_id);
    st.redeemed += static_cast<std::size_t>(s.label == 1);
    atc_pre += static_cast<double>(s.pre_atc.size());
    atc_post += static_cast<double>(s.post_atc.size());
    ord_pre += static_cast<double>(s.pre_ord.size());
    ord_post += static_cast<double>(s.post_ord.size());
  }
  st.users = users.size();
  const double n = static_cast<double>(sessions.size());
  st.atc.before_mean = atc_pre / n;
  st.atc.after_mean = atc_post / n;
  st.ord.before_mean = ord_pre / n;
  st.ord.after_mean = ord_post / n;
  if (st.atc.before_mean > 0)
    st.atc.diff_pct = 100.0 * (st.atc.after_mean / st.atc.before_mean - 1.0);
  if (st.ord.before_mean > 0)
    st.ord.diff_pct = 100.0 * (st.ord.after_mean / st.ord.before_mean - 1.0);
  return st;
}

std::string stats_json(const DatasetStats& stats) {
  nlohmann::ordered_json doc;
  doc["sessions"] = stats.sessions;
  doc["users"] = stats.users;
  doc["redeemed"] = stats.redeemed;
  auto action = [](const ActionStats& a) {
    nlohmann::ordered_json j;
    j["avg_before"] = a.before_mean;
    j["avg_after"] = a.after_mean;
    if (a.diff_pct) {
      j["diff_pct"] = *a.diff_pct;
    } else {
      j["diff_pct"] = nullptr;
    }
    return j;
  };
  doc["atc"] = action(stats.atc);
  doc["ord"] = action(stats.ord);
  return doc.dump(2) + "\n";
}

std::vector<std::string> check_session(const VoucherSession& s, BehaviorCaps caps) {
  std::vector<std::string> bad;
  if (s.end_ts < s.collect_ts) bad.push_back("end_ts before collect_ts");
  auto check_list = [&](const std::vector<Event>& list, const char* name, bool pre,
                        Action action, std::size_t cap) {
    if (list.size() > cap) {
      bad.push_back(std::string(name) + " exceeds cap " + std::to_string(cap));
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& e = list[i];
      if (e.action != action) bad.push_back(std::string(name) + " holds wrong action");
      if (pre && e.timestamp >= s.collect_ts) {
        bad.push_back(std::string(name) + " event at/after collect_ts");
      }
      if (!pre && (e.timestamp < s.collect_ts || e.timestamp > s.end_ts)) {
        bad.push_back(std::string(name) + " event outside [collect_ts, end_ts]");
      }
      if (i > 0 && ts_item_before(e, list[i - 1])) {
        bad.push_back(std::string(name) + " not in chronological order");
      }
    }
  };
  check_list(s.pre_atc, "pre_atc", true, Action::atc, caps.atc);
  check_list(s.pre_ord, "pre_ord", true, Action::ord, caps.ord);
  check_list(s.post_atc, "post_atc", false, Action::atc, caps.atc);
  check_list(s.post_ord, "post_ord", false, Action::ord, caps.ord);
  return bad;
}

std::vector<std::string> check_uvg(const Uvg& g, int Z) {
  std::vector<std::string> bad;
  if (g.nodes.empty() || !g.nodes[0].is_voucher) {
    bad.push_back("node 0 is not the voucher node");
    return bad;
  }
  for (std::size_t i = 1; i < g.nodes.size(); ++i) {
    if (g.nodes[i].is_voucher) bad.push_back("multiple voucher nodes");
    if (g.target_mode && !zone_is_pre(g.nodes[i].zone)) {
      bad.push_back("target-mode graph holds a post-collection node");
    }
  }
  // Canonical node order: zone blocks in enum order, chronological inside.
  for (std::size_t i = 2; i < g.nodes.size(); ++i) {
    const auto& a = g.nodes[i - 1];
    const auto& b = g.nodes[i];
    if (static_cast<int>(a.zone) > static_cast<int>(b.zone)) {
      bad.push_back("zone blocks out of order");
    } else if (a.zone == b.zone && ts_item_before(b.item, a.item)) {
      bad.push_back("items out of chronological order within zone");
    }
  }

  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> out_chain(g.nodes.size(), 0), out_link(g.nodes.size(), 0);
  std::map<int, int> zone_links;
  int voucher_in = 0;
  for (const auto& e : g.edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      bad.push_back("edge endpoint out of range");
      continue;
    }
    if (e.kind == EdgeKind::chain) {
      if (e.src == 0 || e.dst == 0) bad.push_back("chain edge touches voucher node");
      else if (g.nodes[static_cast<std::size_t>(e.src)].zone !=
               g.nodes[static_cast<std::size_t>(e.dst)].zone) {
        bad.push_back("chain edge crosses zones");
      } else if (e.dst != e.src + 1) {
        bad.push_back("chain edge skips a chronologically intermediate node");
      }
      out_chain[static_cast<std::size_t>(e.src)]++;
    } else {
      if (e.dst != 0) bad.push_back("to_voucher edge not pointing at voucher node");
      if (e.src == 0) bad.push_back("to_voucher edge from voucher node");
      else zone_links[static_cast<int>(g.nodes[static_cast<std::size_t>(e.src)].zone)]++;
      voucher_in++;
      out_link[static_cast<std::size_t>(e.src)]++;
    }
  }
  if (voucher_in > 4 * Z) bad.push_back("voucher in-degree exceeds 4Z");
  for (const auto& [zone, cnt] : zone_links) {
    if (cnt > Z) {
      bad.push_back(std::string("zone ") + zone_name(static_cast<Zone>(zone)) +
                    " has more than Z voucher links");
    }
  }
  for (std::size_t i = 1; i < g.nodes.size(); ++i) {
    if (out_chain[i] > 1) bad.push_back("item node with multiple chain successors");
    if (out_link[i] > 1) bad.push_back("item node with multiple voucher links");
  }
  return bad;
}

bool is_test_session(const std::string& session_key, double test_frac) {
  const double u = static_cast<double>(fnv1a64(session_key) >> 11) / 9007199254740992.0;
  return u < test_frac;
}

std::string split_hash(const Dataset& data, double test_frac) {
  std::vector<std::string> keys;
  for (const auto& s : data.sessions) {
    const std::string k = s.key();
    if (is_test_session(k, test_frac)) keys.push_back(k);
  }
  return split_hash_from_keys(std::move(keys));
}

std::string split_hash_from_keys(std::vector<std::string> test_keys) {
  std::sort(test_keys.begin(), test_keys.end());
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& k : test_keys) {
    h = fnv1a64(k, h);
    h = fnv1a64_bytes("\n", 1, h);
  }
  return hex64(h);
}

}  // namespace dmbgn
