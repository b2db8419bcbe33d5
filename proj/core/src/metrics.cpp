#include "dmbgn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dmbgn/common.hpp"

namespace dmbgn::metrics {

namespace {
void check_scored(const std::vector<double>& scores, const std::vector<int>& labels,
                  const char* op) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument(std::string(op) + ": " + std::to_string(scores.size()) +
                                " scores vs " + std::to_string(labels.size()) +
                                " labels");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw NumericError(std::string(op) + ": non-finite score");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw std::invalid_argument(std::string(op) + ": label " + std::to_string(y) +
                                  " outside {0,1}");
    }
  }
}
}  // namespace

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_scored(scores, labels, "auc");
  const std::size_t n = scores.size();
  std::size_t pos = 0;
  for (int y : labels) pos += static_cast<std::size_t>(y);
  const std::size_t neg = n - pos;
  if (pos == 0) throw std::invalid_argument("auc: no positive labels in input");
  if (neg == 0) throw std::invalid_argument("auc: no negative labels in input");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midranks keep tied pairs worth exactly 0.5, matching pair counting.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // avg of i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double u = pos_rank_sum -
                   0.5 * static_cast<double>(pos) * static_cast<double>(pos + 1);
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

double logloss(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_scored(scores, labels, "logloss");
  if (scores.empty()) throw std::invalid_argument("logloss: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = std::clamp(scores[i], kProbEps, 1.0 - kProbEps);
    total += labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(scores.size());
}

double rela_impr(double measured_auc, double base_auc) {
  if (base_auc == 0.5) {
    throw std::invalid_argument("rela_impr: base AUC is exactly 0.5 (random), "
                                "relative improvement undefined");
  }
  return ((measured_auc - 0.5) / (base_auc - 0.5) - 1.0) * 100.0;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty input");
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

Report report(const std::vector<ModelResult>& results,
              const std::vector<std::string>& bases) {
  if (results.empty()) throw std::invalid_argument("report: no model results");
  for (const auto& r : results) {
    if (r.aucs.empty()) {
      throw std::invalid_argument("report: model " + r.model + " has no seed results");
    }
    if (r.split_hash != results.front().split_hash) {
      throw DataError("report: split mismatch: " + results.front().model +
                      " evaluated on split " + results.front().split_hash + ", " +
                      r.model + " on split " + r.split_hash);
    }
  }
  std::vector<double> base_means;
  for (const auto& b : bases) {
    auto it = std::find_if(results.begin(), results.end(),
                           [&](const ModelResult& r) { return r.model == b; });
    if (it == results.end()) {
      throw std::invalid_argument("report: base model " + b + " not among results");
    }
    base_means.push_back(mean(it->aucs));
  }

  Report rep;
  rep.bases = bases;
  rep.split_hash = results.front().split_hash;
  for (const auto& r : results) {
    ReportRow row;
    row.model = r.model;
    row.auc_mean = mean(r.aucs);
    row.auc_std = sample_std(r.aucs);
    row.logloss_mean = mean(r.loglosses);
    for (double bm : base_means) row.rela_impr.push_back(rela_impr(row.auc_mean, bm));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string Report::to_json() const {
  nlohmann::ordered_json doc;
  doc["split_hash"] = split_hash;
  doc["bases"] = bases;
  doc["models"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json m;
    m["model"] = row.model;
    m["auc_mean"] = row.auc_mean;
    m["auc_std"] = row.auc_std;
    m["logloss_mean"] = row.logloss_mean;
    nlohmann::ordered_json ri;
    for (std::size_t i = 0; i < bases.size(); ++i) ri[bases[i]] = row.rela_impr[i];
    m["rela_impr_pct"] = ri;
    doc["models"].push_back(m);
  }
  return doc.dump(2) + "\n";
}

std::string Report::to_text() const {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-18s %-17s %-9s", "model", "auc (mean+-std)",
                "logloss");
  out += buf;
  for (const auto& b : bases) {
    std::snprintf(buf, sizeof(buf), " %-12s", ("vs " + b).c_str());
    out += buf;
  }
  out += "\n";
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-18s %.4f +- %.4f  %-9.4f", row.model.c_str(),
                  row.auc_mean, row.auc_std, row.logloss_mean);
    out += buf;
    for (double ri : row.rela_impr) {
      std::snprintf(buf, sizeof(buf), " %+-12.2f", ri);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace dmbgn::metrics
