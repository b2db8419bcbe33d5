#pragma once

#include <string>
#include <vector>

namespace dmbgn::metrics {

/// Mann-Whitney AUC via sort-and-midrank, ties counted 0.5. Throws
/// std::invalid_argument naming the missing class on single-class input.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

/// Mean binary cross-entropy with the standard probability clamp.
double logloss(const std::vector<double>& scores, const std::vector<int>& labels);

/// ((measured-0.5)/(base-0.5) - 1) * 100; base of exactly 0.5 throws.
double rela_impr(double measured_auc, double base_auc);

double mean(const std::vector<double>& xs);
/// Sample standard deviation (n-1 denominator); n < 2 -> 0.
double sample_std(const std::vector<double>& xs);

struct ModelResult {
  std::string model;
  std::vector<double> aucs;      // one per seed
  std::vector<double> loglosses;
  std::string split_hash;        // guards against mixing test splits
};

struct ReportRow {
  std::string model;
  double auc_mean = 0, auc_std = 0, logloss_mean = 0;
  // Relative improvement vs each base model, same order as bases; entries
  // are NaN when the base equals the model itself is fine to include.
  std::vector<double> rela_impr;
};

struct Report {
  std::vector<std::string> bases;
  std::vector<ReportRow> rows;
  std::string split_hash;

  std::string to_json() const;
  std::string to_text() const;
};

/// Aggregates per-seed results into a comparison table against the named
/// base models. All results must carry the same split hash.
Report report(const std::vector<ModelResult>& results,
              const std::vector<std::string>& bases);

}  // namespace dmbgn::metrics
