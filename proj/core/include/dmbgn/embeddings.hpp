#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "dmbgn/data.hpp"

namespace dmbgn {

/// Maps string ids to dense rows. Row 0 is a shared out-of-vocabulary slot;
/// known ids occupy rows 1..size()-1 in sorted id order.
class Vocab {
 public:
  Vocab();
  explicit Vocab(std::vector<std::string> sorted_ids);

  std::size_t size() const { return ids_.size(); }
  /// Row for an id; unknown ids map to row 0.
  std::size_t row(const std::string& id) const;
  bool contains(const std::string& id) const;
  const std::string& id_at(std::size_t row) const { return ids_.at(row); }
  const std::vector<std::string>& ids() const { return ids_; }

  /// One id per line, OOV slot first.
  std::string serialize() const;
  static Vocab deserialize(const std::string& text);

  bool operator==(const Vocab& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  void rebuild_index();
};

/// Id spaces every model draws on, built once per dataset.
struct FeatureSpace {
  Vocab items;
  Vocab categories;
  Vocab brands;
  Vocab shops;
  Vocab vouchers;
  Vocab activities;
  Vocab ages;
  Vocab genders;
  Vocab purchase_levels;
};

FeatureSpace build_feature_space(const Dataset& ds);

}  // namespace dmbgn
