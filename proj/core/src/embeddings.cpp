#include "dmbgn/embeddings.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dmbgn/common.hpp"

namespace dmbgn {

namespace {
constexpr const char* kOovId = "<oov>";
}

Vocab::Vocab() : ids_{kOovId} { rebuild_index(); }

Vocab::Vocab(std::vector<std::string> sorted_ids) {
  ids_.reserve(sorted_ids.size() + 1);
  ids_.push_back(kOovId);
  for (auto& id : sorted_ids) {
    if (id == kOovId) throw std::invalid_argument("Vocab: id collides with OOV slot");
    ids_.push_back(std::move(id));
  }
  for (std::size_t i = 2; i < ids_.size(); ++i) {
    if (ids_[i - 1] >= ids_[i]) {
      throw std::invalid_argument("Vocab: ids must be sorted and unique, got '" +
                                  ids_[i - 1] + "' before '" + ids_[i] + "'");
    }
  }
  rebuild_index();
}

void Vocab::rebuild_index() {
  index_.clear();
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = i;
}

std::size_t Vocab::row(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? 0 : it->second;
}

bool Vocab::contains(const std::string& id) const {
  return index_.find(id) != index_.end();
}

std::string Vocab::serialize() const {
  std::string out;
  for (const auto& id : ids_) {
    out += id;
    out += '\n';
  }
  return out;
}

Vocab Vocab::deserialize(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (lines.empty() || lines[0] != kOovId) {
    throw DataError("Vocab: serialized form must start with OOV slot");
  }
  lines.erase(lines.begin());
  return Vocab(std::move(lines));
}

FeatureSpace build_feature_space(const Dataset& ds) {
  std::set<std::string> items, cats, brands, shops, vouchers, acts, ages, genders, levels;
  for (const auto& e : ds.events) {
    items.insert(e.item_id);
    cats.insert(e.category_id);
    brands.insert(e.brand_id);
    shops.insert(e.shop_id);
  }
  for (const auto& v : ds.vouchers) {
    vouchers.insert(v.voucher_id);
    acts.insert(v.activity_id);
  }
  for (const auto& p : ds.profiles) {
    ages.insert(p.age_level);
    genders.insert(p.gender);
    levels.insert(p.purchase_level);
  }
  auto to_vocab = [](const std::set<std::string>& s) {
    return Vocab(std::vector<std::string>(s.begin(), s.end()));
  };
  FeatureSpace fs;
  fs.items = to_vocab(items);
  fs.categories = to_vocab(cats);
  fs.brands = to_vocab(brands);
  fs.shops = to_vocab(shops);
  fs.vouchers = to_vocab(vouchers);
  fs.activities = to_vocab(acts);
  fs.ages = to_vocab(ages);
  fs.genders = to_vocab(genders);
  fs.purchase_levels = to_vocab(levels);
  return fs;
}

}  // namespace dmbgn
