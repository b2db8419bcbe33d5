#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace dmbgn {

/// Flat `key = value` configuration. Lines starting with '#' are comments.
/// Values are stored as strings and parsed on access; parse failures name
/// the offending key. dump() is sorted so run-directory configs diff cleanly.
class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_str(const std::string& key, const std::string& dflt) const;
  std::int64_t get_int(const std::string& key, std::int64_t dflt) const;
  double get_double(const std::string& key, double dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;

  // Required variants: missing key -> DataError.
  std::string require_str(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  void set_int(const std::string& key, std::int64_t v);
  void set_double(const std::string& key, double v);

  /// Overlays `other` on top of this config (other wins).
  void merge(const Config& other);

  /// Parses a single "key=value" override as passed on a command line.
  void apply_override(const std::string& assignment);

  std::string dump() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace dmbgn
