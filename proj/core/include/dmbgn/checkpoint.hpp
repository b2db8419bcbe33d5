#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dmbgn/nn.hpp"
#include "dmbgn/tensor.hpp"

namespace dmbgn {

/// Named-tensor container behind every checkpoint file. Binary layout:
/// magic "DMBGNC1\n", 8-byte little-endian manifest length, JSON manifest
/// (names, shapes, payload offsets), then the payload: raw doubles for
/// tensors followed by UTF-8 text blobs. Round-trips bitwise.
class TensorStore {
 public:
  void put(const std::string& name, const TensorPtr& t);
  void put_text(const std::string& name, std::string text);

  bool has(const std::string& name) const;
  bool has_text(const std::string& name) const;
  TensorPtr get(const std::string& name) const;  // deep copy, grad detached
  const std::string& get_text(const std::string& name) const;

  std::vector<std::string> names() const;
  std::vector<std::string> text_names() const;

  void save(const std::string& path) const;
  static TensorStore load(const std::string& path);

 private:
  std::vector<std::pair<std::string, TensorPtr>> tensors_;
  std::vector<std::pair<std::string, std::string>> texts_;
  std::map<std::string, std::size_t> tindex_, xindex_;
};

/// Copies every store entry into the checkpoint under section (e.g. "dmbgn/").
void save_params(TensorStore& store, const nn::ParamStore& params,
                 const std::string& section);

/// Loads section/name into each existing parameter; every parameter must be
/// present with an identical shape or this throws DataError.
void load_params(const TensorStore& store, nn::ParamStore& params,
                 const std::string& section);

/// Loads only the parameters under the given name prefixes (relative to the
/// section); returns how many tensors were copied. Shape mismatches throw.
std::size_t load_params_matching(const TensorStore& store, nn::ParamStore& params,
                                 const std::string& section,
                                 const std::vector<std::string>& prefixes);

}  // namespace dmbgn
