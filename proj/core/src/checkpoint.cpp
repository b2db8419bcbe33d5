#include "dmbgn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dmbgn/common.hpp"

namespace dmbgn {

namespace {
constexpr char kMagic[] = "DMBGNC1\n";
constexpr std::size_t kMagicLen = 8;

using Json = nlohmann::json;
}  // namespace

void TensorStore::put(const std::string& name, const TensorPtr& t) {
  auto copy = Tensor::create(t->shape(), t->data);
  auto it = tindex_.find(name);
  if (it != tindex_.end()) {
    tensors_[it->second].second = copy;
    return;
  }
  tindex_[name] = tensors_.size();
  tensors_.emplace_back(name, copy);
}

void TensorStore::put_text(const std::string& name, std::string text) {
  auto it = xindex_.find(name);
  if (it != xindex_.end()) {
    texts_[it->second].second = std::move(text);
    return;
  }
  xindex_[name] = texts_.size();
  texts_.emplace_back(name, std::move(text));
}

bool TensorStore::has(const std::string& name) const { return tindex_.count(name) > 0; }
bool TensorStore::has_text(const std::string& name) const {
  return xindex_.count(name) > 0;
}

TensorPtr TensorStore::get(const std::string& name) const {
  auto it = tindex_.find(name);
  if (it == tindex_.end()) throw DataError("checkpoint: no tensor named " + name);
  const auto& t = tensors_[it->second].second;
  return Tensor::create(t->shape(), t->data);
}

const std::string& TensorStore::get_text(const std::string& name) const {
  auto it = xindex_.find(name);
  if (it == xindex_.end()) throw DataError("checkpoint: no text entry named " + name);
  return texts_[it->second].second;
}

std::vector<std::string> TensorStore::names() const {
  std::vector<std::string> out;
  out.reserve(tensors_.size());
  for (const auto& [n, t] : tensors_) out.push_back(n);
  return out;
}

std::vector<std::string> TensorStore::text_names() const {
  std::vector<std::string> out;
  out.reserve(texts_.size());
  for (const auto& [n, t] : texts_) out.push_back(n);
  return out;
}

void TensorStore::save(const std::string& path) const {
  Json manifest;
  manifest["tensors"] = Json::array();
  manifest["texts"] = Json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : tensors_) {
    Json entry;
    entry["name"] = name;
    entry["shape"] = t->shape();
    entry["offset"] = offset;
    entry["count"] = t->numel();
    manifest["tensors"].push_back(entry);
    offset += t->numel() * sizeof(double);
  }
  for (const auto& [name, text] : texts_) {
    Json entry;
    entry["name"] = name;
    entry["offset"] = offset;
    entry["bytes"] = text.size();
    manifest["texts"].push_back(entry);
    offset += text.size();
  }
  const std::string mstr = manifest.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("checkpoint: cannot open " + path + " for writing");
  out.write(kMagic, kMagicLen);
  std::uint64_t mlen = mstr.size();
  char lenbuf[8];
  for (int i = 0; i < 8; ++i) lenbuf[i] = static_cast<char>((mlen >> (8 * i)) & 0xff);
  out.write(lenbuf, 8);
  out.write(mstr.data(), static_cast<std::streamsize>(mstr.size()));
  // Payload assumes a little-endian host, which covers every target we build.
  for (const auto& [name, t] : tensors_) {
    out.write(reinterpret_cast<const char*>(t->data.data()),
              static_cast<std::streamsize>(t->numel() * sizeof(double)));
  }
  for (const auto& [name, text] : texts_) {
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
  if (!out) throw DataError("checkpoint: write failed for " + path);
}

TensorStore TensorStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("checkpoint: cannot open " + path);
  char magic[kMagicLen];
  in.read(magic, kMagicLen);
  if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0) {
    throw DataError("checkpoint: " + path + " is not a DMBGNC1 container");
  }
  char lenbuf[8];
  in.read(lenbuf, 8);
  if (!in) throw DataError("checkpoint: truncated header in " + path);
  std::uint64_t mlen = 0;
  for (int i = 0; i < 8; ++i)
    mlen |= static_cast<std::uint64_t>(static_cast<unsigned char>(lenbuf[i])) << (8 * i);
  std::string mstr(mlen, '\0');
  in.read(mstr.data(), static_cast<std::streamsize>(mlen));
  if (!in) throw DataError("checkpoint: truncated manifest in " + path);

  Json manifest;
  try {
    manifest = Json::parse(mstr);
  } catch (const Json::exception& e) {
    throw DataError("checkpoint: bad manifest in " + path + ": " + e.what());
  }

  const std::streampos payload_start = in.tellg();
  TensorStore store;
  for (const auto& entry : manifest.at("tensors")) {
    const std::string name = entry.at("name").get<std::string>();
    const Shape shape = entry.at("shape").get<Shape>();
    const std::uint64_t offset = entry.at("offset").get<std::uint64_t>();
    const std::uint64_t count = entry.at("count").get<std::uint64_t>();
    std::vector<double> data(count);
    in.seekg(payload_start + static_cast<std::streamoff>(offset));
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw DataError("checkpoint: truncated tensor " + name + " in " + path);
    store.put(name, Tensor::create(shape, std::move(data)));
  }
  for (const auto& entry : manifest.at("texts")) {
    const std::string name = entry.at("name").get<std::string>();
    const std::uint64_t offset = entry.at("offset").get<std::uint64_t>();
    const std::uint64_t bytes = entry.at("bytes").get<std::uint64_t>();
    std::string text(bytes, '\0');
    in.seekg(payload_start + static_cast<std::streamoff>(offset));
    in.read(text.data(), static_cast<std::streamsize>(bytes));
    if (!in) throw DataError("checkpoint: truncated text " + name + " in " + path);
    store.put_text(name, std::move(text));
  }
  return store;
}

void save_params(TensorStore& store, const nn::ParamStore& params,
                 const std::string& section) {
  for (const auto& e : params.entries()) store.put(section + e.name, e.tensor);
}

void load_params(const TensorStore& store, nn::ParamStore& params,
                 const std::string& section) {
  for (auto& e : params.entries()) {
    const std::string key = section + e.name;
    if (!store.has(key)) throw DataError("checkpoint: missing tensor " + key);
    auto t = store.get(key);
    if (t->shape() != e.tensor->shape()) {
      throw DataError("checkpoint: shape mismatch for " + key + ": file has " +
                      shape_str(t->shape()) + ", model expects " +
                      shape_str(e.tensor->shape()));
    }
    e.tensor->data = t->data;
  }
}

std::size_t load_params_matching(const TensorStore& store, nn::ParamStore& params,
                                 const std::string& section,
                                 const std::vector<std::string>& prefixes) {
  std::size_t loaded = 0;
  for (auto& e : params.entries()) {
    bool wanted = false;
    for (const auto& p : prefixes) {
      if (e.name.rfind(p, 0) == 0) {
        wanted = true;
        break;
      }
    }
    if (!wanted) continue;
    const std::string key = section + e.name;
    if (!store.has(key)) throw DataError("checkpoint: missing tensor " + key);
    auto t = store.get(key);
    if (t->shape() != e.tensor->shape()) {
      throw DataError("checkpoint: shape mismatch for " + key + ": file has " +
                      shape_str(t->shape()) + ", model expects " +
                      shape_str(e.tensor->shape()));
    }
    e.tensor->data = t->data;
    ++loaded;
  }
  return loaded;
}

}  // namespace dmbgn
