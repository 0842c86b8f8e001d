#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "hippo/errors.hpp"
#include "hippo/params.hpp"

namespace hippo {

// Versioned binary container of named double tensors, little-endian.
// Write-then-read is bit-exact; this is the one persistence format in the
// repo (policies, baselines, optimizer state all serialize through it).
struct Checkpoint {
  static constexpr uint32_t kFormatVersion = 1;
  static constexpr char kMagic[8] = {'H', 'P', 'C', 'K', 'P', 'T', '0', '1'};

  std::string arch_desc;  // textual architecture descriptor, parsed by policy code
  uint64_t rng_seed = 0;
  std::map<std::string, double> scalars;  // small named scalars (iteration, etc.)

  struct Tensor {
    std::vector<int> shape;
    std::vector<double> values;
  };
  std::map<std::string, Tensor> tensors;

  void put(const std::string& name, const ParamVector& params) {
    for (const auto& s : params.layout->segments()) {
      Tensor t;
      t.shape = s.shape;
      t.values.assign(params.values.begin() + s.offset,
                      params.values.begin() + s.offset + s.size);
      tensors[name.empty() ? s.name : name + "/" + s.name] = std::move(t);
    }
  }

  // Fill an already-laid-out ParamVector from stored tensors.
  void get(const std::string& name, ParamVector& params) const {
    for (const auto& s : params.layout->segments()) {
      std::string key = name.empty() ? s.name : name + "/" + s.name;
      auto it = tensors.find(key);
      if (it == tensors.end()) throw ConfigError("checkpoint missing tensor " + key);
      if (it->second.shape != s.shape || it->second.values.size() != s.size)
        throw ConfigError("checkpoint tensor shape mismatch for " + key);
      std::copy(it->second.values.begin(), it->second.values.end(),
                params.values.begin() + s.offset);
    }
  }

  bool has(const std::string& prefix) const {
    auto it = tensors.lower_bound(prefix);
    return it != tensors.end() && it->first.compare(0, prefix.size(), prefix) == 0;
  }
};

namespace detail {

inline void write_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}
inline void write_u64(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}
inline void write_f64(std::ostream& os, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  write_u64(os, bits);
}
inline void write_str(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw ConfigError("checkpoint truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}
inline uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw ConfigError("checkpoint truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}
inline double read_f64(std::istream& is) {
  uint64_t bits = read_u64(is);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}
inline std::string read_str(std::istream& is) {
  uint32_t n = read_u32(is);
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (!is) throw ConfigError("checkpoint truncated");
  return s;
}

}  // namespace detail

inline void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open checkpoint for writing: " + path);
  os.write(Checkpoint::kMagic, 8);
  detail::write_u32(os, Checkpoint::kFormatVersion);
  detail::write_str(os, ckpt.arch_desc);
  detail::write_u64(os, ckpt.rng_seed);
  detail::write_u32(os, static_cast<uint32_t>(ckpt.scalars.size()));
  for (const auto& [k, v] : ckpt.scalars) {
    detail::write_str(os, k);
    detail::write_f64(os, v);
  }
  detail::write_u32(os, static_cast<uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    detail::write_str(os, name);
    detail::write_u32(os, static_cast<uint32_t>(t.shape.size()));
    for (int d : t.shape) detail::write_u32(os, static_cast<uint32_t>(d));
    detail::write_u64(os, t.values.size());
    for (double v : t.values) detail::write_f64(os, v);
  }
  if (!os) throw ConfigError("checkpoint write failed: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, Checkpoint::kMagic, 8) != 0)
    throw ConfigError("not a checkpoint file: " + path);
  uint32_t version = detail::read_u32(is);
  if (version != Checkpoint::kFormatVersion)
    throw ConfigError("unsupported checkpoint format version " + std::to_string(version));
  Checkpoint ckpt;
  ckpt.arch_desc = detail::read_str(is);
  ckpt.rng_seed = detail::read_u64(is);
  uint32_t nscalars = detail::read_u32(is);
  for (uint32_t i = 0; i < nscalars; ++i) {
    std::string k = detail::read_str(is);
    ckpt.scalars[k] = detail::read_f64(is);
  }
  uint32_t ntensors = detail::read_u32(is);
  for (uint32_t i = 0; i < ntensors; ++i) {
    std::string name = detail::read_str(is);
    Checkpoint::Tensor t;
    uint32_t ndim = detail::read_u32(is);
    t.shape.resize(ndim);
    for (uint32_t d = 0; d < ndim; ++d) t.shape[d] = static_cast<int>(detail::read_u32(is));
    uint64_t n = detail::read_u64(is);
    t.values.resize(n);
    for (uint64_t j = 0; j < n; ++j) t.values[j] = detail::read_f64(is);
    ckpt.tensors[name] = std::move(t);
  }
  return ckpt;
}

}  // namespace hippo
