#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hippo/errors.hpp"
#include "hippo/rng.hpp"

namespace hippo {

// Named, shaped view into a flat parameter vector.
struct ParamSegment {
  std::string name;
  std::vector<int> shape;
  size_t offset = 0;
  size_t size = 0;
};

// Immutable description of how a flat vector splits into named tensors.
// Shared by a ParamVector and every GradientVector aligned with it.
class ParamLayout {
 public:
  ParamLayout() = default;

  void add(const std::string& name, std::vector<int> shape) {
    for (const auto& s : segments_) {
      if (s.name == name) throw ConfigError("duplicate parameter segment: " + name);
    }
    size_t sz = 1;
    for (int d : shape) {
      if (d < 1) throw ConfigError("non-positive dim in segment " + name);
      sz *= static_cast<size_t>(d);
    }
    segments_.push_back({name, std::move(shape), total_, sz});
    total_ += sz;
  }

  const std::vector<ParamSegment>& segments() const { return segments_; }
  size_t total() const { return total_; }

  const ParamSegment& find(const std::string& name) const {
    for (const auto& s : segments_) {
      if (s.name == name) return s;
    }
    throw ArgumentError("no parameter segment named " + name);
  }

  bool has(const std::string& name) const {
    for (const auto& s : segments_) {
      if (s.name == name) return true;
    }
    return false;
  }

  bool compatible(const ParamLayout& other) const {
    if (segments_.size() != other.segments_.size() || total_ != other.total_) return false;
    for (size_t i = 0; i < segments_.size(); ++i) {
      if (segments_[i].name != other.segments_[i].name ||
          segments_[i].shape != other.segments_[i].shape)
        return false;
    }
    return true;
  }

 private:
  std::vector<ParamSegment> segments_;
  size_t total_ = 0;
};

using LayoutPtr = std::shared_ptr<const ParamLayout>;

// Flat 64-bit parameter store. Value semantics: updates build a new vector.
struct ParamVector {
  LayoutPtr layout;
  std::vector<double> values;

  ParamVector() = default;
  explicit ParamVector(LayoutPtr l) : layout(std::move(l)), values(layout->total(), 0.0) {}

  std::span<double> seg(const std::string& name) {
    const auto& s = layout->find(name);
    return {values.data() + s.offset, s.size};
  }
  std::span<const double> seg(const std::string& name) const {
    const auto& s = layout->find(name);
    return {values.data() + s.offset, s.size};
  }

  bool all_finite() const {
    for (double v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  // Stable content hash; stamps batches so the on-policy contract is checkable.
  uint64_t hash() const {
    uint64_t h = 0x5bd1e995u;
    for (double v : values) {
      uint64_t bits;
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      h = splitmix64(h ^ bits);
    }
    return h;
  }
};

// Gradient aligned with a ParamVector's layout.
struct GradientVector {
  LayoutPtr layout;
  std::vector<double> values;

  GradientVector() = default;
  explicit GradientVector(LayoutPtr l) : layout(std::move(l)), values(layout->total(), 0.0) {}

  std::span<double> seg(const std::string& name) {
    const auto& s = layout->find(name);
    return {values.data() + s.offset, s.size};
  }

  void zero() { std::fill(values.begin(), values.end(), 0.0); }

  void add_scaled(const GradientVector& g, double c) {
    for (size_t i = 0; i < values.size(); ++i) values[i] += c * g.values[i];
  }

  void scale(double c) {
    for (double& v : values) v *= c;
  }

  double dot(const GradientVector& g) const {
    return std::inner_product(values.begin(), values.end(), g.values.begin(), 0.0);
  }

  double norm() const { return std::sqrt(dot(*this)); }

  bool all_finite() const {
    for (double v : values) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

inline double cosine_similarity(const GradientVector& a, const GradientVector& b) {
  if (a.values == b.values) return 1.0;  // n=1 degenerate case is bit-identical
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace hippo
