#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hdx/errors.hpp"

namespace hdx {

/// D-dimensional integer component vector, the universal HDC carrier.
///
/// Base hypervectors drawn from an item memory are bipolar (every component
/// in {-1, +1}); accumulated hypervectors (image HVs, class HVs) hold the
/// integer sums of bipolar components.
class Hypervector {
 public:
  Hypervector() = default;
  explicit Hypervector(size_t dimension) : comps_(dimension, 0) {}
  explicit Hypervector(std::vector<int32_t> components) : comps_(std::move(components)) {}

  size_t dimension() const { return comps_.size(); }

  int32_t operator[](size_t i) const { return comps_[i]; }
  int32_t& operator[](size_t i) { return comps_[i]; }

  std::span<const int32_t> components() const { return comps_; }
  std::span<int32_t> components() { return comps_; }

  bool operator==(const Hypervector&) const = default;

  bool is_bipolar() const {
    for (int32_t c : comps_)
      if (c != 1 && c != -1) return false;
    return true;
  }

  bool is_zero() const {
    for (int32_t c : comps_)
      if (c != 0) return false;
    return true;
  }

  Hypervector& operator+=(const Hypervector& other) {
    check_same_dimension(*this, other, "+=");
    for (size_t i = 0; i < comps_.size(); ++i) comps_[i] += other.comps_[i];
    return *this;
  }

  Hypervector& operator-=(const Hypervector& other) {
    check_same_dimension(*this, other, "-=");
    for (size_t i = 0; i < comps_.size(); ++i) comps_[i] -= other.comps_[i];
    return *this;
  }

  static void check_same_dimension(const Hypervector& a, const Hypervector& b,
                                   const char* op) {
    if (a.dimension() != b.dimension())
      throw DimensionError(std::string(op) + ": hypervector dimensions differ (" +
                           std::to_string(a.dimension()) + " vs " +
                           std::to_string(b.dimension()) + ")");
  }

 private:
  std::vector<int32_t> comps_;
};

/// Element-wise product. For bipolar operands the result is bipolar and
/// quasi-orthogonal to both; binding is commutative, associative, and
/// self-inverse on bipolar inputs.
inline Hypervector bind(const Hypervector& a, const Hypervector& b) {
  Hypervector::check_same_dimension(a, b, "bind");
  std::vector<int32_t> out(a.dimension());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return Hypervector(std::move(out));
}

/// Element-wise integer sum. The bundle stays similar to each operand.
inline Hypervector bundle(std::span<const Hypervector> hvs) {
  if (hvs.empty()) throw DomainError("bundle: empty input");
  Hypervector acc(hvs.front());
  for (size_t k = 1; k < hvs.size(); ++k) acc += hvs[k];
  return acc;
}

inline Hypervector bundle(const std::vector<Hypervector>& hvs) {
  return bundle(std::span<const Hypervector>(hvs));
}

inline Hypervector negate(const Hypervector& v) {
  std::vector<int32_t> out(v.dimension());
  for (size_t i = 0; i < out.size(); ++i) out[i] = -v[i];
  return Hypervector(std::move(out));
}

template <typename A, typename B>
int64_t dot(std::span<const A> a, std::span<const B> b) {
  int64_t s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += int64_t(a[i]) * int64_t(b[i]);
  return s;
}

/// Cosine of the minimum possible similarity, reported when either operand
/// has zero norm. Keeps an untrained all-zero class HV from ever winning
/// an argmax.
inline constexpr double kMinSimilarity = -1.0;

/// CoSim(a, b) = a.b / (|a||b|), in [-1, 1]. Zero-norm operands yield
/// kMinSimilarity.
inline double cosine_similarity(const Hypervector& a, const Hypervector& b) {
  Hypervector::check_same_dimension(a, b, "cosine_similarity");
  const int64_t ab = dot(a.components(), b.components());
  const int64_t aa = dot(a.components(), a.components());
  const int64_t bb = dot(b.components(), b.components());
  if (aa == 0 || bb == 0) return kMinSimilarity;
  return static_cast<double>(ab) /
         (std::sqrt(static_cast<double>(aa)) * std::sqrt(static_cast<double>(bb)));
}

}  // namespace hdx
