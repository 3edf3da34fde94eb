#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "hscale/errors.hpp"

namespace hscale {

/// Stable identifier of a coordinate: a Fourier mode k or a point id.
using Key = std::int64_t;

/// Shared, immutable ordered key list. Vectors built on the same KeySet
/// compare keys by pointer, so per-step arithmetic never re-checks contents.
using KeySet = std::shared_ptr<const std::vector<Key>>;

inline KeySet make_keys(std::vector<Key> keys) {
  return std::make_shared<const std::vector<Key>>(std::move(keys));
}

inline bool same_keys(const KeySet& a, const KeySet& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class Scalar>
concept ScalarType = std::is_same_v<Scalar, double> || std::is_same_v<Scalar, std::complex<double>>;

template <ScalarType Scalar>
inline double abs2(const Scalar& v) {
  if constexpr (is_complex<Scalar>::value) {
    return std::norm(v);
  } else {
    return v * v;
  }
}

template <ScalarType Scalar>
inline bool is_finite(const Scalar& v) {
  if constexpr (is_complex<Scalar>::value) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  } else {
    return std::isfinite(v);
  }
}

/// Finite realization of an element of the scale: one scalar per key.
template <ScalarType Scalar>
class IndexedVector {
 public:
  using value_type = Scalar;

  IndexedVector() = default;

  explicit IndexedVector(KeySet keys) : keys_(std::move(keys)), values_(keys_ ? keys_->size() : 0) {}

  IndexedVector(KeySet keys, std::vector<Scalar> values)
      : keys_(std::move(keys)), values_(std::move(values)) {
    if (!keys_ || keys_->size() != values_.size()) {
      throw ShapeError("IndexedVector: value count does not match key count");
    }
  }

  static IndexedVector zeros(KeySet keys) { return IndexedVector(std::move(keys)); }

  const KeySet& keys() const noexcept { return keys_; }
  std::size_t size() const noexcept { return values_.size(); }
  Key key(std::size_t i) const { return (*keys_)[i]; }

  std::span<const Scalar> values() const noexcept { return values_; }
  std::span<Scalar> values() noexcept { return values_; }

  Scalar& operator[](std::size_t i) noexcept { return values_[i]; }
  const Scalar& operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Position of a key, or size() if absent. Linear scan; keys are short lists.
  std::size_t find(Key k) const {
    const auto it = std::find(keys_->begin(), keys_->end(), k);
    return static_cast<std::size_t>(it - keys_->begin());
  }

  IndexedVector& operator+=(const IndexedVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  IndexedVector& operator-=(const IndexedVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  IndexedVector& operator*=(const Scalar& s) {
    for (auto& v : values_) v *= s;
    return *this;
  }

  friend IndexedVector operator+(IndexedVector a, const IndexedVector& b) { return a += b; }
  friend IndexedVector operator-(IndexedVector a, const IndexedVector& b) { return a -= b; }
  friend IndexedVector operator*(IndexedVector a, const Scalar& s) { return a *= s; }
  friend IndexedVector operator*(const Scalar& s, IndexedVector a) { return a *= s; }

  friend bool operator==(const IndexedVector& a, const IndexedVector& b) {
    return same_keys(a.keys_, b.keys_) && a.values_ == b.values_;
  }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](const Scalar& v) { return is_finite(v); });
  }

 private:
  void check_same(const IndexedVector& o) const {
    if (!same_keys(keys_, o.keys_)) throw ShapeError("IndexedVector: key sets differ");
  }

  KeySet keys_;
  std::vector<Scalar> values_;
};

using RealVector = IndexedVector<double>;
using ComplexVector = IndexedVector<std::complex<double>>;

}  // namespace hscale
