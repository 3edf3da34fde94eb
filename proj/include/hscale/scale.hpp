#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hscale/errors.hpp"
#include "hscale/indexed_vector.hpp"

namespace hscale {

/// Index interval [lo, hi] of a scale. Spaces grow with the index:
/// X_a is contained in X_b and ||.||_b <= ||.||_a whenever a < b.
class ScaleBounds {
 public:
  ScaleBounds(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi))) throw DomainError("ScaleBounds: bounds must be finite");
    if (lo < 0.0) throw DomainError("ScaleBounds: lower index must be >= 0");
    if (!(lo < hi)) throw DomainError("ScaleBounds: require lower index < upper index");
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  bool contains(double a) const noexcept { return a >= lo_ && a <= hi_; }

 private:
  double lo_;
  double hi_;
};

/// Per-index weight table for one WeightedScale, precomputed so that norms
/// along a trajectory avoid repeated exponentials. Entries whose weight
/// overflows a double, or whose squared amplitude underflows, are summed in
/// log space instead.
struct WeightProfile {
  double alpha = 0.0;
  std::vector<double> log_w;
  std::vector<double> w;

  template <ScalarType Scalar>
  double norm_sq(std::span<const Scalar> values) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double m = std::abs(values[i]);
      if (m == 0.0) continue;
      const double a2 = m * m;
      if (std::isfinite(w[i]) && a2 > 0.0) {
        acc += a2 * w[i];
      } else {
        acc += std::exp(2.0 * std::log(m) + log_w[i]);
      }
    }
    return acc;
  }
};

/// Weighted Euclidean realization of a scale of Hilbert spaces:
///
///   ||v||_a^2 = sum_k |v_k|^2 exp(offset_k - a * exponent_k),  exponent_k >= 0.
///
/// Non-negative exponents give the embedding monotonicity of the scale; keys
/// with exponent 0 are the only ones whose contribution does not shrink.
/// The spin scale uses offset 0 and exponent |x|; the torus scale (after the
/// orientation flip a = a_user_hi - a_user) uses offset a_user_hi*k^2 and
/// exponent k^2.
class WeightedScale {
 public:
  WeightedScale(ScaleBounds bounds, KeySet keys, std::vector<double> log_offsets,
                std::vector<double> exponents)
      : bounds_(bounds),
        keys_(std::move(keys)),
        log_offsets_(std::move(log_offsets)),
        exponents_(std::move(exponents)) {
    if (!keys_ || log_offsets_.size() != keys_->size() || exponents_.size() != keys_->size()) {
      throw ShapeError("WeightedScale: weight tables must match key count");
    }
    for (double e : exponents_) {
      if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("WeightedScale: exponents must be finite and >= 0");
    }
  }

  const ScaleBounds& bounds() const noexcept { return bounds_; }
  const KeySet& keys() const noexcept { return keys_; }
  std::span<const double> log_offsets() const noexcept { return log_offsets_; }
  std::span<const double> exponents() const noexcept { return exponents_; }

  double log_weight(std::size_t i, double alpha) const { return log_offsets_[i] - alpha * exponents_[i]; }

  WeightProfile profile(double alpha) const {
    check_index(alpha);
    WeightProfile p;
    p.alpha = alpha;
    p.log_w.resize(exponents_.size());
    p.w.resize(exponents_.size());
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      p.log_w[i] = log_weight(i, alpha);
      p.w[i] = std::exp(p.log_w[i]);
    }
    return p;
  }

  template <ScalarType Scalar>
  double norm_sq(const IndexedVector<Scalar>& v, double alpha) const {
    if (!same_keys(v.keys(), keys_)) throw ShapeError("WeightedScale: vector keys differ from scale keys");
    return profile(alpha).norm_sq(v.values());
  }

  template <ScalarType Scalar>
  double norm(const IndexedVector<Scalar>& v, double alpha) const {
    return std::sqrt(norm_sq(v, alpha));
  }

 private:
  void check_index(double alpha) const {
    if (!bounds_.contains(alpha)) throw DomainError("WeightedScale: index outside the scale bounds");
  }

  ScaleBounds bounds_;
  KeySet keys_;
  std::vector<double> log_offsets_;
  std::vector<double> exponents_;
};

/// Anything with bounds and a weighted norm profile can stand in for a scale.
template <class F>
concept ScaleFamily = requires(const F& f, double a) {
  { f.bounds() } -> std::convertible_to<ScaleBounds>;
  { f.keys() } -> std::convertible_to<KeySet>;
  { f.profile(a) } -> std::same_as<WeightProfile>;
};

/// p_b(alpha, t) = 1 - t / ((alpha - lo) b), defined for lo < alpha <= hi and
/// 0 <= t < (alpha - lo) b.
inline double weight(double alpha, double t, double b, const ScaleBounds& bounds) {
  if (!(b > 0.0)) throw DomainError("weight: b must be > 0");
  if (!(alpha > bounds.lo()) || alpha > bounds.hi()) throw DomainError("weight: index must lie in (lo, hi]");
  if (!(t >= 0.0)) throw DomainError("weight: time must be >= 0");
  const double horizon = (alpha - bounds.lo()) * b;
  if (!(t < horizon)) throw DomainError("weight: time at or past the lifetime (alpha - lo) b");
  return 1.0 - t / horizon;
}

/// (alpha - lo) b: the horizon on which a trajectory is tracked in X_alpha.
/// alpha = lo is accepted and gives 0.
inline double lifetime(double alpha, double b, const ScaleBounds& bounds) {
  if (!(b > 0.0)) throw DomainError("lifetime: b must be > 0");
  if (alpha < bounds.lo() || alpha > bounds.hi()) throw DomainError("lifetime: index must lie in [lo, hi]");
  return (alpha - bounds.lo()) * b;
}

/// The two candidate contraction thresholds for a GL constant L.
struct BStar {
  /// (sqrt(1 + A/L) - 1) / (2A), A = hi - lo.
  double closed_form = 0.0;
  /// Root of 2 b L sqrt(A + 1/b) = 1, i.e. (sqrt(1 + A/L^2) - 1) / (2A).
  double from_lipschitz_constant = 0.0;

  double min() const noexcept { return std::min(closed_form, from_lipschitz_constant); }
};

inline BStar b_star(double L, const ScaleBounds& bounds) {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("b_star: L must be finite and > 0");
  const double A = bounds.width();
  BStar out;
  // sqrt(1+x)-1 written as x/(sqrt(1+x)+1) to keep precision for small x.
  const double x1 = A / L;
  out.closed_form = x1 / (std::sqrt(1.0 + x1) + 1.0) / (2.0 * A);
  const double x2 = A / (L * L);
  out.from_lipschitz_constant = x2 / (std::sqrt(1.0 + x2) + 1.0) / (2.0 * A);
  return out;
}

/// Lipschitz constants of the trajectory transform on M_b.
struct ContractionConstants {
  /// 2 b L sqrt(A + 1/b)
  double theorem = 0.0;
  /// 2 L sqrt(b A + 1)
  double proof = 0.0;

  double min() const noexcept { return std::min(theorem, proof); }
};

inline ContractionConstants contraction_constants(double L, double b, const ScaleBounds& bounds) {
  if (!(b > 0.0)) throw DomainError("contraction_constants: b must be > 0");
  if (!(L >= 0.0)) throw DomainError("contraction_constants: L must be >= 0");
  const double A = bounds.width();
  return {2.0 * b * L * std::sqrt(A + 1.0 / b), 2.0 * L * std::sqrt(b * A + 1.0)};
}

/// Index grid used to approximate sup over alpha: n equispaced points in (lo, hi].
inline std::vector<double> default_index_grid(const ScaleBounds& bounds, std::size_t n = 16) {
  if (n == 0) throw DomainError("default_index_grid: need at least one index");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = bounds.lo() + bounds.width() * static_cast<double>(i + 1) / static_cast<double>(n);
  }
  grid.back() = bounds.hi();
  return grid;
}

}  // namespace hscale
