#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hscale/indexed_vector.hpp"
#include "hscale/rng.hpp"
#include "hscale/trajectory.hpp"

namespace hscale {

/// Frozen Gaussian increments dW_j ~ N(0, dt), one independent stream per
/// key. The stream of key k is a pure function of (seed, k), so two paths that
/// share a seed share the noise of every common key, whatever the rest of
/// their key sets.
class WienerPath {
 public:
  WienerPath(TimeGrid grid, KeySet keys, std::uint64_t seed)
      : grid_(grid), keys_(std::move(keys)), seed_(seed), increments_(keys_->size() * grid.steps()) {
    const double sd = std::sqrt(grid_.dt());
    const std::size_t m = grid_.steps();
    for (std::size_t i = 0; i < keys_->size(); ++i) {
      Engine eng = key_engine(seed_, (*keys_)[i]);
      std::normal_distribution<double> z(0.0, 1.0);
      for (std::size_t j = 0; j < m; ++j) increments_[i * m + j] = sd * z(eng);
    }
  }

  const TimeGrid& grid() const noexcept { return grid_; }
  const KeySet& keys() const noexcept { return keys_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t num_keys() const noexcept { return keys_->size(); }

  /// Single-key paths drive every coordinate with the same scalar Brownian motion.
  bool is_scalar() const noexcept { return keys_->size() == 1; }

  double increment(std::size_t key_index, std::size_t j) const { return increments_[key_index * grid_.steps() + j]; }

  std::span<const double> stream(std::size_t key_index) const {
    return std::span<const double>(increments_).subspan(key_index * grid_.steps(), grid_.steps());
  }

  /// W(t_j) = sum_{i<j} dW_i.
  std::vector<double> cumulative(std::size_t key_index) const {
    std::vector<double> w(grid_.size(), 0.0);
    const auto s = stream(key_index);
    for (std::size_t j = 0; j < s.size(); ++j) w[j + 1] = w[j] + s[j];
    return w;
  }

  /// Recomputes the increment of (seed, key, j) from scratch.
  static double replay(std::uint64_t seed, Key key, std::size_t j, double dt) {
    Engine eng = key_engine(seed, key);
    std::normal_distribution<double> z(0.0, 1.0);
    double x = 0.0;
    for (std::size_t i = 0; i <= j; ++i) x = z(eng);
    return std::sqrt(dt) * x;
  }

 private:
  static Engine key_engine(std::uint64_t seed, Key key) {
    return make_engine(seed, StreamTag::wiener, {static_cast<std::uint64_t>(key)});
  }

  TimeGrid grid_;
  KeySet keys_;
  std::uint64_t seed_;
  std::vector<double> increments_;
};

inline WienerPath sample_wiener(const TimeGrid& grid, const KeySet& keys, std::uint64_t seed) {
  return WienerPath(grid, keys, seed);
}

/// One real Brownian motion (key 0).
inline WienerPath sample_scalar_wiener(const TimeGrid& grid, std::uint64_t seed) {
  return WienerPath(grid, make_keys({0}), seed);
}

/// Seed of path p of an ensemble. Paths are independent of each other and of
/// evaluation order.
inline std::uint64_t path_seed(std::uint64_t ensemble_seed, std::size_t p) {
  return derive_seed(ensemble_seed, StreamTag::path, {static_cast<std::uint64_t>(p)});
}

}  // namespace hscale
