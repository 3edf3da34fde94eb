#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hscale/errors.hpp"
#include "hscale/indexed_vector.hpp"
#include "hscale/scale.hpp"

namespace hscale {

/// Uniform grid t_j = j dt, j = 0..M.
class TimeGrid {
 public:
  /// M = floor(T/dt); a relative slack of 1e-9 absorbs representation error
  /// so that e.g. T = 0.1, dt = 0.01 gives ten steps.
  TimeGrid(double T, double dt) : T_(T), dt_(dt) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("TimeGrid: T must be finite and > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("TimeGrid: dt must be finite and > 0");
    steps_ = static_cast<std::size_t>(std::floor(T / dt * (1.0 + 1e-9)));
    if (steps_ == 0) throw DomainError("TimeGrid: dt larger than T");
  }

  static TimeGrid from_steps(double T, std::size_t steps) {
    if (steps == 0) throw DomainError("TimeGrid: need at least one step");
    TimeGrid g(T, T / static_cast<double>(steps));
    g.steps_ = steps;
    return g;
  }

  double T() const noexcept { return T_; }
  double dt() const noexcept { return dt_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_ + 1; }
  double time(std::size_t j) const noexcept { return static_cast<double>(j) * dt_; }
  double final_time() const noexcept { return time(steps_); }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.steps_ == b.steps_ && a.dt_ == b.dt_;
  }

 private:
  double T_;
  double dt_;
  std::size_t steps_ = 0;
};

/// Values of one realization on every grid time.
template <ScalarType Scalar>
struct DiscreteTrajectory {
  TimeGrid grid;
  std::vector<IndexedVector<Scalar>> states;

  DiscreteTrajectory(TimeGrid g, const IndexedVector<Scalar>& constant)
      : grid(g), states(g.size(), constant) {}

  const KeySet& keys() const { return states.front().keys(); }
  const IndexedVector<Scalar>& at(std::size_t j) const { return states[j]; }
  IndexedVector<Scalar>& at(std::size_t j) { return states[j]; }
  const IndexedVector<Scalar>& final_state() const { return states.back(); }
};

template <ScalarType Scalar>
struct TrajectoryEnsemble {
  TimeGrid grid;
  std::vector<DiscreteTrajectory<Scalar>> paths;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return paths.size(); }
};

namespace detail {

/// Shared core of the triple-norm estimators: `state(p, j)` returns the
/// values of path p at grid time j.
template <class StateFn>
double triple_norm_core(const TimeGrid& grid, std::size_t n_paths, StateFn&& state,
                        const WeightedScale& fam, double b, std::span<const double> index_grid) {
  if (n_paths == 0) throw DomainError("triple_norm_estimate: empty ensemble");
  if (!(b > 0.0)) throw DomainError("triple_norm_estimate: b must be > 0");
  const ScaleBounds& bounds = fam.bounds();
  double best = -1.0;
  for (double alpha : index_grid) {
    if (!(alpha > bounds.lo()) || alpha > bounds.hi()) continue;
    const WeightProfile prof = fam.profile(alpha);
    const double horizon = (alpha - bounds.lo()) * b;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double t = grid.time(j);
      if (!(t < horizon)) break;
      double mean = 0.0;
      for (std::size_t p = 0; p < n_paths; ++p) mean += prof.norm_sq(state(p, j));
      mean /= static_cast<double>(n_paths);
      best = std::max(best, mean * (1.0 - t / horizon));
    }
  }
  if (best < 0.0) throw DomainError("triple_norm_estimate: no admissible (index, time) pair on the grid");
  return std::sqrt(best);
}

}  // namespace detail

/// Discretized |||u|||_b: maximum over grid pairs (alpha_i, t_j) with
/// t_j < (alpha_i - lo) b of sqrt(mean_p ||u_p(t_j)||^2_alpha_i * p_b).
template <ScalarType Scalar>
double triple_norm_estimate(const TrajectoryEnsemble<Scalar>& ens, const WeightedScale& fam, double b,
                            std::span<const double> index_grid) {
  for (const auto& path : ens.paths) {
    if (!(path.grid == ens.grid)) throw ShapeError("triple_norm_estimate: path grid differs from ensemble grid");
    if (!same_keys(path.keys(), fam.keys())) throw ShapeError("triple_norm_estimate: keys differ from scale keys");
  }
  return detail::triple_norm_core(
      ens.grid, ens.size(), [&](std::size_t p, std::size_t j) { return ens.paths[p].at(j).values(); }, fam, b,
      index_grid);
}

template <ScalarType Scalar>
double triple_norm_estimate(const TrajectoryEnsemble<Scalar>& ens, const WeightedScale& fam, double b) {
  const auto grid = default_index_grid(fam.bounds());
  return triple_norm_estimate(ens, fam, b, grid);
}

/// |||u - v|||_b without materializing the difference ensemble.
template <ScalarType Scalar>
double triple_norm_distance(const std::vector<DiscreteTrajectory<Scalar>>& u,
                            const std::vector<DiscreteTrajectory<Scalar>>& v, const TimeGrid& grid,
                            const WeightedScale& fam, double b, std::span<const double> index_grid) {
  if (u.size() != v.size()) throw ShapeError("triple_norm_distance: ensemble sizes differ");
  const std::size_t n_keys = fam.keys()->size();
  std::vector<Scalar> scratch(n_keys);
  return detail::triple_norm_core(
      grid, u.size(),
      [&](std::size_t p, std::size_t j) {
        const auto a = u[p].at(j).values();
        const auto c = v[p].at(j).values();
        for (std::size_t i = 0; i < n_keys; ++i) scratch[i] = a[i] - c[i];
        return std::span<const Scalar>(scratch);
      },
      fam, b, index_grid);
}

}  // namespace hscale
