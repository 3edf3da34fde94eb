#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hscale/errors.hpp"
#include "hscale/gl_field.hpp"
#include "hscale/indexed_vector.hpp"
#include "hscale/parallel.hpp"
#include "hscale/scale.hpp"
#include "hscale/table.hpp"
#include "hscale/trajectory.hpp"
#include "hscale/wiener.hpp"

namespace hscale {

namespace detail {

inline void check_noise_keys(const KeySet& state_keys, const WienerPath& path) {
  if (path.is_scalar()) return;
  if (!same_keys(state_keys, path.keys())) throw ShapeError("noise keys differ from state keys");
}

inline double noise(const WienerPath& path, std::size_t key_index, std::size_t j) {
  return path.increment(path.is_scalar() ? 0 : key_index, j);
}

}  // namespace detail

/// Left-point discretization of
///
///   F(u)(t) = int_0^t f(u(s)) ds + int_0^t B(u(s)) dW(s),
///
/// v(t_m) = sum_{j<m} f(u(t_j)) dt + sum_{j<m} B(u(t_j)) * dW_j, v(0) = 0.
/// A single-key path is broadcast to every key (scalar noise).
template <ScalarType Scalar>
DiscreteTrajectory<Scalar> apply_F(const DiscreteTrajectory<Scalar>& u, const GLField<Scalar>& f,
                                   const GLField<Scalar>& B, const WienerPath& path) {
  if (!(u.grid == path.grid())) throw ShapeError("apply_F: trajectory and Wiener path grids differ");
  detail::check_noise_keys(u.keys(), path);
  const TimeGrid& grid = u.grid;
  const double dt = grid.dt();
  DiscreteTrajectory<Scalar> v(grid, IndexedVector<Scalar>::zeros(u.keys()));
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    const auto drift = f(u.at(j));
    const auto diff = B(u.at(j));
    const auto prev = v.at(j).values();
    auto next = v.at(j + 1).values();
    const auto fd = drift.values();
    const auto bd = diff.values();
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = prev[i] + fd[i] * dt + bd[i] * detail::noise(path, i, j);
    }
  }
  return v;
}

struct PicardOptions {
  std::size_t num_paths = 1;
  std::uint64_t seed = 0;
  double b = 0.1;
  double tol = 1e-8;
  std::size_t max_iter = 50;
  /// Indices for the sup over alpha; empty selects default_index_grid.
  std::vector<double> index_grid;
  std::size_t threads = 1;
};

struct PicardDiagnostics {
  static constexpr double ratio_floor = 1e-14;

  std::vector<double> distances;
  /// distances[m+1] / distances[m]; empty where distances[m] <= ratio_floor.
  std::vector<std::optional<double>> ratios;

  double b = 0.0;
  double lipschitz_L = 0.0;
  BStar thresholds;
  ContractionConstants constants;
  bool contraction_guaranteed = false;
  bool converged = false;
  std::vector<std::string> warnings;

  std::size_t iterations() const noexcept { return distances.size(); }
};

inline std::vector<std::optional<double>> distance_ratios(std::span<const double> distances) {
  std::vector<std::optional<double>> r;
  for (std::size_t m = 0; m + 1 < distances.size(); ++m) {
    if (distances[m] > PicardDiagnostics::ratio_floor) {
      r.emplace_back(distances[m + 1] / distances[m]);
    } else {
      r.emplace_back(std::nullopt);
    }
  }
  return r;
}

template <ScalarType Scalar>
struct PicardResult {
  TrajectoryEnsemble<Scalar> ensemble;
  PicardDiagnostics diagnostics;
};

/// Banach iteration u <- u0 + F(u) on every path, with the Wiener path of
/// each realization frozen across iterations. Stops once the discretized
/// triple norm of successive differences drops below tol.
///
/// b at or above the smaller threshold is allowed; the diagnostics then carry
/// a "no contraction guarantee" warning.
template <ScalarType Scalar>
PicardResult<Scalar> picard_solve(const IndexedVector<Scalar>& u0, const GLField<Scalar>& f,
                                  const GLField<Scalar>& B, const WeightedScale& fam, const TimeGrid& grid,
                                  const PicardOptions& opt, bool scalar_noise = false) {
  if (!(opt.b > 0.0)) throw DomainError("picard_solve: b must be > 0");
  if (opt.num_paths == 0) throw DomainError("picard_solve: need at least one path");
  if (!(opt.tol > 0.0)) throw DomainError("picard_solve: tol must be > 0");
  if (opt.max_iter == 0) throw DomainError("picard_solve: max_iter must be >= 1");
  if (!same_keys(u0.keys(), fam.keys())) throw ShapeError("picard_solve: u0 keys differ from scale keys");
  const ScaleBounds& bounds = fam.bounds();
  if (!(grid.final_time() < bounds.width() * opt.b)) {
    throw DomainError("picard_solve: grid horizon must be < (hi - lo) b");
  }
  const std::vector<double> index_grid =
      opt.index_grid.empty() ? default_index_grid(bounds) : opt.index_grid;

  PicardDiagnostics diag;
  diag.b = opt.b;
  diag.lipschitz_L = std::max(f.lipschitz_L, B.lipschitz_L);
  if (diag.lipschitz_L > 0.0) {
    diag.thresholds = b_star(diag.lipschitz_L, bounds);
    diag.contraction_guaranteed = opt.b < diag.thresholds.min();
  } else {
    diag.thresholds = {INFINITY, INFINITY};
    diag.contraction_guaranteed = true;
  }
  diag.constants = contraction_constants(diag.lipschitz_L, opt.b, bounds);
  if (!diag.contraction_guaranteed) diag.warnings.emplace_back("no contraction guarantee: b >= min(b*)");

  std::vector<WienerPath> noise;
  noise.reserve(opt.num_paths);
  for (std::size_t p = 0; p < opt.num_paths; ++p) {
    const std::uint64_t s = path_seed(opt.seed, p);
    noise.push_back(scalar_noise ? sample_scalar_wiener(grid, s) : sample_wiener(grid, u0.keys(), s));
  }

  std::vector<DiscreteTrajectory<Scalar>> current(opt.num_paths, DiscreteTrajectory<Scalar>(grid, u0));
  std::vector<DiscreteTrajectory<Scalar>> next = current;

  for (std::size_t m = 0; m < opt.max_iter; ++m) {
    for_each_index(opt.num_paths, opt.threads, [&](std::size_t p) {
      DiscreteTrajectory<Scalar> v = apply_F(current[p], f, B, noise[p]);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        auto& s = v.at(j);
        s += u0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (!is_finite(s[i])) throw NumericError("picard_solve: non-finite iterate", p, s.key(i), j);
        }
      }
      next[p] = std::move(v);
    });
    const double dist = triple_norm_distance(next, current, grid, fam, opt.b, index_grid);
    diag.distances.push_back(dist);
    std::swap(current, next);
    if (dist < opt.tol) {
      diag.converged = true;
      break;
    }
  }
  diag.ratios = distance_ratios(diag.distances);
  if (!diag.converged) diag.warnings.emplace_back("tolerance not reached within max_iter");

  PicardResult<Scalar> out{TrajectoryEnsemble<Scalar>{grid, std::move(current), opt.seed}, std::move(diag)};
  return out;
}

/// Per-iteration table of distances and ratios against the theoretical
/// constants. `within_bound` is ratio <= min(constant) * (1 + mc_tol).
inline Table contraction_report(const PicardDiagnostics& diag, double mc_tol = 0.1) {
  if (diag.distances.size() < 2) throw DomainError("contraction_report: need at least 2 recorded distances");
  const auto ratios = diag.ratios.empty() ? distance_ratios(diag.distances) : diag.ratios;
  Table t({"iteration", "distance", "ratio", "theorem_constant", "proof_constant", "min_constant",
           "within_bound"});
  const double cmin = diag.constants.min();
  for (std::size_t m = 0; m < diag.distances.size(); ++m) {
    std::vector<Cell> row{static_cast<std::int64_t>(m + 1), diag.distances[m]};
    if (m >= 1 && ratios[m - 1]) {
      const double r = *ratios[m - 1];
      row.insert(row.end(), {r, diag.constants.theorem, diag.constants.proof, cmin, r <= cmin * (1.0 + mc_tol)});
    } else {
      row.insert(row.end(), {std::string{}, diag.constants.theorem, diag.constants.proof, cmin, std::string{}});
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace hscale
