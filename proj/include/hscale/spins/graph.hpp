#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hscale/errors.hpp"
#include "hscale/spins/configuration.hpp"

namespace hscale::spins {

/// Geometric graph on a configuration: x ~ y iff 0 < |x - y| < r
/// (strict, self excluded). Neighbor lists hold point indices, ascending.
struct GeometricGraph {
  Configuration cfg;
  double r = 0.0;
  std::vector<std::vector<std::size_t>> neighbors;

  std::size_t degree(std::size_t i) const { return neighbors[i].size(); }
  std::size_t size() const noexcept { return neighbors.size(); }
};

enum class GraphMethod { automatic, brute_force, spatial_hash };

/// Point count above which `automatic` switches to the uniform-grid hash.
inline constexpr std::size_t kSpatialHashThreshold = 1000;

namespace detail {

inline std::vector<std::vector<std::size_t>> brute_force_neighbors(const Configuration& cfg, double r) {
  const std::size_t n = cfg.size();
  const double r2 = r * r;
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance_sq(cfg.point(i), cfg.point(j), cfg.dim()) < r2) {
        nb[i].push_back(j);
        nb[j].push_back(i);
      }
    }
  }
  for (auto& l : nb) std::sort(l.begin(), l.end());
  return nb;
}

inline std::int64_t pack_cell(const std::array<std::int64_t, 3>& c) {
  // 21 bits per axis covers |cell| < 2^20, far beyond desk-scale regions.
  constexpr std::int64_t off = 1 << 20;
  return ((c[0] + off) << 42) | ((c[1] + off) << 21) | (c[2] + off);
}

/// Cells of side r; candidates come from the 3^d surrounding cells.
inline std::vector<std::vector<std::size_t>> hashed_neighbors(const Configuration& cfg, double r) {
  const std::size_t n = cfg.size();
  const int dim = cfg.dim();
  const double r2 = r * r;
  auto cell_of = [&](const Point& p) {
    std::array<std::int64_t, 3> c{0, 0, 0};
    for (int i = 0; i < dim; ++i) c[i] = static_cast<std::int64_t>(std::floor(p.pos[i] / r));
    return c;
  };
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells;
  cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) cells[pack_cell(cell_of(cfg.point(i)))].push_back(i);

  std::vector<std::vector<std::size_t>> nb(n);
  const int span_y = dim >= 2 ? 1 : 0;
  const int span_z = dim >= 3 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = cell_of(cfg.point(i));
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -span_y; dy <= span_y; ++dy) {
        for (int dz = -span_z; dz <= span_z; ++dz) {
          const auto it = cells.find(pack_cell({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == cells.end()) continue;
          for (std::size_t j : it->second) {
            if (j != i && distance_sq(cfg.point(i), cfg.point(j), dim) < r2) nb[i].push_back(j);
          }
        }
      }
    }
    std::sort(nb[i].begin(), nb[i].end());
  }
  return nb;
}

}  // namespace detail

inline GeometricGraph build_graph(const Configuration& cfg, double r, GraphMethod method = GraphMethod::automatic) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("build_graph: r must be finite and > 0");
  GeometricGraph g{cfg, r, {}};
  const bool hash = method == GraphMethod::spatial_hash ||
                    (method == GraphMethod::automatic && cfg.size() > kSpatialHashThreshold);
  g.neighbors = hash ? detail::hashed_neighbors(cfg, r) : detail::brute_force_neighbors(cfg, r);
  return g;
}

}  // namespace hscale::spins
