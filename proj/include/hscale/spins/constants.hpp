#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "hscale/errors.hpp"
#include "hscale/scale.hpp"
#include "hscale/spins/graph.hpp"

namespace hscale::spins {

/// Density and Lipschitz constants of a configuration and interaction range.
struct DerivedConstants {
  /// max_x n_x / (1 + |x|)^{1/2}; the density bound holds with equality at argmax.
  double a_gamma = 0.0;
  std::size_t argmax = 0;
  /// sum_x n_x^2 exp(-lo |x|)
  double c1 = 0.0;
  /// a^2 [1 + exp(hi r) (1 + r)^{1/2}]
  double c2 = 0.0;
  /// 3 C^2 (c1 + c2) exp(hi - lo - 1)
  double L2 = 0.0;
  /// 4 C^2 a^2 (1 + r)
  double mu = 0.0;

  double L() const { return std::sqrt(L2); }
};

inline double interaction_mu(double C, double a, double r) { return 4.0 * C * C * a * a * (1.0 + r); }

/// Step length of the uniqueness chaining argument:
/// 1 / (4 exp(beta r + 1) mu (hi + 1) b). Infinite when mu = 0.
inline double uniqueness_time_step(double mu, double beta, double r, double hi, double b) {
  if (mu == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (4.0 * std::exp(beta * r + 1.0) * mu * (hi + 1.0) * b);
}

inline DerivedConstants density_constants(const GeometricGraph& g, const ScaleBounds& bounds, double C) {
  const Configuration& cfg = g.cfg;
  if (cfg.empty()) throw DomainError("density_constants: empty configuration");
  if (!(C >= 0.0)) throw DomainError("density_constants: C must be >= 0");
  const double r = g.r;
  DerivedConstants out;
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const double n = static_cast<double>(g.degree(i));
    const double a = n / std::sqrt(1.0 + cfg.norm(i));
    if (a > out.a_gamma) {
      out.a_gamma = a;
      out.argmax = i;
    }
    out.c1 += n * n * std::exp(-bounds.lo() * cfg.norm(i));
  }
  const double a2 = out.a_gamma * out.a_gamma;
  // N_y = sum_{x ~ y} n_x obeys N_y <= a^2 (1+r)^{1/2} (1+|y|), which is what
  // makes c2 cover the transposed sum.
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    double Ny = 0.0;
    for (std::size_t j : g.neighbors[i]) Ny += static_cast<double>(g.degree(j));
    if (Ny > a2 * std::sqrt(1.0 + r) * (1.0 + cfg.norm(i)) * (1.0 + 1e-12)) {
      throw std::logic_error("density_constants: neighbor-degree sum exceeds its density bound");
    }
  }
  out.c2 = a2 * (1.0 + std::exp(bounds.hi() * r) * std::sqrt(1.0 + r));
  out.L2 = 3.0 * C * C * (out.c1 + out.c2) * std::exp(bounds.width() - 1.0);
  out.mu = interaction_mu(C, out.a_gamma, r);
  return out;
}

}  // namespace hscale::spins
