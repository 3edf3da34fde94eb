#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hscale/errors.hpp"
#include "hscale/rng.hpp"
#include "hscale/spins/configuration.hpp"

namespace hscale::spins {

/// Pair kernel V_xy(s, t) with finite range and the two-sided Lipschitz bound
///
///   |V(s', t') - V(s'', t'')| <= C (|s' - s''| + |t' - t''|).
///
/// `value` enforces the range; the kernel itself need not.
struct AdmissibleFamily {
  using Kernel = std::function<double(const Point& x, const Point& y, double s, double t)>;

  std::string name;
  Kernel kernel;
  double range = 1.0;
  double lipschitz_C = 0.0;
  /// Adds the y = x term to the coefficient sums.
  bool include_self = false;

  double value(const Point& x, const Point& y, double s, double t, int dim) const {
    if (!(distance_sq(x, y, dim) < range * range)) return 0.0;
    return kernel(x, y, s, t);
  }
};

struct FamilyParams {
  double J = 0.05;
  double clip = 1.0;
  double sigma0 = 0.1;
  double r = 1.0;
};

inline const std::vector<std::string>& builtin_family_names() {
  static const std::vector<std::string> names{"tanh-coupling", "clipped-linear", "constant-diffusion-edge"};
  return names;
}

/// tanh-coupling:  J tanh(t - s),            C = 2|J|
/// clipped-linear: J clamp(t - s, -M, M),    C = 2|J|
/// constant-diffusion-edge: sigma0,          C = 0 (bounded, constant)
inline AdmissibleFamily builtin_family(std::string_view name, const FamilyParams& p) {
  if (!(p.r > 0.0)) throw DomainError("builtin_family: range r must be > 0");
  AdmissibleFamily f;
  f.name = std::string(name);
  f.range = p.r;
  if (name == "tanh-coupling") {
    const double J = p.J;
    f.kernel = [J](const Point&, const Point&, double s, double t) { return J * std::tanh(t - s); };
    f.lipschitz_C = 2.0 * std::abs(J);
  } else if (name == "clipped-linear") {
    if (!(p.clip > 0.0)) throw DomainError("builtin_family: clipped-linear needs clip > 0");
    const double J = p.J;
    const double M = p.clip;
    f.kernel = [J, M](const Point&, const Point&, double s, double t) { return J * std::clamp(t - s, -M, M); };
    f.lipschitz_C = 2.0 * std::abs(J);
  } else if (name == "constant-diffusion-edge") {
    const double s0 = p.sigma0;
    f.kernel = [s0](const Point&, const Point&, double, double) { return s0; };
    f.lipschitz_C = 0.0;
  } else {
    std::string msg = "builtin_family: unknown family '" + std::string(name) + "'; valid names:";
    for (const auto& n : builtin_family_names()) msg += " " + n;
    throw DomainError(msg);
  }
  return f;
}

/// Largest sampled ratio |V(s',t') - V(s'',t'')| / (|s'-s''| + |t'-t''|)
/// for the pair (x, y). Spins are drawn from N(0, spread^2).
inline double sampled_lipschitz_ratio(const AdmissibleFamily& f, const Point& x, const Point& y, int dim,
                                      std::size_t samples, std::uint64_t seed, double spread = 3.0) {
  Engine eng = make_engine(seed, StreamTag::gl_sample, {0x4c69ULL});
  std::normal_distribution<double> z(0.0, spread);
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double s1 = z(eng), t1 = z(eng), s2 = z(eng), t2 = z(eng);
    const double den = std::abs(s1 - s2) + std::abs(t1 - t2);
    if (!(den > 0.0)) continue;
    best = std::max(best, std::abs(f.value(x, y, s1, t1, dim) - f.value(x, y, s2, t2, dim)) / den);
  }
  return best;
}

}  // namespace hscale::spins
