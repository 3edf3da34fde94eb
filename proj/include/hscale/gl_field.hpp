#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>

#include "hscale/errors.hpp"
#include "hscale/indexed_vector.hpp"
#include "hscale/rng.hpp"
#include "hscale/scale.hpp"

namespace hscale {

enum class FieldKind { drift, diffusion_diagonal };

inline const char* to_string(FieldKind k) {
  return k == FieldKind::drift ? "drift" : "diffusion";
}

/// A coefficient satisfying the generalized Lipschitz condition
///
///   ||F(u) - F(v)||_b <= L |b - a|^{-1/2} ||u - v||_a,   a < b.
///
/// Diffusion fields are diagonal: eval returns one scalar per key, and the
/// Hilbert-Schmidt norm of the operator is the scale norm of that vector.
/// A zero field may declare L = 0.
template <ScalarType Scalar>
struct GLField {
  using Vector = IndexedVector<Scalar>;

  FieldKind kind = FieldKind::drift;
  double lipschitz_L = 0.0;
  std::function<Vector(const Vector&)> eval;

  Vector operator()(const Vector& v) const { return eval(v); }

  static GLField zero(FieldKind kind) {
    return {kind, 0.0, [](const Vector& v) { return Vector::zeros(v.keys()); }};
  }

  /// f(u) = c, independent of u.
  static GLField constant(FieldKind kind, Vector c) {
    return {kind, 0.0, [c = std::move(c)](const Vector&) { return c; }};
  }

  static GLField linear(FieldKind kind, Scalar factor, double L) {
    return {kind, L, [factor](const Vector& v) { return v * factor; }};
  }
};

struct GlSampleSpec {
  std::size_t num_pairs = 1000;
  std::size_t num_index_pairs = 10;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

struct GlReport {
  double L_hat = 0.0;
  double declared_L = 0.0;
  std::size_t draws = 0;
  std::size_t skipped = 0;
  double worst_alpha = 0.0;
  double worst_beta = 0.0;
  bool passed = false;
};

/// Empirical GL constant: max over sampled pairs (u, v) and index pairs
/// a < b of ||F(u) - F(v)||_b |b - a|^{1/2} / ||u - v||_a.
///
/// Vectors are drawn in coordinates normalized by the weight at the lowest
/// index, so every key contributes at comparable size. Perturbations cycle
/// through dense, single-key and two-key forms; the sparse forms probe the
/// per-key extremal ratios that dense noise averages away.
template <ScalarType Scalar>
GlReport gl_constant_check(const GLField<Scalar>& field, const WeightedScale& fam, const GlSampleSpec& spec) {
  using Vector = IndexedVector<Scalar>;
  if (spec.num_pairs == 0 || spec.num_index_pairs == 0) throw DomainError("gl_constant_check: empty sample");
  const ScaleBounds& bounds = fam.bounds();
  const KeySet& keys = fam.keys();
  const std::size_t n = keys->size();

  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = std::exp(-0.5 * fam.log_weight(i, bounds.lo()));

  Engine eng = make_engine(spec.seed, StreamTag::gl_sample, {});
  StandardNormal<Scalar> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n == 0 ? 0 : n - 1);

  GlReport rep;
  rep.declared_L = field.lipschitz_L;
  for (std::size_t p = 0; p < spec.num_pairs; ++p) {
    Vector u(keys);
    for (std::size_t i = 0; i < n; ++i) u[i] = normal(eng) * scale[i];
    Vector d(keys);
    switch (p % 3) {
      case 0:
        for (std::size_t i = 0; i < n; ++i) d[i] = normal(eng) * scale[i];
        break;
      case 1: {
        const std::size_t i = pick(eng);
        d[i] = normal(eng) * scale[i];
        break;
      }
      default: {
        const std::size_t i = pick(eng);
        const std::size_t j = pick(eng);
        d[i] += normal(eng) * scale[i];
        d[j] += normal(eng) * scale[j];
        break;
      }
    }
    const Vector v = u + d;
    const Vector du = u - v;
    const Vector dF = field(u) - field(v);
    for (std::size_t q = 0; q < spec.num_index_pairs; ++q) {
      const double a = bounds.lo() + bounds.width() * unit(eng);
      const double b = a + (bounds.hi() - a) * (1.0 - unit(eng));
      ++rep.draws;
      const double den = fam.norm(du, a);
      if (!(den > 0.0) || !(b - a > 1e-12)) {
        ++rep.skipped;
        continue;
      }
      const double ratio = fam.norm(dF, b) * std::sqrt(b - a) / den;
      if (!std::isfinite(ratio)) throw NumericError("gl_constant_check: non-finite ratio", 0, 0, p);
      if (ratio > rep.L_hat) {
        rep.L_hat = ratio;
        rep.worst_alpha = a;
        rep.worst_beta = b;
      }
    }
  }
  if (rep.skipped == rep.draws) throw DomainError("gl_constant_check: every sampled pair was degenerate");
  rep.passed = rep.L_hat <= field.lipschitz_L * (1.0 + spec.tol);
  return rep;
}

}  // namespace hscale
