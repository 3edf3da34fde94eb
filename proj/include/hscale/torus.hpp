#pragma once

// Transport SPDE du = c u_x dW on the one-dimensional torus, in truncated
// Fourier coordinates. Each mode solves du(k) = i c k u(k) dW with a single
// real Brownian motion W shared by all modes, and
//
//   u(t, k) = exp(t c^2 k^2 / 2) exp(i c k W(t)) u(0, k).
//
// The natural scale is ||v||_a^2 = sum_k |v(k)|^2 exp(a k^2), which shrinks
// as a grows; it is flipped to the library's increasing orientation by
// a -> a_hi - a.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hscale/errors.hpp"
#include "hscale/gl_field.hpp"
#include "hscale/indexed_vector.hpp"
#include "hscale/parallel.hpp"
#include "hscale/scale.hpp"
#include "hscale/trajectory.hpp"
#include "hscale/wiener.hpp"

namespace hscale::torus {

using Complex = std::complex<double>;

/// Largest exponent accepted before exp() is considered to overflow.
inline constexpr double kMaxExponent = 700.0;

inline KeySet mode_keys(int K) {
  if (K < 1) throw DomainError("torus: mode cutoff K must be >= 1");
  std::vector<Key> keys;
  keys.reserve(2 * static_cast<std::size_t>(K) + 1);
  for (int k = -K; k <= K; ++k) keys.push_back(k);
  return make_keys(std::move(keys));
}

/// Truncated Fourier coefficients u(k), |k| <= K.
struct FourierState {
  int K = 0;
  ComplexVector amplitudes;

  explicit FourierState(int cutoff) : K(cutoff), amplitudes(mode_keys(cutoff)) {}

  Complex& operator[](int k) { return amplitudes[static_cast<std::size_t>(k + K)]; }
  const Complex& operator[](int k) const { return amplitudes[static_cast<std::size_t>(k + K)]; }

  /// u(k) = exp(-alpha0 k^2 / 2); lies in every user-scale space with index < alpha0.
  static FourierState gaussian(int cutoff, double alpha0) {
    FourierState s(cutoff);
    for (int k = -cutoff; k <= cutoff; ++k) s[k] = std::exp(-0.5 * alpha0 * k * k);
    return s;
  }

  bool is_real_field(double tol = 0.0) const {
    for (int k = 1; k <= K; ++k) {
      if (std::abs((*this)[-k] - std::conj((*this)[k])) > tol) return false;
    }
    return std::abs((*this)[0].imag()) <= tol;
  }
};

inline int mode_of(const ComplexVector& v, std::size_t i) { return static_cast<int>(v.key(i)); }

/// User-parametrized scale a in [lo, hi] with weights exp(a k^2).
class TorusScale {
 public:
  TorusScale(double user_lo, double user_hi) : user_lo_(user_lo), user_hi_(user_hi) {
    if (!(user_lo > 0.0)) throw DomainError("TorusScale: user indices must be > 0");
    if (!(user_lo < user_hi)) throw DomainError("TorusScale: require lower index < upper index");
  }

  double user_lo() const noexcept { return user_lo_; }
  double user_hi() const noexcept { return user_hi_; }

  double to_internal(double user_alpha) const { return user_hi_ - user_alpha; }
  double to_user(double internal_alpha) const { return user_hi_ - internal_alpha; }
  ScaleBounds internal_bounds() const { return ScaleBounds(0.0, user_hi_ - user_lo_); }

  WeightedScale family(int K) const {
    const KeySet keys = mode_keys(K);
    std::vector<double> offsets, exponents;
    for (Key k : *keys) {
      const double k2 = static_cast<double>(k * k);
      offsets.push_back(user_hi_ * k2);
      exponents.push_back(k2);
    }
    return WeightedScale(internal_bounds(), keys, std::move(offsets), std::move(exponents));
  }

  /// sqrt(sum |v(k)|^2 exp(user_alpha k^2)).
  double user_norm(const ComplexVector& v, double user_alpha) const {
    return family(static_cast<int>(v.size() / 2)).norm(v, to_internal(user_alpha));
  }

 private:
  double user_lo_;
  double user_hi_;
};

inline void check_exponent(double e, const char* who) {
  if (e > kMaxExponent) throw std::overflow_error(std::string(who) + ": exponent exceeds overflow guard");
}

/// exp(t c^2 k^2): the pathwise-deterministic growth of |u(t,k)|^2.
inline double modulus_factor(int k, double c, double t) {
  if (!(t >= 0.0)) throw DomainError("modulus_factor: t must be >= 0");
  const double e = t * c * c * static_cast<double>(k) * k;
  check_exponent(e, "modulus_factor");
  return std::exp(e);
}

inline Complex exact_mode(Complex u0k, int k, double c, double t, double Wt) {
  if (!(t >= 0.0)) throw DomainError("exact_mode: t must be >= 0");
  const double kk = static_cast<double>(k);
  const double e = t * c * c * kk * kk;
  check_exponent(e, "exact_mode");
  return std::exp(0.5 * e) * std::polar(1.0, c * kk * Wt) * u0k;
}

/// (alpha - beta) / c^2: lifetime in the user space X_beta of data from X_alpha.
inline double lifetime(double alpha, double beta, double c) {
  if (!(beta > 0.0)) throw DomainError("torus lifetime: beta must be > 0");
  if (!(alpha > beta)) throw DomainError("torus lifetime: require alpha > beta");
  if (c == 0.0) throw DomainError("torus lifetime: c must be nonzero");
  return (alpha - beta) / (c * c);
}

/// sum_{|k|<=K} exp((t c^2 + beta - alpha) k^2) = ||u(t)||^2_beta for
/// u(0, k) = exp(-alpha k^2 / 2), evaluated in one exponent per mode.
inline double partial_norm_sq(double alpha, double beta, double c, double t, int K) {
  if (K < 0) throw DomainError("partial_norm_sq: K must be >= 0");
  const double rate = t * c * c + beta - alpha;
  double s = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double e = rate * k * k;
    check_exponent(e, "partial_norm_sq");
    s += std::exp(e);
  }
  return s;
}

inline void require_scalar_noise(const WienerPath& path, const TimeGrid& grid) {
  if (!path.is_scalar()) throw ShapeError("torus: the driving Wiener path must have a single key");
  if (!(path.grid() == grid)) throw ShapeError("torus: Wiener path grid differs from time grid");
}

/// Euler-Maruyama per mode: u_{j+1}(k) = u_j(k) (1 + i c k dW_j).
inline DiscreteTrajectory<Complex> em_simulate(const FourierState& u0, double c, const TimeGrid& grid,
                                               const WienerPath& path, std::size_t path_index = 0) {
  require_scalar_noise(path, grid);
  DiscreteTrajectory<Complex> out(grid, u0.amplitudes);
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    const double dw = path.increment(0, j);
    const auto prev = out.at(j).values();
    auto next = out.at(j + 1).values();
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double ck = c * static_cast<double>(mode_of(u0.amplitudes, i));
      next[i] = prev[i] * Complex(1.0, ck * dw);
      if (!is_finite(next[i])) {
        throw NumericError("torus em_simulate: non-finite amplitude", path_index, u0.amplitudes.key(i), j + 1);
      }
    }
  }
  return out;
}

/// Closed-form solution sampled on the grid, with W(t_j) the cumulative sum
/// of the same increments the integrator consumes.
inline DiscreteTrajectory<Complex> exact_trajectory(const FourierState& u0, double c, const TimeGrid& grid,
                                                    const WienerPath& path) {
  require_scalar_noise(path, grid);
  const std::vector<double> W = path.cumulative(0);
  DiscreteTrajectory<Complex> out(grid, u0.amplitudes);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    auto vals = out.at(j).values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      vals[i] = exact_mode(u0.amplitudes[i], mode_of(u0.amplitudes, i), c, grid.time(j), W[j]);
    }
  }
  return out;
}

/// (B v)(k) = i c k v(k). Noise space is R, so the Hilbert-Schmidt norm of
/// B(v) is the scale norm of the image. The declared constant |c| e^{-1/2}
/// is sup_{x>0} sqrt(x) e^{-x/2} |c| with x = (a - b) k^2.
inline GLField<Complex> B_field(double c) {
  const double L = std::abs(c) * std::exp(-0.5);
  return {FieldKind::diffusion_diagonal, L, [c](const ComplexVector& v) {
            ComplexVector out(v.keys());
            for (std::size_t i = 0; i < v.size(); ++i) {
              out[i] = Complex(0.0, c * static_cast<double>(v.key(i))) * v[i];
            }
            return out;
          }};
}

/// RMS over paths of sqrt(sum_k |u_EM(T,k) - u(T,k)|^2).
inline double em_strong_error(const FourierState& u0, double c, const TimeGrid& grid, std::size_t num_paths,
                              std::uint64_t seed, std::size_t threads = 1) {
  if (num_paths == 0) throw DomainError("em_strong_error: need at least one path");
  std::vector<double> sq(num_paths);
  for_each_index(num_paths, threads, [&](std::size_t p) {
    const WienerPath w = sample_scalar_wiener(grid, path_seed(seed, p));
    const auto em = em_simulate(u0, c, grid, w, p);
    const auto ex = exact_trajectory(u0, c, grid, w);
    double s = 0.0;
    for (std::size_t i = 0; i < u0.amplitudes.size(); ++i) s += std::norm(em.final_state()[i] - ex.final_state()[i]);
    sq[p] = s;
  });
  double acc = 0.0;
  for (double s : sq) acc += s;
  return std::sqrt(acc / static_cast<double>(num_paths));
}

}  // namespace hscale::torus
