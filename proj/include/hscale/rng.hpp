#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace hscale {

/// Stream tags keep the seed derivations of unrelated consumers apart.
enum class StreamTag : std::uint64_t {
  path = 0x70617468,
  wiener = 0x77696e65,
  initial_spin = 0x7370696e,
  poisson = 0x706f6973,
  gl_sample = 0x676c7361,
};

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Derives a child seed from a parent seed and a list of integer coordinates
/// (path index, key, ...). Pure function of its inputs.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag,
                                           std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t h = detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(tag)));
  for (std::uint64_t c : coords) h = detail::splitmix64(h ^ detail::splitmix64(c));
  return h;
}

/// Engine used everywhere in the library. Each logical stream gets its own
/// engine seeded via derive_seed, so results never depend on draw order
/// between streams.
using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, StreamTag tag,
                          std::initializer_list<std::uint64_t> coords) {
  return Engine{derive_seed(seed, tag, coords)};
}

template <class Scalar>
struct StandardNormal;

template <>
struct StandardNormal<double> {
  std::normal_distribution<double> dist{0.0, 1.0};
  double operator()(Engine& eng) { return dist(eng); }
};

/// Circular complex normal with E|z|^2 = 1.
template <>
struct StandardNormal<std::complex<double>> {
  std::normal_distribution<double> dist{0.0, 1.0};
  std::complex<double> operator()(Engine& eng) {
    const double re = dist(eng);
    const double im = dist(eng);
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }
};

}  // namespace hscale
