#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <string>

#include "hscale/indexed_vector.hpp"
#include "hscale/trajectory.hpp"

namespace hscale {

/// 64-bit FNV-1a over the bit patterns of every value (and key) of an
/// ensemble, in path, time, key order. Equal hashes mean bit-identical runs.
template <ScalarType Scalar>
std::uint64_t trajectory_hash(const TrajectoryEnsemble<Scalar>& ens) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_double = [&mix](double x) { mix(std::bit_cast<std::uint64_t>(x)); };
  for (const auto& path : ens.paths) {
    for (Key k : *path.keys()) mix(static_cast<std::uint64_t>(k));
    for (const auto& s : path.states) {
      for (const Scalar& v : s.values()) {
        if constexpr (is_complex<Scalar>::value) {
          mix_double(v.real());
          mix_double(v.imag());
        } else {
          mix_double(v);
        }
      }
    }
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hscale
