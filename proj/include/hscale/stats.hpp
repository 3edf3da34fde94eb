#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "hscale/errors.hpp"

namespace hscale {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Unbiased sample variance; 0 for a single observation.
inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline double standard_error(std::span<const double> xs) {
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("loglog_slope: need >= 2 matched points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("loglog_slope: values must be > 0");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw DomainError("loglog_slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace hscale
