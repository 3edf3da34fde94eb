#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "hscale/errors.hpp"
#include "hscale/indexed_vector.hpp"
#include "hscale/rng.hpp"

namespace hscale::spins {

struct Point {
  Key id = 0;
  std::array<double, 3> pos{0.0, 0.0, 0.0};
};

inline double distance_sq(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a.pos[i] - b.pos[i];
    s += d * d;
  }
  return s;
}

/// A finite sample of a locally finite point set in R^d with stable ids.
/// Immutable; truncations keep ids and order, so id-keyed noise and initial
/// data are shared between a configuration and its sub-configurations.
class Configuration {
 public:
  Configuration(int dim, double region_radius, double intensity, std::uint64_t seed, std::vector<Point> points)
      : dim_(dim), region_radius_(region_radius), intensity_(intensity), seed_(seed), points_(std::move(points)) {
    if (dim < 1 || dim > 3) throw DomainError("Configuration: dim must be 1, 2 or 3");
    if (!(region_radius > 0.0)) throw DomainError("Configuration: region radius must be > 0");
    std::unordered_set<Key> seen;
    std::vector<Key> ids;
    ids.reserve(points_.size());
    norms_.reserve(points_.size());
    for (const Point& p : points_) {
      if (!seen.insert(p.id).second) throw DomainError("Configuration: duplicate point id " + std::to_string(p.id));
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += p.pos[i] * p.pos[i];
      for (int i = dim_; i < 3; ++i) {
        if (p.pos[i] != 0.0) throw DomainError("Configuration: coordinates beyond dim must be zero");
      }
      const double r = std::sqrt(s);
      if (r > region_radius_) throw DomainError("Configuration: point " + std::to_string(p.id) + " outside region");
      norms_.push_back(r);
      ids.push_back(p.id);
    }
    keys_ = make_keys(std::move(ids));
  }

  int dim() const noexcept { return dim_; }
  double region_radius() const noexcept { return region_radius_; }
  double intensity() const noexcept { return intensity_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  /// Euclidean |x| of point i.
  double norm(std::size_t i) const { return norms_[i]; }
  const KeySet& keys() const noexcept { return keys_; }

  /// Points with |x| <= R, in the original order.
  Configuration truncate(double R) const {
    if (!(R > 0.0)) throw DomainError("Configuration::truncate: radius must be > 0");
    std::vector<Point> kept;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (norms_[i] <= R) kept.push_back(points_[i]);
    }
    return Configuration(dim_, R, intensity_, seed_, std::move(kept));
  }

 private:
  int dim_;
  double region_radius_;
  double intensity_;
  std::uint64_t seed_;
  std::vector<Point> points_;
  std::vector<double> norms_;
  KeySet keys_;
};

inline double ball_volume(int dim, double R) {
  switch (dim) {
    case 1: return 2.0 * R;
    case 2: return M_PI * R * R;
    case 3: return 4.0 / 3.0 * M_PI * R * R * R;
    default: throw DomainError("ball_volume: dim must be 1, 2 or 3");
  }
}

/// Homogeneous Poisson process of the given intensity restricted to the
/// centered ball of radius R: Poisson(intensity * vol) points, uniform
/// positions (rejection from the enclosing cube), ids 0..n-1.
inline Configuration sample_poisson(double intensity, double region_radius, int dim, std::uint64_t seed) {
  if (!(intensity > 0.0)) throw DomainError("sample_poisson: intensity must be > 0");
  if (!(region_radius > 0.0)) throw DomainError("sample_poisson: region radius must be > 0");
  if (dim < 1 || dim > 3) throw DomainError("sample_poisson: dim must be 1, 2 or 3");
  Engine eng = make_engine(seed, StreamTag::poisson, {static_cast<std::uint64_t>(dim)});
  std::poisson_distribution<std::int64_t> count(intensity * ball_volume(dim, region_radius));
  const std::int64_t n = count(eng);
  std::uniform_real_distribution<double> coord(-region_radius, region_radius);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double r2 = region_radius * region_radius;
  for (std::int64_t id = 0; id < n; ++id) {
    Point p;
    p.id = id;
    for (;;) {
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        p.pos[i] = coord(eng);
        s += p.pos[i] * p.pos[i];
      }
      if (s <= r2) break;
    }
    pts.push_back(p);
  }
  return Configuration(dim, region_radius, intensity, seed, std::move(pts));
}

/// Snapshot schema: {dim, region_radius, intensity, seed, points: [{id, pos: [..]}]}.
inline nlohmann::ordered_json to_json(const Configuration& cfg) {
  nlohmann::ordered_json j;
  j["dim"] = cfg.dim();
  j["region_radius"] = cfg.region_radius();
  j["intensity"] = cfg.intensity();
  j["seed"] = cfg.seed();
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const Point& p : cfg.points()) {
    nlohmann::ordered_json e;
    e["id"] = p.id;
    auto& pos = e["pos"] = nlohmann::ordered_json::array();
    for (int i = 0; i < cfg.dim(); ++i) pos.push_back(p.pos[i]);
    pts.push_back(std::move(e));
  }
  return j;
}

inline Configuration configuration_from_json(const nlohmann::json& j) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw DomainError(std::string("configuration snapshot: missing field '") + key + "'");
    return j.at(key);
  };
  const int dim = need("dim").get<int>();
  const double radius = need("region_radius").get<double>();
  const double intensity = need("intensity").get<double>();
  const std::uint64_t seed = need("seed").get<std::uint64_t>();
  const auto& arr = need("points");
  if (!arr.is_array()) throw DomainError("configuration snapshot: 'points' must be an array");
  std::vector<Point> pts;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& e = arr[k];
    if (!e.contains("id") || !e.contains("pos")) {
      throw DomainError("configuration snapshot: points[" + std::to_string(k) + "] needs 'id' and 'pos'");
    }
    Point p;
    p.id = e.at("id").get<Key>();
    const auto& pos = e.at("pos");
    if (!pos.is_array() || static_cast<int>(pos.size()) != dim) {
      throw DomainError("configuration snapshot: points[" + std::to_string(k) + "].pos must have dim entries");
    }
    for (int i = 0; i < dim; ++i) p.pos[i] = pos[i].get<double>();
    pts.push_back(p);
  }
  return Configuration(dim, radius, intensity, seed, std::move(pts));
}

}  // namespace hscale::spins
