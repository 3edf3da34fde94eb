#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hscale/errors.hpp"
#include "hscale/gl_field.hpp"
#include "hscale/indexed_vector.hpp"
#include "hscale/parallel.hpp"
#include "hscale/rng.hpp"
#include "hscale/scale.hpp"
#include "hscale/spins/configuration.hpp"
#include "hscale/spins/constants.hpp"
#include "hscale/spins/families.hpp"
#include "hscale/spins/graph.hpp"
#include "hscale/stats.hpp"
#include "hscale/table.hpp"
#include "hscale/trajectory.hpp"
#include "hscale/wiener.hpp"

namespace hscale::spins {

/// ||q||_alpha = sqrt(sum_x |q_x|^2 exp(-alpha |x|)).
inline double weighted_seq_norm(const RealVector& q, double alpha, const Configuration& cfg) {
  if (!same_keys(q.keys(), cfg.keys())) throw ShapeError("weighted_seq_norm: keys differ from configuration ids");
  if (!(alpha >= 0.0)) throw DomainError("weighted_seq_norm: alpha must be >= 0");
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * q[i] * std::exp(-alpha * cfg.norm(i));
  return std::sqrt(s);
}

inline WeightedScale spin_scale(const Configuration& cfg, const ScaleBounds& bounds) {
  std::vector<double> exps(cfg.size());
  for (std::size_t i = 0; i < cfg.size(); ++i) exps[i] = cfg.norm(i);
  return WeightedScale(bounds, cfg.keys(), std::vector<double>(cfg.size(), 0.0), std::move(exps));
}

namespace detail {

inline RealVector coefficient_sum(const RealVector& q, const GeometricGraph& g, const AdmissibleFamily& fam) {
  if (!same_keys(q.keys(), g.cfg.keys())) throw ShapeError("spin coefficient: keys differ from configuration ids");
  if (fam.range > g.r) throw DomainError("spin coefficient: family range exceeds the graph radius");
  const Configuration& cfg = g.cfg;
  const int dim = cfg.dim();
  RealVector out(q.keys());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Point& x = cfg.point(i);
    double s = fam.include_self ? fam.value(x, x, q[i], q[i], dim) : 0.0;
    for (std::size_t j : g.neighbors[i]) s += fam.value(x, cfg.point(j), q[i], q[j], dim);
    out[i] = s;
  }
  return out;
}

}  // namespace detail

/// f_x(q) = sum_{y ~ x} phi_xy(q_x, q_y) (+ phi_xx if the family includes self).
inline RealVector spin_drift(const RealVector& q, const GeometricGraph& g, const AdmissibleFamily& phi) {
  return detail::coefficient_sum(q, g, phi);
}

/// Diagonal of the diffusion operator: B_x(q) = sum_{y ~ x} psi_xy(q_x, q_y).
/// Against unweighted white noise its Hilbert-Schmidt norm into X_beta equals
/// the beta-norm of this vector.
inline RealVector spin_diffusion(const RealVector& q, const GeometricGraph& g, const AdmissibleFamily& psi) {
  return detail::coefficient_sum(q, g, psi);
}

/// (diag(d) sigma)_x = d_x sigma_x.
inline RealVector apply_diagonal(const RealVector& d, const RealVector& sigma) {
  if (!same_keys(d.keys(), sigma.keys())) throw ShapeError("apply_diagonal: key sets differ");
  RealVector out(d.keys());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i] * sigma[i];
  return out;
}

/// Drift and diffusion as GL fields, each declaring L = sqrt(L2) from its own C.
inline std::pair<GLField<double>, GLField<double>> spin_fields(const GeometricGraph& g, const AdmissibleFamily& phi,
                                                               const AdmissibleFamily& psi,
                                                               const ScaleBounds& bounds) {
  const double Lf = density_constants(g, bounds, phi.lipschitz_C).L();
  const double Lb = density_constants(g, bounds, psi.lipschitz_C).L();
  GLField<double> f{FieldKind::drift, Lf, [g, phi](const RealVector& q) { return spin_drift(q, g, phi); }};
  GLField<double> b{FieldKind::diffusion_diagonal, Lb,
                    [g, psi](const RealVector& q) { return spin_diffusion(q, g, psi); }};
  return {std::move(f), std::move(b)};
}

enum class InitialSpins { random_normal, constant };

/// q0 keyed by point id: N(0,1) from the stream (seed, id), or a constant.
/// Shared ids get identical values on every sub-configuration.
inline RealVector initial_spins(const Configuration& cfg, std::uint64_t seed,
                                InitialSpins mode = InitialSpins::random_normal, double value = 1.0) {
  RealVector q(cfg.keys());
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    if (mode == InitialSpins::constant) {
      q[i] = value;
    } else {
      Engine eng = make_engine(seed, StreamTag::initial_spin, {static_cast<std::uint64_t>(cfg.point(i).id)});
      q[i] = std::normal_distribution<double>(0.0, 1.0)(eng);
    }
  }
  return q;
}

struct SpinDynamics {
  AdmissibleFamily phi;
  AdmissibleFamily psi;
};

/// Euler-Maruyama for dq_x = f_x(q) dt + B_x(q) dW_x with independent per-id
/// noise. Path p uses path_seed(seed, p), so the noise of any id is the same
/// across configurations sharing that id.
inline TrajectoryEnsemble<double> em_simulate_spins(const RealVector& q0, const GeometricGraph& g,
                                                    const SpinDynamics& dyn, const TimeGrid& grid,
                                                    std::uint64_t seed, std::size_t num_paths,
                                                    std::size_t threads = 1) {
  if (num_paths == 0) throw DomainError("em_simulate_spins: need at least one path");
  if (!same_keys(q0.keys(), g.cfg.keys())) throw ShapeError("em_simulate_spins: q0 keys differ from configuration ids");
  TrajectoryEnsemble<double> ens{grid, std::vector<DiscreteTrajectory<double>>(num_paths, {grid, q0}), seed};
  const double dt = grid.dt();
  for_each_index(num_paths, threads, [&](std::size_t p) {
    const WienerPath w = sample_wiener(grid, g.cfg.keys(), path_seed(seed, p));
    auto& traj = ens.paths[p];
    for (std::size_t j = 0; j < grid.steps(); ++j) {
      const RealVector& q = traj.at(j);
      const RealVector f = spin_drift(q, g, dyn.phi);
      const RealVector b = spin_diffusion(q, g, dyn.psi);
      RealVector& nxt = traj.at(j + 1);
      for (std::size_t i = 0; i < q.size(); ++i) {
        nxt[i] = q[i] + f[i] * dt + b[i] * w.increment(i, j);
        if (!std::isfinite(nxt[i])) throw NumericError("em_simulate_spins: non-finite spin", p, q.key(i), j + 1);
      }
    }
  });
  return ens;
}

struct TruncationParams {
  SpinDynamics dynamics;
  TimeGrid grid{1.0, 0.1};
  std::uint64_t seed = 0;
  std::size_t num_paths = 1;
  InitialSpins initial = InitialSpins::random_normal;
  std::size_t threads = 1;
};

struct TruncationResult {
  std::vector<double> radii;
  std::vector<std::size_t> point_counts;
  std::size_t observed_points = 0;
  /// D(R_i, R_{i+1}) and its standard error, i = 0..m-2.
  std::vector<double> d_next, d_next_se;
  /// D(R_i, R_m) and its standard error, i = 0..m-2.
  std::vector<double> d_last, d_last_se;
  Table table;
};

namespace detail {

/// D = max_x mean_p |a_p,x - b_p,x|^2 and the standard error of the mean at the argmax.
inline std::pair<double, double> coupled_discrepancy(const std::vector<std::vector<double>>& a,
                                                     const std::vector<std::vector<double>>& b) {
  double best = 0.0, best_se = 0.0;
  const std::size_t n_obs = a.empty() ? 0 : a.front().size();
  std::vector<double> sq(a.size());
  for (std::size_t x = 0; x < n_obs; ++x) {
    for (std::size_t p = 0; p < a.size(); ++p) {
      const double d = a[p][x] - b[p][x];
      sq[p] = d * d;
    }
    const double m = mean(sq);
    if (m > best) {
      best = m;
      best_se = standard_error(sq);
    }
  }
  return {best, best_se};
}

}  // namespace detail

/// Solutions on nested truncations {|x| <= R_i} of one master configuration,
/// all driven by the same id-keyed noise and initial spins, compared at the
/// final time on the observation window |x| <= R0.
inline TruncationResult truncation_convergence(const Configuration& master, std::vector<double> radii, double R0,
                                               double graph_r, const TruncationParams& prm) {
  if (radii.size() < 2) throw DomainError("truncation_convergence: need at least two radii");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    if (!(radii[i] < radii[i + 1])) throw DomainError("truncation_convergence: radii must be strictly increasing");
  }
  if (!(R0 > 0.0) || !(R0 < radii.front())) {
    throw DomainError("truncation_convergence: observation radius R0 must be in (0, R_1)");
  }
  if (radii.back() > master.region_radius()) {
    throw DomainError("truncation_convergence: largest radius exceeds the master configuration region");
  }

  std::vector<Key> observed;
  for (std::size_t i = 0; i < master.size(); ++i) {
    if (master.norm(i) <= R0) observed.push_back(master.point(i).id);
  }

  const std::size_t m = radii.size();
  // final[i][p][x]: spin of observed point x on path p for truncation i.
  std::vector<std::vector<std::vector<double>>> final_spins(m);
  TruncationResult res;
  res.radii = radii;
  res.observed_points = observed.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Configuration sub = master.truncate(radii[i]);
    res.point_counts.push_back(sub.size());
    const GeometricGraph g = build_graph(sub, graph_r);
    const RealVector q0 = initial_spins(sub, prm.seed, prm.initial);
    const auto ens = em_simulate_spins(q0, g, prm.dynamics, prm.grid, prm.seed, prm.num_paths, prm.threads);
    std::vector<std::size_t> idx;
    for (Key id : observed) idx.push_back(q0.find(id));
    auto& fi = final_spins[i];
    fi.assign(prm.num_paths, std::vector<double>(observed.size()));
    for (std::size_t p = 0; p < prm.num_paths; ++p) {
      const RealVector& qT = ens.paths[p].final_state();
      for (std::size_t x = 0; x < idx.size(); ++x) fi[p][x] = qT[idx[x]];
    }
  }

  res.table = Table({"radius", "next_radius", "n_points", "d_next", "d_next_se", "d_last", "d_last_se"});
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const auto [dn, dn_se] = detail::coupled_discrepancy(final_spins[i], final_spins[i + 1]);
    const auto [dl, dl_se] = detail::coupled_discrepancy(final_spins[i], final_spins[m - 1]);
    res.d_next.push_back(dn);
    res.d_next_se.push_back(dn_se);
    res.d_last.push_back(dl);
    res.d_last_se.push_back(dl_se);
    res.table.add_row({radii[i], radii[i + 1], static_cast<std::int64_t>(res.point_counts[i]), dn, dn_se, dl, dl_se});
  }
  return res;
}

}  // namespace hscale::spins
