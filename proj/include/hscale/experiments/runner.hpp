#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hscale/experiments/config.hpp"
#include "hscale/experiments/emit.hpp"
#include "hscale/gl_field.hpp"
#include "hscale/hash.hpp"
#include "hscale/picard.hpp"
#include "hscale/scale.hpp"
#include "hscale/spins/configuration.hpp"
#include "hscale/spins/constants.hpp"
#include "hscale/spins/dynamics.hpp"
#include "hscale/spins/families.hpp"
#include "hscale/spins/graph.hpp"
#include "hscale/stats.hpp"
#include "hscale/table.hpp"
#include "hscale/torus.hpp"
#include "hscale/trajectory.hpp"

#ifndef HSCALE_VERSION
#define HSCALE_VERSION "0.1.0-unknown"
#endif

namespace hscale::experiments {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

/// A pass/fail verdict. Soft checks are reported but never change the exit code.
struct Check {
  std::string name;
  bool passed = false;
  bool hard = true;
  std::string detail;
};

struct NamedTable {
  std::string name;
  Table table;
};

struct RunRecord {
  std::string experiment;
  std::string version = HSCALE_VERSION;
  ordered_json config;
  double wall_time_s = 0.0;
  /// tables.front() is the primary table.
  std::vector<NamedTable> tables;
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  int exit_code() const {
    for (const auto& c : checks) {
      if (c.hard && !c.passed) return kExitCheckFailed;
    }
    return kExitOk;
  }

  const Table& table(const std::string& name) const {
    for (const auto& t : tables) {
      if (t.name == name) return t.table;
    }
    throw ShapeError("RunRecord: no table named '" + name + "'");
  }

  const Check& check(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return c;
    }
    throw ShapeError("RunRecord: no check named '" + name + "'");
  }
};

namespace detail {

/// Short form for check messages; tables keep full precision.
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline void add_check(RunRecord& rec, std::string name, bool passed, std::string detail, bool hard = true) {
  rec.checks.push_back({std::move(name), passed, hard, std::move(detail)});
}

inline std::int64_t as_int(std::size_t n) { return static_cast<std::int64_t>(n); }

// ---------------------------------------------------------------- torus

inline void run_torus_exact(const Params& p, std::uint64_t seed, std::size_t threads, RunRecord& rec) {
  const int K = static_cast<int>(p.integer("K"));
  const double c = p.num("c");
  const std::size_t N = p.size("N");
  const TimeGrid grid = TimeGrid::from_steps(p.num("T"), p.size("n_times"));
  const auto u0 = torus::FourierState::gaussian(K, p.num("u0_alpha"));
  const std::size_t n_modes = u0.amplitudes.size();
  const std::size_t n_times = grid.steps();

  // ratio[p][j * n_modes + i] for grid times j = 1..n
  std::vector<std::vector<double>> ratio(N, std::vector<double>(n_times * n_modes));
  for_each_index(N, threads, [&](std::size_t path) {
    const WienerPath w = sample_scalar_wiener(grid, path_seed(seed, path));
    const auto ex = torus::exact_trajectory(u0, c, grid, w);
    for (std::size_t j = 1; j <= n_times; ++j) {
      for (std::size_t i = 0; i < n_modes; ++i) {
        ratio[path][(j - 1) * n_modes + i] = std::norm(ex.at(j)[i]) / std::norm(u0.amplitudes[i]);
      }
    }
  });

  Table t({"t", "k", "expected", "ratio_path0", "max_rel_error"});
  double worst = 0.0;
  for (std::size_t j = 1; j <= n_times; ++j) {
    for (std::size_t i = 0; i < n_modes; ++i) {
      const int k = torus::mode_of(u0.amplitudes, i);
      const double expected = torus::modulus_factor(k, c, grid.time(j));
      double err = 0.0;
      for (std::size_t path = 0; path < N; ++path) {
        err = std::max(err, std::abs(ratio[path][(j - 1) * n_modes + i] - expected) / expected);
      }
      worst = std::max(worst, err);
      t.add_row({grid.time(j), static_cast<std::int64_t>(k), expected, ratio[0][(j - 1) * n_modes + i], err});
    }
  }
  rec.tables.push_back({"modulus", std::move(t)});
  const double tol = p.num("rel_tol");
  add_check(rec, "modulus_identity", worst <= tol, "max relative error " + fmt(worst) + " <= " + fmt(tol));
}

inline void run_torus_lifetime(const Params& p, RunRecord& rec) {
  const double alpha = p.num("alpha"), beta = p.num("beta"), c = p.num("c");
  const int K = static_cast<int>(p.integer("K"));
  const double stable_tol = p.num("stable_tol"), growth = p.num("growth_factor");
  const double life = torus::lifetime(alpha, beta, c);
  Table t({"t", "lifetime", "K", "partial_K", "partial_2K", "abs_change", "ratio", "regime", "pass"});
  bool all = true;
  std::size_t checked = 0;
  for (double time : p.nums("times")) {
    const double sK = torus::partial_norm_sq(alpha, beta, c, time, K);
    const double s2K = torus::partial_norm_sq(alpha, beta, c, time, 2 * K);
    const double change = std::abs(s2K - sK);
    const double ratio = s2K / sK;
    std::string regime = "critical";
    bool pass = true;
    if (time < life) {
      regime = "bounded";
      pass = change < stable_tol;
    } else if (time > life) {
      regime = "divergent";
      pass = ratio > growth;
    }
    if (regime != "critical") ++checked;
    all = all && pass;
    t.add_row({time, life, static_cast<std::int64_t>(K), sK, s2K, change, ratio, regime, pass});
  }
  rec.tables.push_back({"lifetime", std::move(t)});
  if (checked == 0) rec.warnings.emplace_back("every requested time equals the lifetime; nothing was checked");
  add_check(rec, "lifetime_transition", all,
            "bounded: |S_2K - S_K| < " + fmt(stable_tol) + "; divergent: S_2K / S_K > " + fmt(growth) +
                "; lifetime " + fmt(life));
}

inline void run_torus_em_order(const Params& p, std::uint64_t seed, std::size_t threads, RunRecord& rec) {
  const int K = static_cast<int>(p.integer("K"));
  const double c = p.num("c"), T = p.num("T");
  const std::size_t N = p.size("N");
  const auto u0 = torus::FourierState::gaussian(K, p.num("u0_alpha"));
  const auto dts = p.nums("dts");
  std::vector<double> errs;
  Table t({"dt", "steps", "rms_error"});
  for (double dt : dts) {
    const TimeGrid grid(T, dt);
    const double e = torus::em_strong_error(u0, c, grid, N, seed, threads);
    errs.push_back(e);
    t.add_row({grid.dt(), as_int(grid.steps()), e});
  }
  const double slope = loglog_slope(dts, errs);
  const double target = p.num("slope_target"), tol = p.num("slope_tol");
  const bool pass = std::abs(slope - target) <= tol;
  Table s({"slope", "slope_target", "slope_tol", "pass"});
  s.add_row({slope, target, tol, pass});
  rec.tables.push_back({"strong_error", std::move(t)});
  rec.tables.push_back({"summary", std::move(s)});
  add_check(rec, "strong_order", pass, "fitted slope " + fmt(slope) + ", expected " + fmt(target) + " +- " + fmt(tol));
}

// ---------------------------------------------------------------- spins

inline spins::Configuration load_configuration(const Params& s, std::uint64_t seed, double region) {
  const std::string file = s.str("configuration_file");
  if (file.empty()) {
    return spins::sample_poisson(s.num("intensity"), region, static_cast<int>(s.integer("dim")), seed);
  }
  std::ifstream in(file);
  if (!in) throw ConfigError(s.path("configuration_file"), "cannot open '" + file + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(s.path("configuration_file"), "invalid JSON in '" + file + "': " + e.what());
  }
  return spins::configuration_from_json(doc);
}

inline spins::SpinDynamics spin_dynamics(const Params& s) {
  spins::FamilyParams fp;
  fp.J = s.num("J");
  fp.clip = s.num("clip");
  fp.sigma0 = s.num("sigma0");
  fp.r = s.num("r");
  spins::SpinDynamics dyn{spins::builtin_family(s.str("phi"), fp), spins::builtin_family(s.str("psi"), fp)};
  dyn.phi.include_self = dyn.psi.include_self = s.flag("include_self");
  return dyn;
}

inline spins::InitialSpins initial_mode(const Params& s) {
  return s.str("initial") == "constant" ? spins::InitialSpins::constant : spins::InitialSpins::random_normal;
}

inline ScaleBounds spin_bounds(const Params& s) { return ScaleBounds(s.num("alpha_lo"), s.num("alpha_hi")); }

inline std::size_t edge_count(const spins::GeometricGraph& g) {
  std::size_t deg = 0;
  for (std::size_t i = 0; i < g.size(); ++i) deg += g.degree(i);
  return deg / 2;
}

inline void require_points(const spins::Configuration& cfg, const std::string& path) {
  if (cfg.empty()) throw ConfigError(path, "the configuration has no points");
}

inline void run_spins_sim(const Params& p, std::uint64_t seed, std::size_t threads, RunRecord& rec) {
  const auto cfg = load_configuration(p, seed, p.num("region"));
  require_points(cfg, p.path("region"));
  const std::string snap = p.str("snapshot_out");
  if (!snap.empty()) write_file(snap, spins::to_json(cfg).dump(1) + "\n");
  const auto g = spins::build_graph(cfg, p.num("r"));
  const auto dyn = spin_dynamics(p);
  const auto bounds = spin_bounds(p);
  const auto [f, B] = spins::spin_fields(g, dyn.phi, dyn.psi, bounds);
  const auto q0 = spins::initial_spins(cfg, seed, initial_mode(p), p.num("initial_value"));
  const TimeGrid grid(p.num("T"), p.num("dt"));
  const std::size_t N = p.size("N");
  const auto ens = spins::em_simulate_spins(q0, g, dyn, grid, seed, N, threads);

  Table t({"t", "mean_spin", "mean_square", "max_abs"});
  const double count = static_cast<double>(N * cfg.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double s1 = 0.0, s2 = 0.0, mx = 0.0;
    for (const auto& path : ens.paths) {
      for (double q : path.at(j).values()) {
        s1 += q;
        s2 += q * q;
        mx = std::max(mx, std::abs(q));
      }
    }
    t.add_row({grid.time(j), s1 / count, s2 / count, mx});
  }
  Table s({"n_points", "n_edges", "paths", "steps", "drift_L", "diffusion_L", "trajectory_hash"});
  s.add_row({as_int(cfg.size()), as_int(edge_count(g)), as_int(N), as_int(grid.steps()), f.lipschitz_L,
             B.lipschitz_L, hex64(trajectory_hash(ens))});
  rec.tables.push_back({"trajectory", std::move(t)});
  rec.tables.push_back({"summary", std::move(s)});
}

inline void run_spins_truncation(const Params& p, std::uint64_t seed, std::size_t threads, RunRecord& rec) {
  const auto radii = p.nums("radii");
  const auto master = load_configuration(p, seed, p.num("region"));
  spins::TruncationParams prm;
  prm.dynamics = spin_dynamics(p);
  prm.grid = TimeGrid(p.num("T"), p.num("dt"));
  prm.seed = seed;
  prm.num_paths = p.size("N");
  prm.initial = initial_mode(p);
  prm.threads = threads;
  auto res = spins::truncation_convergence(master, radii, p.num("R0"), p.num("r"), prm);

  const double k = p.num("se_factor");
  bool monotone = true;
  std::string where;
  for (std::size_t i = 0; i + 1 < res.d_last.size(); ++i) {
    const double slack = k * std::hypot(res.d_last_se[i], res.d_last_se[i + 1]);
    if (res.d_last[i + 1] > res.d_last[i] + slack) {
      monotone = false;
      where += " rise after radius " + fmt(radii[i]);
    }
  }
  const double first = res.d_last.front(), last = res.d_last.back();
  double ratio = 0.0;
  if (first > 0.0) {
    ratio = last / first;
  } else if (last > 0.0) {
    ratio = std::numeric_limits<double>::infinity();
  } else {
    rec.warnings.emplace_back("D(R_1, R_m) = 0: the observation window does not see the truncation boundary");
  }
  const double max_ratio = p.num("max_ratio");
  Table s({"observed_points", "d_first", "d_last", "decay_ratio", "max_ratio", "pass"});
  s.add_row({as_int(res.observed_points), first, last, ratio, max_ratio, ratio <= max_ratio});
  rec.tables.push_back({"truncation", std::move(res.table)});
  rec.tables.push_back({"summary", std::move(s)});
  if (res.observed_points == 0) rec.warnings.emplace_back("no points inside the observation window");
  add_check(rec, "d_last_monotone", monotone,
            "D(R_i, R_m) non-increasing within " + fmt(k) + " combined standard errors" + where);
  add_check(rec, "d_last_decay", ratio <= max_ratio,
            "D(R_{m-1}, R_m) / D(R_1, R_m) = " + fmt(ratio) + " <= " + fmt(max_ratio));
}

inline void run_constants_report(const Params& p, std::uint64_t seed, RunRecord& rec) {
  const auto radii = p.nums("radii");
  const auto master = load_configuration(p, seed, radii.back());
  const auto bounds = spin_bounds(p);
  const double C = p.num("C"), r = p.num("r");
  const double limit = p.num("growth_limit");
  Table t({"radius", "n_points", "a_gamma", "argmax_id", "argmax_norm", "argmax_degree", "equality_points",
           "condition_holds", "c1", "c2", "L2", "mu", "t0", "growth_per_doubling"});
  bool condition = true;
  bool growth_ok = true;
  double prev_a = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const auto sub = master.truncate(radii[i]);
    require_points(sub, p.path("radii") + "[" + std::to_string(i) + "]");
    const auto g = spins::build_graph(sub, r);
    const auto dc = spins::density_constants(g, bounds, C);
    std::size_t equal = 0;
    bool holds = true;
    for (std::size_t x = 0; x < sub.size(); ++x) {
      const double n = static_cast<double>(g.degree(x));
      const double cap = dc.a_gamma * std::sqrt(1.0 + sub.norm(x));
      if (n > cap * (1.0 + 1e-12)) holds = false;
      if (std::abs(n - cap) <= 1e-12 * std::max(cap, 1.0)) ++equal;
    }
    if (dc.a_gamma > 0.0 && equal == 0) holds = false;
    condition = condition && holds;
    double t0 = std::numeric_limits<double>::infinity();
    if (dc.L2 > 0.0) {
      const double b = 0.5 * b_star(dc.L(), bounds).min();
      t0 = spins::uniqueness_time_step(dc.mu, bounds.hi(), r, bounds.hi(), b);
    }
    Cell growth = std::string{};
    if (i > 0 && prev_a > 0.0) {
      const double per_doubling = std::pow(dc.a_gamma / prev_a, 1.0 / std::log2(radii[i] / radii[i - 1]));
      growth = per_doubling;
      if (!(per_doubling < limit)) growth_ok = false;
    }
    prev_a = dc.a_gamma;
    t.add_row({radii[i], as_int(sub.size()), dc.a_gamma, static_cast<std::int64_t>(sub.point(dc.argmax).id),
               sub.norm(dc.argmax), as_int(g.degree(dc.argmax)), as_int(equal), holds, dc.c1, dc.c2, dc.L2, dc.mu,
               t0, growth});
  }
  rec.tables.push_back({"constants", std::move(t)});
  add_check(rec, "density_condition", condition,
            "n_x <= a sqrt(1 + |x|) at every point, with equality somewhere");
  add_check(rec, "a_gamma_growth", growth_ok, "a_gamma grows by less than " + fmt(limit) + " per radius doubling",
            false);
  if (!growth_ok) rec.warnings.emplace_back("a_gamma grows by at least " + fmt(limit) + " per radius doubling");
}

// ---------------------------------------------------------------- picard / gl

struct TorusModel {
  torus::TorusScale scale;
  WeightedScale family;
  torus::FourierState u0;
  GLField<torus::Complex> f, B;
};

inline TorusModel torus_model(const Params& t) {
  torus::TorusScale sc(t.num("alpha_lo"), t.num("alpha_hi"));
  const int K = static_cast<int>(t.integer("K"));
  return {sc, sc.family(K), torus::FourierState::gaussian(K, t.num("u0_alpha")),
          GLField<torus::Complex>::zero(FieldKind::drift), torus::B_field(t.num("c"))};
}

struct SpinModel {
  spins::Configuration cfg;
  spins::GeometricGraph graph;
  ScaleBounds bounds;
  WeightedScale family;
  GLField<double> f, B;
};

inline SpinModel spin_model(const Params& s, std::uint64_t seed) {
  auto cfg = load_configuration(s, seed, s.num("region"));
  require_points(cfg, s.path("region"));
  auto g = spins::build_graph(cfg, s.num("r"));
  const auto dyn = spin_dynamics(s);
  const auto bounds = spin_bounds(s);
  auto [f, B] = spins::spin_fields(g, dyn.phi, dyn.psi, bounds);
  auto fam = spins::spin_scale(cfg, bounds);
  return {std::move(cfg), std::move(g), bounds, std::move(fam), std::move(f), std::move(B)};
}

inline Table single_distance_report(const PicardDiagnostics& d) {
  Table t({"iteration", "distance", "ratio", "theorem_constant", "proof_constant", "min_constant", "within_bound"});
  for (std::size_t m = 0; m < d.distances.size(); ++m) {
    t.add_row({as_int(m + 1), d.distances[m], std::string{}, d.constants.theorem, d.constants.proof,
               d.constants.min(), std::string{}});
  }
  return t;
}

template <ScalarType Scalar>
void picard_tables(const Params& p, const std::string& model, const IndexedVector<Scalar>& u0,
                   const GLField<Scalar>& f, const GLField<Scalar>& B, const WeightedScale& fam, bool scalar_noise,
                   std::uint64_t seed, std::size_t threads, RunRecord& rec) {
  const ScaleBounds& bounds = fam.bounds();
  const double L = std::max(f.lipschitz_L, B.lipschitz_L);
  double b = 0.0;
  if (const auto given = p.opt_num("b")) {
    b = *given;
  } else if (L > 0.0) {
    b = p.num("b_factor") * b_star(L, bounds).min();
  } else {
    throw ConfigError(p.path("b"), "required when both fields declare L = 0 (b* is unbounded)");
  }
  const double T = p.num("horizon_fraction") * bounds.width() * b;
  const TimeGrid grid = TimeGrid::from_steps(T, p.size("steps"));
  PicardOptions opt;
  opt.num_paths = p.size("N");
  opt.seed = seed;
  opt.b = b;
  opt.tol = p.num("tol");
  opt.max_iter = p.size("max_iter");
  opt.index_grid = default_index_grid(bounds, p.size("n_alpha"));
  opt.threads = threads;
  const auto res = picard_solve(u0, f, B, fam, grid, opt, scalar_noise);
  const PicardDiagnostics& d = res.diagnostics;

  Table report = d.distances.size() >= 2 ? contraction_report(d, p.num("mc_tol")) : single_distance_report(d);
  const double slack = p.num("ratio_slack");
  const double cmin = d.constants.min();
  bool within = true;
  double max_ratio = 0.0;
  for (const auto& r : d.ratios) {
    if (!r) continue;
    max_ratio = std::max(max_ratio, *r);
    within = within && *r <= cmin + slack;
  }
  const BStar bs = L > 0.0 ? d.thresholds : BStar{INFINITY, INFINITY};
  Table s({"model", "b", "b_star_closed_form", "b_star_from_L", "L", "width", "T", "theorem_constant",
           "proof_constant", "contraction_guaranteed", "converged", "iterations", "max_ratio", "trajectory_hash"});
  s.add_row({model, b, bs.closed_form, bs.from_lipschitz_constant, L, bounds.width(), grid.final_time(),
             d.constants.theorem, d.constants.proof, d.contraction_guaranteed, d.converged, as_int(d.distances.size()),
             max_ratio, hex64(trajectory_hash(res.ensemble))});
  rec.tables.push_back({"contraction", std::move(report)});
  rec.tables.push_back({"summary", std::move(s)});
  for (const auto& w : d.warnings) rec.warnings.push_back(w);
  const bool hard = d.contraction_guaranteed;
  add_check(rec, "converged", d.converged,
            "distance < " + fmt(opt.tol) + " within " + std::to_string(opt.max_iter) + " iterations", hard);
  add_check(rec, "ratios_within_bound", within,
            "max ratio " + fmt(max_ratio) + " <= min constant " + fmt(cmin) + " + " + fmt(slack), hard);
}

inline void run_picard(const Params& p, std::uint64_t seed, std::size_t threads, RunRecord& rec) {
  const std::string model = p.str("model");
  if (model == "torus") {
    const auto m = torus_model(p.sub("torus"));
    picard_tables(p, model, m.u0.amplitudes, m.f, m.B, m.family, true, seed, threads, rec);
  } else {
    const Params s = p.sub("spins");
    const auto m = spin_model(s, seed);
    const auto q0 = spins::initial_spins(m.cfg, seed, initial_mode(s), s.num("initial_value"));
    picard_tables(p, model, q0, m.f, m.B, m.family, false, seed, threads, rec);
  }
}

template <ScalarType Scalar>
void gl_rows(const Params& p, const GLField<Scalar>& f, const GLField<Scalar>& B, const WeightedScale& fam,
             std::uint64_t seed, RunRecord& rec) {
  const std::string which = p.str("field");
  GlSampleSpec spec{p.size("num_pairs"), p.size("num_index_pairs"), seed, p.num("tol")};
  Table t({"field", "declared_L", "L_hat", "draws", "skipped", "worst_alpha", "worst_beta", "passed"});
  bool all = true;
  auto one = [&](const char* name, const GLField<Scalar>& field) {
    const GlReport r = gl_constant_check(field, fam, spec);
    all = all && r.passed;
    t.add_row({std::string(name), r.declared_L, r.L_hat, as_int(r.draws), as_int(r.skipped), r.worst_alpha,
               r.worst_beta, r.passed});
  };
  if (which != "diffusion") one("drift", f);
  if (which != "drift") one("diffusion", B);
  rec.tables.push_back({"gl", std::move(t)});
  add_check(rec, "gl_constant", all, "empirical L_hat <= declared L * (1 + " + fmt(spec.tol) + ")");
}

inline void run_gl_check(const Params& p, std::uint64_t seed, RunRecord& rec) {
  if (p.str("model") == "torus") {
    const auto m = torus_model(p.sub("torus"));
    gl_rows(p, m.f, m.B, m.family, seed, rec);
  } else {
    const auto m = spin_model(p.sub("spins"), seed);
    gl_rows(p, m.f, m.B, m.family, seed, rec);
  }
}

}  // namespace detail

/// Runs one validated configuration. Throws on errors; failed checks are
/// recorded, not thrown.
inline RunRecord run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.experiment = cfg.experiment();
  rec.config = cfg.echo();
  const Params p(cfg.params(), "$");
  const std::uint64_t seed = cfg.seed();
  const std::size_t threads = cfg.threads();
  const std::string& name = cfg.experiment();
  if (name == "torus-exact") {
    detail::run_torus_exact(p, seed, threads, rec);
  } else if (name == "torus-lifetime") {
    detail::run_torus_lifetime(p, rec);
  } else if (name == "torus-em-order") {
    detail::run_torus_em_order(p, seed, threads, rec);
  } else if (name == "picard-contraction") {
    detail::run_picard(p, seed, threads, rec);
  } else if (name == "spins-sim") {
    detail::run_spins_sim(p, seed, threads, rec);
  } else if (name == "spins-truncation") {
    detail::run_spins_truncation(p, seed, threads, rec);
  } else if (name == "constants-report") {
    detail::run_constants_report(p, seed, rec);
  } else if (name == "gl-check") {
    detail::run_gl_check(p, seed, rec);
  } else {
    find_schema(name);
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

inline ordered_json record_json(const RunRecord& rec) {
  ordered_json j;
  j["experiment"] = rec.experiment;
  j["version"] = rec.version;
  j["config"] = rec.config;
  j["wall_time_s"] = rec.wall_time_s;
  auto& tables = j["tables"] = ordered_json::object();
  for (const auto& t : rec.tables) tables[t.name] = table_json(t.table);
  auto& checks = j["checks"] = ordered_json::array();
  for (const auto& c : rec.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["hard"] = c.hard;
    e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  j["warnings"] = rec.warnings;
  j["exit_code"] = rec.exit_code();
  return j;
}

/// CSV with an output path writes the primary table there and every other
/// table to a sibling `<stem>.<name><ext>`. On a stream, extra tables follow
/// the primary one, each introduced by a blank line and "# <name>".
inline void emit_record(const RunRecord& rec, Format format, const std::string& out_path, std::ostream& out) {
  if (format == Format::json) {
    const std::string doc = record_json(rec).dump(2) + "\n";
    if (out_path.empty()) {
      out << doc;
    } else {
      write_file(out_path, doc);
    }
    return;
  }
  for (std::size_t i = 0; i < rec.tables.size(); ++i) {
    const auto& t = rec.tables[i];
    if (!out_path.empty()) {
      write_file(i == 0 ? out_path : sibling_path(out_path, t.name), to_csv(t.table));
    } else {
      if (i > 0) out << "\n# " << t.name << "\n";
      write_csv(t.table, out);
    }
  }
}

/// Human-readable verdicts, one line per check and warning.
inline void print_summary(const RunRecord& rec, std::ostream& os) {
  for (const auto& c : rec.checks) {
    os << (c.passed ? "PASS " : (c.hard ? "FAIL " : "SOFT-FAIL ")) << rec.experiment << "/" << c.name << ": "
       << c.detail << "\n";
  }
  for (const auto& w : rec.warnings) os << "warning: " << w << "\n";
  os << "wall time " << detail::fmt(rec.wall_time_s) << " s\n";
}

}  // namespace hscale::experiments
