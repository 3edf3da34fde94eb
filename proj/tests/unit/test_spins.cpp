#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hscale/gl_field.hpp"
#include "hscale/hash.hpp"
#include "hscale/spins/configuration.hpp"
#include "hscale/spins/constants.hpp"
#include "hscale/spins/dynamics.hpp"
#include "hscale/spins/families.hpp"
#include "hscale/spins/graph.hpp"
#include "hscale/stats.hpp"

using namespace hscale;
using namespace hscale::spins;

namespace {

const std::string kSnapshot = std::string(HSCALE_TEST_DATA_DIR) + "/poisson_l1_r10_d2_seed42.json";

Configuration load_snapshot() {
  std::ifstream in(kSnapshot);
  if (!in) throw std::runtime_error("missing test snapshot " + kSnapshot);
  return configuration_from_json(nlohmann::json::parse(in));
}

Configuration line(std::vector<double> xs, double region = 50.0) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back({static_cast<Key>(i), {xs[i], 0.0, 0.0}});
  return Configuration(1, region, 1.0, 0, pts);
}

AdmissibleFamily linear_family(double J, double r = 1.0) {
  return {"linear", [J](const Point&, const Point&, double s, double t) { return J * (t - s); }, r, 2.0 * std::abs(J),
          false};
}

AdmissibleFamily zero_family(double r = 1.0) {
  return {"zero", [](const Point&, const Point&, double, double) { return 0.0; }, r, 0.0, false};
}

const ScaleBounds kSpinBounds(0.5, 1.5);

}  // namespace

TEST(Poisson, MeanCountMatchesIntensityTimesArea) {
  std::vector<double> counts;
  for (std::uint64_t s = 0; s < 1000; ++s) counts.push_back(static_cast<double>(sample_poisson(1.0, 10.0, 2, s).size()));
  EXPECT_NEAR(mean(counts), 100.0 * M_PI, 3.0 * standard_error(counts));
}

TEST(Poisson, DeterministicInsideRegionAndSequentialIds) {
  const auto a = sample_poisson(0.5, 4.0, 3, 9);
  const auto b = sample_poisson(0.5, 4.0, 3, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.point(i).id, static_cast<Key>(i));
    EXPECT_EQ(a.point(i).pos, b.point(i).pos);
    EXPECT_LE(a.norm(i), 4.0);
  }
  const auto c = sample_poisson(0.5, 4.0, 3, 10);
  ASSERT_FALSE(a.empty());
  EXPECT_FALSE(c.size() == a.size() && c.point(0).pos == a.point(0).pos);
}

TEST(Poisson, TinyIntensityGivesEmptyConfiguration) {
  const auto c = sample_poisson(1e-12, 1.0, 2, 1);
  EXPECT_TRUE(c.empty());
  EXPECT_THROW(sample_poisson(0.0, 1.0, 2, 1), DomainError);
  EXPECT_THROW(sample_poisson(1.0, 1.0, 4, 1), DomainError);
}

TEST(Configuration, ValidatesPoints) {
  EXPECT_THROW(Configuration(2, 1.0, 1.0, 0, {{0, {0.0, 0.0, 0.0}}, {0, {0.1, 0.0, 0.0}}}), DomainError);
  EXPECT_THROW(Configuration(2, 1.0, 1.0, 0, {{0, {2.0, 0.0, 0.0}}}), DomainError);
  EXPECT_THROW(Configuration(1, 1.0, 1.0, 0, {{0, {0.0, 0.5, 0.0}}}), DomainError);
}

TEST(Snapshot, RoundTripAndPinnedSeedRegression) {
  const auto snap = load_snapshot();
  const auto fresh = sample_poisson(1.0, 10.0, 2, 42);
  ASSERT_EQ(snap.size(), fresh.size());
  for (std::size_t i = 0; i < snap.size(); ++i) {
    EXPECT_EQ(snap.point(i).id, fresh.point(i).id);
    EXPECT_EQ(snap.point(i).pos, fresh.point(i).pos);
  }
  const auto again = configuration_from_json(nlohmann::json::parse(to_json(fresh).dump()));
  for (std::size_t i = 0; i < again.size(); ++i) EXPECT_EQ(again.point(i).pos, fresh.point(i).pos);
  EXPECT_EQ(again.seed(), 42u);
  EXPECT_EQ(again.intensity(), 1.0);
}

TEST(Snapshot, MissingFieldNamed) {
  auto j = nlohmann::json::parse(R"({"dim": 2, "region_radius": 1, "intensity": 1, "points": []})");
  try {
    configuration_from_json(j);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("'seed'"), std::string::npos);
  }
  j["seed"] = 1;
  j["points"] = nlohmann::json::parse(R"([{"id": 0, "pos": [0.1]}])");
  EXPECT_THROW(configuration_from_json(j), DomainError);
}

TEST(Graph, StrictRadiusAndSmallExamples) {
  const auto pair = build_graph(line({0.0, 1.0}), 1.0);
  EXPECT_EQ(pair.degree(0), 0u);
  EXPECT_EQ(pair.degree(1), 0u);
  const auto single = build_graph(line({0.3}), 1.0);
  EXPECT_EQ(single.degree(0), 0u);
  const auto three = build_graph(line({0.0, 0.6, 1.2}), 1.0);
  EXPECT_EQ(three.degree(0), 1u);
  EXPECT_EQ(three.degree(1), 2u);
  EXPECT_EQ(three.degree(2), 1u);
  EXPECT_THROW(build_graph(line({0.0}), 0.0), DomainError);
}

TEST(Graph, SpatialHashMatchesBruteForceAndIsSymmetric) {
  for (int dim = 1; dim <= 3; ++dim) {
    const double R = dim == 1 ? 800.0 : (dim == 2 ? 22.0 : 7.0);
    const auto cfg = sample_poisson(1.0, R, dim, 100 + dim);
    ASSERT_GT(cfg.size(), kSpatialHashThreshold);
    for (double r : {0.5, 1.0, 1.7}) {
      const auto bf = build_graph(cfg, r, GraphMethod::brute_force);
      const auto sh = build_graph(cfg, r, GraphMethod::spatial_hash);
      const auto au = build_graph(cfg, r);
      EXPECT_EQ(bf.neighbors, sh.neighbors) << "dim " << dim << " r " << r;
      EXPECT_EQ(bf.neighbors, au.neighbors);
      for (std::size_t i = 0; i < bf.size(); ++i) {
        for (std::size_t j : bf.neighbors[i]) {
          EXPECT_TRUE(std::binary_search(bf.neighbors[j].begin(), bf.neighbors[j].end(), i));
        }
      }
    }
  }
}

TEST(DensityConstants, IsolatedPointAndEmpty) {
  const auto g = build_graph(line({0.0}), 1.0);
  const auto dc = density_constants(g, kSpinBounds, 0.1);
  EXPECT_EQ(dc.a_gamma, 0.0);
  EXPECT_EQ(dc.c1, 0.0);
  EXPECT_EQ(dc.mu, 0.0);
  EXPECT_EQ(dc.L2, 0.0);
  EXPECT_THROW(density_constants(build_graph(sample_poisson(1e-12, 1.0, 2, 1), 1.0), kSpinBounds, 0.1), DomainError);
}

TEST(DensityConstants, MuFormula) {
  EXPECT_NEAR(interaction_mu(0.1, 2.0, 1.0), 0.32, 1e-15);
  EXPECT_EQ(uniqueness_time_step(0.0, 1.0, 1.0, 1.5, 0.1), INFINITY);
  EXPECT_NEAR(uniqueness_time_step(0.32, 1.0, 1.0, 1.5, 0.1), 1.0 / (4.0 * std::exp(2.0) * 0.32 * 2.5 * 0.1), 1e-15);
}

// Frozen from tests/oracles/spin_constants.py on the committed snapshot
// (r = 1, bounds [0.5, 1.5], C = 0.1).
TEST(DensityConstants, PinnedSnapshotMatchesReferenceEnumeration) {
  const auto cfg = load_snapshot();
  const auto g = build_graph(cfg, 1.0);
  ASSERT_EQ(cfg.size(), 350u);
  std::size_t edges = 0;
  for (std::size_t i = 0; i < g.size(); ++i) edges += g.degree(i);
  EXPECT_EQ(edges / 2, 593u);
  const auto dc = density_constants(g, kSpinBounds, 0.1);
  EXPECT_EQ(cfg.point(dc.argmax).id, 205);
  EXPECT_NEAR(dc.a_gamma, 4.073481093752492, 1e-12);
  EXPECT_NEAR(dc.c1, 309.7320998682429, 1e-10);
  EXPECT_NEAR(dc.c2, 121.76234173400397, 1e-10);
  EXPECT_NEAR(dc.L2, 12.94483324806741, 1e-11);
  EXPECT_NEAR(dc.mu, 1.3274598576927201, 1e-12);
}

TEST(DensityConstants, ConditionHoldsWithEqualityAtArgmax) {
  const auto cfg = load_snapshot();
  const auto g = build_graph(cfg, 1.0);
  const auto dc = density_constants(g, kSpinBounds, 0.1);
  std::size_t equal = 0;
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const double bound = dc.a_gamma * std::sqrt(1.0 + cfg.norm(i));
    EXPECT_LE(static_cast<double>(g.degree(i)), bound * (1.0 + 1e-15));
    if (std::abs(static_cast<double>(g.degree(i)) - bound) <= 1e-14 * bound) ++equal;
  }
  EXPECT_GE(equal, 1u);
}

TEST(SpinDrift, HandEvaluatedPair) {
  const auto cfg = line({0.0, 0.5});
  const auto g = build_graph(cfg, 1.0);
  const double J = 0.05;
  const RealVector q(cfg.keys(), {1.0, 3.0});
  const auto f = spin_drift(q, g, linear_family(J));
  EXPECT_NEAR(f[0], 2.0 * J, 1e-16);
  EXPECT_NEAR(f[1], -2.0 * J, 1e-16);
}

TEST(SpinDrift, IsolatedAndAntisymmetricUniformGiveZero) {
  const auto iso = build_graph(line({0.0, 5.0}), 1.0);
  const auto phi = builtin_family("tanh-coupling", {});
  const auto d1 = spin_drift(RealVector(iso.cfg.keys(), {1.0, -2.0}), iso, phi);
  EXPECT_EQ(d1[0], 0.0);
  EXPECT_EQ(d1[1], 0.0);
  const auto cfg = load_snapshot();
  const auto g = build_graph(cfg, 1.0);
  RealVector q(cfg.keys());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = 0.7;
  const auto d2 = spin_drift(q, g, phi);
  for (std::size_t i = 0; i < d2.size(); ++i) EXPECT_EQ(d2[i], 0.0);
}

TEST(SpinDrift, KeyAndRangeChecks) {
  const auto g = build_graph(line({0.0, 0.5}), 1.0);
  EXPECT_THROW(spin_drift(RealVector(make_keys({0, 7}), {0.0, 0.0}), g, zero_family()), ShapeError);
  EXPECT_THROW(spin_drift(RealVector(g.cfg.keys(), {0.0, 0.0}), g, zero_family(2.0)), DomainError);
}

TEST(SpinDiffusion, ConstantEdgeGivesDegreeTimesSigma) {
  const auto cfg = line({0.0, 0.6, 1.2, 9.0});
  const auto g = build_graph(cfg, 1.0);
  FamilyParams p;
  p.sigma0 = 0.3;
  const auto d = spin_diffusion(RealVector(cfg.keys(), {1.0, 2.0, -1.0, 4.0}), g,
                                builtin_family("constant-diffusion-edge", p));
  EXPECT_DOUBLE_EQ(d[0], 0.3);
  EXPECT_DOUBLE_EQ(d[1], 0.6);
  EXPECT_DOUBLE_EQ(d[2], 0.3);
  EXPECT_DOUBLE_EQ(d[3], 0.0);
  const auto z = spin_diffusion(RealVector(cfg.keys(), {1.0, 2.0, -1.0, 4.0}), g, zero_family());
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_EQ(z[i], 0.0);
}

TEST(SpinDiffusion, HilbertSchmidtNormEqualsWeightedDiagonalNorm) {
  // ||D||_HS^2 = sum over unit noise vectors e_y of ||D e_y||_beta^2.
  const auto cfg = sample_poisson(1.0, 2.2, 2, 3);
  ASSERT_LE(cfg.size(), 20u);
  ASSERT_GT(cfg.size(), 5u);
  const auto g = build_graph(cfg, 1.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  RealVector q(cfg.keys());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = z(rng);
  const auto diag = spin_diffusion(q, g, builtin_family("tanh-coupling", {0.3, 1.0, 0.1, 1.0}));
  for (double beta : {0.5, 1.0, 1.5}) {
    double hs2 = 0.0;
    for (std::size_t y = 0; y < cfg.size(); ++y) {
      RealVector e(cfg.keys());
      e[y] = 1.0;
      const double n = weighted_seq_norm(apply_diagonal(diag, e), beta, cfg);
      hs2 += n * n;
    }
    const double direct = weighted_seq_norm(diag, beta, cfg);
    EXPECT_NEAR(std::sqrt(hs2), direct, 1e-12 * std::max(1.0, direct));
  }
}

TEST(WeightedNorm, Examples) {
  const Configuration origin(2, 5.0, 1.0, 0, {{0, {0.0, 0.0, 0.0}}});
  for (double a : {0.0, 0.5, 2.0}) EXPECT_DOUBLE_EQ(weighted_seq_norm(RealVector(origin.keys(), {1.0}), a, origin), 1.0);
  const Configuration far(2, 5.0, 1.0, 0, {{0, {0.0, 2.0, 0.0}}});
  EXPECT_NEAR(weighted_seq_norm(RealVector(far.keys(), {1.0}), 0.5, far), 0.6065306597126334, 1e-15);
}

TEST(WeightedNorm, DecreasingInAlphaAndMatchesScale) {
  const auto cfg = load_snapshot();
  const auto fam = spin_scale(cfg, kSpinBounds);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  for (int n = 0; n < 20; ++n) {
    RealVector q(cfg.keys());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = z(rng);
    EXPECT_GE(weighted_seq_norm(q, 0.2, cfg), weighted_seq_norm(q, 0.8, cfg));
    EXPECT_NEAR(fam.norm(q, 0.9), weighted_seq_norm(q, 0.9, cfg), 1e-12);
  }
}

TEST(Families, BuiltinsAndUnknownName) {
  FamilyParams p;
  p.J = 0.0;
  const auto zero = builtin_family("tanh-coupling", p);
  const Point x{0, {0, 0, 0}}, y{1, {0.5, 0, 0}}, edge{2, {1.0, 0, 0}};
  EXPECT_EQ(zero.value(x, y, 1.0, -3.0, 2), 0.0);
  const auto tanh = builtin_family("tanh-coupling", {});
  EXPECT_DOUBLE_EQ(tanh.lipschitz_C, 0.1);
  EXPECT_EQ(tanh.value(x, edge, 0.0, 5.0, 2), 0.0);
  EXPECT_GT(tanh.value(x, y, 0.0, 5.0, 2), 0.0);
  const auto clip = builtin_family("clipped-linear", {0.05, 0.5, 0.1, 1.0});
  EXPECT_DOUBLE_EQ(clip.value(x, y, 0.0, 10.0, 2), 0.025);
  try {
    builtin_family("ising", {});
    FAIL();
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    for (const auto& n : builtin_family_names()) EXPECT_NE(msg.find(n), std::string::npos);
  }
}

TEST(Families, SampledLipschitzRatioWithinC) {
  const Point x{0, {0, 0, 0}}, y{1, {0.3, 0.2, 0}};
  for (const char* name : {"tanh-coupling", "clipped-linear", "constant-diffusion-edge"}) {
    const auto f = builtin_family(name, {});
    const double ratio = sampled_lipschitz_ratio(f, x, y, 2, 10000, 17);
    EXPECT_LE(ratio, f.lipschitz_C * (1.0 + 1e-12)) << name;
  }
  EXPECT_LE(sampled_lipschitz_ratio(builtin_family("tanh-coupling", {}), x, y, 2, 10000, 17), 0.1);
}

TEST(SpinEm, ZeroFieldsKeepInitialData) {
  const auto cfg = sample_poisson(1.0, 3.0, 2, 4);
  const auto g = build_graph(cfg, 1.0);
  const auto q0 = initial_spins(cfg, 4);
  const auto ens = em_simulate_spins(q0, g, {zero_family(), zero_family()}, TimeGrid(0.2, 0.01), 4, 3);
  for (const auto& p : ens.paths)
    for (const auto& s : p.states) EXPECT_TRUE(s == q0);
}

TEST(SpinEm, SelfKernelDecaysExponentially) {
  const auto cfg = line({0.0});
  const auto g = build_graph(cfg, 1.0);
  AdmissibleFamily self{"self", [](const Point&, const Point&, double s, double) { return -s; }, 1.0, 1.0, true};
  const TimeGrid grid(1.0, 1e-3);
  const auto ens = em_simulate_spins(RealVector(cfg.keys(), {1.0}), g, {self, zero_family()}, grid, 0, 1);
  for (std::size_t j = 0; j < grid.size(); j += 100) {
    EXPECT_NEAR(ens.paths[0].at(j)[0], std::exp(-grid.time(j)), grid.dt());
  }
}

TEST(SpinEm, ThreadInvariantAndPinnedRegressionHash) {
  const auto cfg = sample_poisson(1.0, 2.5, 2, 42);
  ASSERT_EQ(cfg.size(), 20u);
  const auto g = build_graph(cfg, 1.0);
  const SpinDynamics dyn{builtin_family("tanh-coupling", {}), builtin_family("constant-diffusion-edge", {})};
  const auto q0 = initial_spins(cfg, 42);
  const TimeGrid grid(0.5, 0.01);
  const auto e1 = em_simulate_spins(q0, g, dyn, grid, 42, 8, 1);
  const auto e4 = em_simulate_spins(q0, g, dyn, grid, 42, 8, 4);
  EXPECT_EQ(trajectory_hash(e1), trajectory_hash(e4));
  EXPECT_EQ(hex64(trajectory_hash(e1)), "73c650ac8f5a701f");
}

TEST(SpinEm, NonFiniteReportsLocation) {
  const auto cfg = line({0.0, 0.5});
  const auto g = build_graph(cfg, 1.0);
  AdmissibleFamily blow{"blow", [](const Point& x, const Point&, double, double) { return x.id == 1 ? INFINITY : 0.0; },
                        1.0, 0.0, false};
  try {
    em_simulate_spins(RealVector(cfg.keys(), {0.0, 0.0}), g, {blow, zero_family()}, TimeGrid(0.1, 0.01), 1, 2);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_EQ(e.path(), 0u);
    EXPECT_EQ(e.key(), 1);
    EXPECT_EQ(e.step(), 1u);
  }
}

TEST(Coupling, SharedIdsShareNoiseAndInitialSpins) {
  const auto master = load_snapshot();
  const auto sub = master.truncate(4.0);
  ASSERT_LT(sub.size(), master.size());
  const TimeGrid grid(0.5, 0.01);
  const auto wm = sample_wiener(grid, master.keys(), path_seed(42, 3));
  const auto ws = sample_wiener(grid, sub.keys(), path_seed(42, 3));
  const auto qm = initial_spins(master, 42);
  const auto qs = initial_spins(sub, 42);
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const std::size_t im = qm.find(sub.point(i).id);
    ASSERT_LT(im, master.size());
    EXPECT_EQ(qs[i], qm[im]);
    const auto a = ws.stream(i);
    const auto b = wm.stream(im);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(Truncation, EmptyAnnulusGivesExactlyZero) {
  // Points at |x| < 3 and |x| > 7 only; radii 4 and 6 select the same set.
  const auto master = line({-2.5, -1.0, 0.0, 0.7, 2.0, 7.5, 8.2}, 9.0);
  TruncationParams prm;
  prm.dynamics = {builtin_family("tanh-coupling", {}), builtin_family("constant-diffusion-edge", {})};
  prm.grid = TimeGrid(0.5, 0.01);
  prm.seed = 5;
  prm.num_paths = 10;
  const auto res = truncation_convergence(master, {4.0, 6.0, 9.0}, 1.0, 1.0, prm);
  ASSERT_EQ(res.d_next.size(), 2u);
  EXPECT_EQ(res.d_next[0], 0.0);
  EXPECT_EQ(res.point_counts[0], res.point_counts[1]);
  EXPECT_EQ(res.table.rows.size(), 2u);
}

TEST(Truncation, DependencyConeGivesExactlyZero) {
  // Nearest-neighbor chain at spacing 0.9 with r = 1, zero diffusion and 3
  // explicit steps: the observed point at the origin sees at most 3 hops, and
  // the boundary defect of the R = 4.6 truncation sits 5 hops away.
  std::vector<double> xs;
  for (int i = 0; i <= 10; ++i) xs.push_back(0.9 * i);
  const auto master = line(xs, 10.0);
  TruncationParams prm;
  prm.dynamics = {builtin_family("clipped-linear", {0.5, 100.0, 0.0, 1.0}), builtin_family("constant-diffusion-edge", {0.5, 1.0, 0.0, 1.0})};
  prm.grid = TimeGrid::from_steps(0.3, 3);
  prm.seed = 8;
  prm.num_paths = 5;
  const auto res = truncation_convergence(master, {4.6, 9.5}, 0.5, 1.0, prm);
  EXPECT_EQ(res.observed_points, 1u);
  EXPECT_EQ(res.d_next[0], 0.0);
  // With enough steps the defect reaches the origin.
  prm.grid = TimeGrid::from_steps(0.8, 8);
  EXPECT_GT(truncation_convergence(master, {4.6, 9.5}, 0.5, 1.0, prm).d_next[0], 0.0);
}

TEST(Truncation, RejectsBadRadii) {
  const auto master = load_snapshot();
  TruncationParams prm;
  prm.dynamics = {zero_family(), zero_family()};
  EXPECT_THROW(truncation_convergence(master, {4.0}, 1.0, 1.0, prm), DomainError);
  EXPECT_THROW(truncation_convergence(master, {4.0, 4.0}, 1.0, 1.0, prm), DomainError);
  EXPECT_THROW(truncation_convergence(master, {4.0, 6.0}, 4.0, 1.0, prm), DomainError);
  EXPECT_THROW(truncation_convergence(master, {4.0, 12.0}, 1.0, 1.0, prm), DomainError);
}

TEST(SpinGl, DriftAndDiffusionCertifiedOnPinnedConfiguration) {
  const auto cfg = load_snapshot();
  const auto g = build_graph(cfg, 1.0);
  const auto [f, B] = spin_fields(g, builtin_family("tanh-coupling", {}), builtin_family("constant-diffusion-edge", {}),
                                  kSpinBounds);
  const auto fam = spin_scale(cfg, kSpinBounds);
  EXPECT_NEAR(f.lipschitz_L, std::sqrt(12.94483324806741), 1e-12);
  EXPECT_EQ(B.lipschitz_L, 0.0);
  const auto rf = gl_constant_check(f, fam, {300, 5, 42});
  EXPECT_TRUE(rf.passed) << rf.L_hat << " vs " << rf.declared_L;
  EXPECT_GT(rf.L_hat, 0.0);
  const auto rb = gl_constant_check(B, fam, {100, 5, 42});
  EXPECT_TRUE(rb.passed);
  EXPECT_EQ(rb.L_hat, 0.0);
}
