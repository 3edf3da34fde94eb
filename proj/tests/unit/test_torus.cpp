#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hscale/gl_field.hpp"
#include "hscale/torus.hpp"

using namespace hscale;
using namespace hscale::torus;

TEST(TorusExactMode, ZeroModeAndTimeZeroAreIdentity) {
  const Complex u0(0.3, -1.2);
  EXPECT_EQ(exact_mode(u0, 0, 1.7, 3.0, 0.9), u0);
  EXPECT_EQ(exact_mode(u0, 5, 1.0, 0.0, 0.0), u0);
}

TEST(TorusExactMode, ModulusIndependentOfW) {
  for (double Wt : {-2.0, 0.0, 0.37, 5.0}) {
    EXPECT_NEAR(std::abs(exact_mode(1.0, 2, 1.0, 0.25, Wt)), 1.6487212707001282, 1e-15);
  }
}

TEST(ModulusFactor, Examples) {
  EXPECT_NEAR(modulus_factor(2, 1.0, 0.25), 2.718281828459045, 1e-15);
  EXPECT_EQ(modulus_factor(0, 3.0, 10.0), 1.0);
  EXPECT_NEAR(modulus_factor(3, 0.5, 0.4), 2.45960311115695, 1e-14);
}

TEST(ModulusFactor, OverflowGuard) {
  EXPECT_THROW(modulus_factor(100, 1.0, 0.1), std::overflow_error);
  EXPECT_THROW(exact_mode(1.0, 100, 1.0, 0.1, 0.0), std::overflow_error);
  EXPECT_NO_THROW(modulus_factor(26, 1.0, 1.0));
  EXPECT_THROW(modulus_factor(1, 1.0, -0.1), DomainError);
}

TEST(TorusLifetime, Examples) {
  EXPECT_DOUBLE_EQ(lifetime(1.0, 0.5, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(lifetime(1.0, 0.5, 2.0), 0.125);
  EXPECT_THROW(lifetime(0.5, 0.5, 1.0), DomainError);
  EXPECT_THROW(lifetime(1.0, 0.5, 0.0), DomainError);
}

TEST(TorusEm, ZeroCouplingAndZeroModeAreConstant) {
  const TimeGrid g(0.1, 0.01);
  FourierState u0(4);
  for (int k = -4; k <= 4; ++k) u0[k] = Complex(1.0 + k, 0.5 * k);
  const auto w = sample_scalar_wiener(g, 3);
  const auto still = em_simulate(u0, 0.0, g, w);
  for (const auto& s : still.states) EXPECT_TRUE(s == u0.amplitudes);
  const auto moving = em_simulate(u0, 1.0, g, w);
  for (const auto& s : moving.states) EXPECT_EQ(s[4], u0[0]);
}

TEST(TorusEm, RequiresScalarNoise) {
  const TimeGrid g(0.1, 0.01);
  const FourierState u0(2);
  EXPECT_THROW(em_simulate(u0, 1.0, g, sample_wiener(g, mode_keys(2), 1)), ShapeError);
  EXPECT_THROW(em_simulate(u0, 1.0, g, sample_scalar_wiener(TimeGrid(0.1, 0.02), 1)), ShapeError);
}

TEST(TorusEm, MatchesHandRecursion) {
  const TimeGrid g = TimeGrid::from_steps(0.03, 3);
  FourierState u0(1);
  u0[1] = Complex(0.5, 0.25);
  const auto w = sample_scalar_wiener(g, 9);
  const auto em = em_simulate(u0, 2.0, g, w);
  Complex x = u0[1];
  for (std::size_t j = 0; j < 3; ++j) {
    x *= Complex(1.0, 2.0 * w.increment(0, j));
    EXPECT_NEAR(std::abs(em.at(j + 1)[2] - x), 0.0, 1e-15);
  }
}

TEST(TorusExact, PathwiseModulusIdentity) {
  const int K = 32;
  const double c = 1.0;
  const TimeGrid g = TimeGrid::from_steps(0.25, 10);
  FourierState u0 = FourierState::gaussian(K, 0.5);
  for (std::uint64_t p = 0; p < 20; ++p) {
    const auto w = sample_scalar_wiener(g, path_seed(7, p));
    const auto ex = exact_trajectory(u0, c, g, w);
    for (std::size_t j = 0; j < g.size(); ++j) {
      for (int k = -K; k <= K; ++k) {
        const double ratio = std::norm(ex.at(j)[static_cast<std::size_t>(k + K)]) / std::norm(u0[k]);
        const double expected = modulus_factor(k, c, g.time(j));
        EXPECT_LE(std::abs(ratio - expected) / expected, 1e-12);
      }
    }
  }
}

TEST(TorusSymmetry, RealFieldPreserved) {
  const int K = 6;
  FourierState u0(K);
  for (int k = 0; k <= K; ++k) {
    u0[k] = Complex(std::exp(-0.3 * k), k == 0 ? 0.0 : 0.1 * k);
    u0[-k] = std::conj(u0[k]);
  }
  ASSERT_TRUE(u0.is_real_field());
  const TimeGrid g(0.2, 0.01);
  const auto w = sample_scalar_wiener(g, 4);
  const auto em = em_simulate(u0, 1.3, g, w);
  const auto ex = exact_trajectory(u0, 1.3, g, w);
  for (std::size_t j = 0; j < g.size(); ++j) {
    FourierState a(K), b(K);
    a.amplitudes = em.at(j);
    b.amplitudes = ex.at(j);
    EXPECT_TRUE(a.is_real_field(1e-15));
    EXPECT_TRUE(b.is_real_field(1e-15));
  }
}

TEST(TorusScale, UserNormAndOrientation) {
  const TorusScale sc(0.5, 1.0);
  EXPECT_DOUBLE_EQ(sc.to_internal(1.0), 0.0);
  EXPECT_DOUBLE_EQ(sc.to_internal(0.5), 0.5);
  EXPECT_DOUBLE_EQ(sc.to_user(sc.to_internal(0.7)), 0.7);
  const auto fs = FourierState::gaussian(5, 0.2);
  for (double a : {0.5, 0.75, 1.0}) {
    double direct = 0.0;
    for (int k = -5; k <= 5; ++k) direct += std::norm(fs[k]) * std::exp(a * k * k);
    EXPECT_NEAR(sc.user_norm(fs.amplitudes, a), std::sqrt(direct), 1e-12 * std::sqrt(direct));
  }
  // X_a is contained in X_b for a > b: larger user index, larger norm.
  EXPECT_GT(sc.user_norm(fs.amplitudes, 0.9), sc.user_norm(fs.amplitudes, 0.6));
  EXPECT_THROW(TorusScale(0.0, 1.0), DomainError);
}

TEST(TorusB, SingleModeNormAndZeroCoupling) {
  const TorusScale sc(0.5, 1.0);
  const int K = 4;
  FourierState v(K);
  v[3] = Complex(0.2, -0.1);
  const auto Bv = B_field(1.5)(v.amplitudes);
  const double beta = 0.8;
  EXPECT_NEAR(sc.user_norm(Bv, beta), 1.5 * 3.0 * std::exp(beta * 9.0 / 2.0) * std::abs(v[3]), 1e-12);
  const auto zero = B_field(0.0)(v.amplitudes);
  for (std::size_t i = 0; i < zero.size(); ++i) EXPECT_EQ(zero[i], Complex(0.0, 0.0));
  EXPECT_DOUBLE_EQ(B_field(-2.0).lipschitz_L, 2.0 * 0.6065306597126334);
}

TEST(TorusB, GlCheckApproachesDeclaredConstant) {
  // User indices 0.6..1.0; the exact sup over x = (b - a) k^2 of sqrt(x) e^{-x/2}
  // is e^{-1/2}, attained for k = 2 at index gap 0.25.
  const TorusScale sc(0.6, 1.0);
  const auto fam = sc.family(16);
  const auto B = B_field(1.0);
  const auto rep = gl_constant_check(B, fam, {2000, 5, 11});
  EXPECT_TRUE(rep.passed) << rep.L_hat;
  EXPECT_LE(rep.L_hat, 0.6065306597126334 * (1.0 + 1e-12));
  EXPECT_GT(rep.L_hat, 0.95 * 0.6065306597126334);
}

TEST(TorusNorm, PartialSumsBoundedBeforeLifetimeAndDivergentAfter) {
  const double alpha = 1.0, beta = 0.5, c = 1.0;
  const double before32 = partial_norm_sq(alpha, beta, c, 0.4, 32);
  const double before64 = partial_norm_sq(alpha, beta, c, 0.4, 64);
  EXPECT_LT(std::abs(before64 - before32), 1e-6);
  const double after32 = partial_norm_sq(alpha, beta, c, 0.6, 16);
  const double after64 = partial_norm_sq(alpha, beta, c, 0.6, 32);
  EXPECT_GT(after64 / after32, 10.0);
  // Exponent 0.1 * 64^2 = 409.6 stays under the guard.
  EXPECT_NO_THROW(partial_norm_sq(alpha, beta, c, 0.6, 64));
  EXPECT_THROW(partial_norm_sq(alpha, beta, c, 0.6, 100), std::overflow_error);
}

TEST(TorusNorm, PartialSumMatchesPropagatedExactSolution) {
  const int K = 12;
  const auto u0 = FourierState::gaussian(K, 1.0);
  const TimeGrid g = TimeGrid::from_steps(0.3, 6);
  const auto ex = exact_trajectory(u0, 1.0, g, sample_scalar_wiener(g, 21));
  const TorusScale sc(0.5, 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double direct = std::pow(sc.user_norm(ex.at(j), 0.5), 2);
    const double formula = partial_norm_sq(1.0, 0.5, 1.0, g.time(j), K);
    EXPECT_NEAR(direct, formula, 1e-11 * formula);
  }
}

TEST(TorusEm, StrongErrorShrinksWithDt) {
  const auto u0 = FourierState::gaussian(8, 1.0);
  const double e1 = em_strong_error(u0, 1.0, TimeGrid(0.1, 1e-2), 100, 5);
  const double e2 = em_strong_error(u0, 1.0, TimeGrid(0.1, 2.5e-3), 100, 5);
  EXPECT_LT(e2, e1);
  EXPECT_EQ(em_strong_error(u0, 1.0, TimeGrid(0.1, 1e-2), 100, 5, 4), e1);
}
