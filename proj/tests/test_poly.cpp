#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "support.hpp"

namespace {

using namespace tentpole;
using testing_support::eval_ld;
using testing_support::random_poly;

TEST(Poly, ZeroHasNegativeInfiniteDegree) {
  EXPECT_EQ(Poly{}.degree(), kNegInfDegree);
  EXPECT_EQ(Poly({0.0, 0.0}).degree(), kNegInfDegree);
  EXPECT_LT(Poly{}.degree(), -1000);
  EXPECT_EQ(Poly({3.0, 0.0, 0.0}).degree(), 0);
}

TEST(Poly, RingOperations) {
  EXPECT_EQ(Poly({1.0, 1.0}) * Poly({1.0, -1.0}), Poly({1.0, 0.0, -1.0}));
  EXPECT_DOUBLE_EQ(Poly({6.0, -5.0, 1.0})(1.0), 2.0);
  const Poly p{0.3, -1.7, 2.2, 0.9};
  EXPECT_TRUE((p + scale(p, -1.0)).is_zero());
  EXPECT_TRUE((p - p).is_zero());
}

TEST(Poly, AdditionTrimsCancelledLeadingTerms) {
  const Poly a{1.0, 2.0, 3.0};
  const Poly b{0.5, 0.0, -3.0};
  EXPECT_EQ((a + b).degree(), 1);
}

TEST(Poly, ProductEvaluatesAsProductOfValues) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    const Poly p = random_poly(rng, static_cast<int>(rng() % 9));
    const Poly q = random_poly(rng, static_cast<int>(rng() % 9));
    const double x = unif(rng);
    const long double want = eval_ld(p, x) * eval_ld(q, x);
    const double got = (p * q)(x);
    EXPECT_NEAR(got, static_cast<double>(want), 1e-10 * (1.0 + std::abs(static_cast<double>(want))));
  }
}

TEST(Poly, DerivativeAndReflection) {
  const Poly p{1.0, 2.0, 3.0, 4.0};
  EXPECT_EQ(p.derivative(), Poly({2.0, 6.0, 12.0}));
  EXPECT_EQ(p.reflected(), Poly({1.0, -2.0, 3.0, -4.0}));
}

TEST(Poly, DivmodByWeight) {
  // (t^3 - t) / (1 - t^2) = -t
  const auto [q, r] = divmod(Poly{0.0, -1.0, 0.0, 1.0}, Poly{1.0, 0.0, -1.0});
  EXPECT_EQ(q, Poly({0.0, -1.0}));
  EXPECT_TRUE(r.is_zero());
}

std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> zs) {
  std::sort(zs.begin(), zs.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return zs;
}

TEST(Roots, KnownFactorizations) {
  auto r = sorted(roots(Poly{1.0, 0.0, -1.0}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].real(), -1.0, 1e-14);
  EXPECT_NEAR(r[1].real(), 1.0, 1e-14);
  EXPECT_EQ(r[0].imag(), 0.0);

  r = sorted(roots(Poly{1.0, 0.0, 1.0}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].imag(), -1.0, 1e-14);
  EXPECT_NEAR(r[1].imag(), 1.0, 1e-14);
  EXPECT_EQ(r[0], std::conj(r[1]));
}

TEST(Roots, QuadraticFormulaOracle) {
  // t^2 - 5t + 6: (5 +- sqrt(25 - 24)) / 2
  const double disc = std::sqrt(25.0 - 24.0);
  const auto r = sorted(roots(Poly{6.0, -5.0, 1.0}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].real(), (5.0 - disc) / 2.0, 1e-13);
  EXPECT_NEAR(r[1].real(), (5.0 + disc) / 2.0, 1e-13);
}

TEST(Roots, ExactZeroRootsArePeeled) {
  const auto r = roots(Poly{0.0, 0.0, 2.0, 2.0});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(std::count(r.begin(), r.end(), std::complex<double>(0.0, 0.0)), 2);
}

TEST(Roots, RandomReconstructionWithinTolerance) {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 300; ++it) {
    const Poly p = random_poly(rng, 1 + static_cast<int>(rng() % 12));
    const auto zs = roots(p);
    ASSERT_EQ(static_cast<int>(zs.size()), p.degree());
    EXPECT_LE(reconstruction_residual(p, zs), 1e-8);
    // Conjugate symmetry: every nonreal root has its mirror in the list.
    for (const auto& z : zs) {
      if (z.imag() == 0.0) continue;
      EXPECT_NE(std::find(zs.begin(), zs.end(), std::conj(z)), zs.end());
    }
  }
}

TEST(Roots, MultipleRootsOfSquares) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    const Poly p = random_poly(rng, 1 + static_cast<int>(rng() % 6));
    const Poly sq = p * p;
    EXPECT_LE(reconstruction_residual(sq, roots(sq)), 1e-8);
  }
}

TEST(Roots, RejectsConstants) {
  EXPECT_THROW(roots(Poly{3.0}), Error);
}

TEST(MinOnInterval, Examples) {
  IntervalMin m = min_on_interval(Poly{0.0, 0.0, 1.0});
  EXPECT_NEAR(m.value, 0.0, 1e-15);
  EXPECT_NEAR(m.argmin, 0.0, 1e-15);

  m = min_on_interval(Poly{0.0, 1.0});
  EXPECT_DOUBLE_EQ(m.value, -1.0);
  EXPECT_DOUBLE_EQ(m.argmin, -1.0);

  // Vertex at 2.5 lies outside [-1, 1]; the function decreases up to t = 1.
  m = min_on_interval(Poly{6.0, -5.0, 1.0});
  EXPECT_DOUBLE_EQ(m.value, 2.0);
  EXPECT_DOUBLE_EQ(m.argmin, 1.0);
}

TEST(MinOnInterval, AgreesWithDenseGrid) {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 100; ++it) {
    const Poly p = random_poly(rng, 2 + static_cast<int>(rng() % 8));
    const IntervalMin m = min_on_interval(p);
    long double grid_min = eval_ld(p, -1.0L);
    for (double x : testing_support::grid(4001)) grid_min = std::min(grid_min, eval_ld(p, x));
    EXPECT_LE(m.value, static_cast<double>(grid_min) + 1e-12);
    EXPECT_NEAR(p(m.argmin), m.value, 1e-12);
  }
}

TEST(MinOnInterval, SquaresAreNonnegative) {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 200; ++it) {
    const Poly p = random_poly(rng, static_cast<int>(rng() % 7));
    const Poly sq = p * p;
    EXPECT_GE(min_on_interval(sq).value, -1e-10 * sq.norm_inf());
  }
}

}  // namespace
