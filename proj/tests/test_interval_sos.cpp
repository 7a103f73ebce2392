#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support.hpp"

namespace {

using namespace tentpole;
using testing_support::eval_ld;
using testing_support::grid;
using testing_support::random_nonneg_poly;

void expect_coeffs_near(const Poly& got, const Poly& want, double tol) {
  const std::size_t n = std::max(got.size(), want.size());
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], want[i], tol) << "coefficient " << i;
}

double rel_diff(const Poly& a, const Poly& b) { return (a - b).norm_inf() / b.norm_inf(); }

TEST(Lukacs, Constant) {
  const LukacsForm lf = lukacs_decompose(Poly{1.0});
  EXPECT_EQ(lf.parity, Parity::even);
  expect_coeffs_near(lf.p * lf.p, Poly{1.0}, 1e-14);
  EXPECT_TRUE(lf.q.is_zero());
}

TEST(Lukacs, IntervalWeight) {
  const LukacsForm lf = lukacs_decompose(Poly{1.0, 0.0, -1.0});
  EXPECT_EQ(lf.parity, Parity::even);
  EXPECT_TRUE(lf.p.is_zero());
  expect_coeffs_near(lf.q * lf.q, Poly{1.0}, 1e-14);
}

TEST(Lukacs, QuadraticMatchesAnsatz) {
  // p = at + b, q = c with p^2 + (1-t^2) q^2 = t^2 - 5t + 6 gives
  // 4 c^4 - 20 c^2 + 1 = 0; the degree-sharp root is the smaller one.
  const double c2 = (20.0 - std::sqrt(400.0 - 16.0)) / 8.0;
  EXPECT_NEAR(c2, (5.0 - 2.0 * std::sqrt(6.0)) / 2.0, 1e-15);

  const Poly f{6.0, -5.0, 1.0};
  const LukacsForm lf = lukacs_decompose(f);
  EXPECT_EQ(lf.parity, Parity::even);
  EXPECT_LE(lf.p.degree(), 1);
  EXPECT_LE(lf.q.degree(), 0);
  EXPECT_NEAR(lf.q[0] * lf.q[0], c2, 1e-12);
  EXPECT_LE(rel_diff(lf.value(), f), 1e-12);
}

TEST(Lukacs, OddDegree) {
  const Poly f{2.0, 1.0, 0.5, 0.25};  // positive on [-1, 1]
  const LukacsForm lf = lukacs_decompose(f);
  EXPECT_EQ(lf.parity, Parity::odd);
  EXPECT_LE(lf.p.degree(), 1);
  EXPECT_LE(lf.q.degree(), 1);
  EXPECT_LE(rel_diff(lf.value(), f), 1e-10);
}

TEST(Lukacs, RejectsNegativeInput) {
  try {
    lukacs_decompose(Poly{0.0, 1.0});
    FAIL() << "expected NotNonnegative";
  } catch (const NotNonnegativeError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_nonnegative);
    EXPECT_LT(e.witness().value, 0.0);
  }
}

TEST(Lukacs, RootsOnAndNearTheEndpoints) {
  const std::vector<Poly> cases = {
      Poly{1.0, 1.0},                          // 1 + t
      Poly{1.0, -1.0},                         // 1 - t
      Poly{1.0, 2.0, 1.0},                     // (1 + t)^2
      Poly{0.0, 0.0, 1.0},                     // t^2
      Poly{1.0, 0.0, -1.0} * Poly{0.0, 0.0, 1.0},  // t^2 (1 - t^2)
      Poly{1.0, 1.0} * Poly{1.0, 1.0} * Poly{1.0, -1.0},
      Poly{0.25, -1.0, 1.0},                   // (t - 1/2)^2
  };
  for (const Poly& f : cases) {
    const LukacsForm lf = lukacs_decompose(f);
    EXPECT_LE(rel_diff(lf.value(), f), 1e-10) << "degree " << f.degree();
  }
}

TEST(Kms, OnePlusT) {
  const KmsForm k = kms_form(Poly{1.0, 1.0});
  expect_coeffs_near(k.s0.value(), Poly{0.5, 1.0, 0.5}, 1e-12);
  expect_coeffs_near(k.s1.value(), Poly{0.5}, 1e-12);
}

TEST(Kms, TrivialCases) {
  KmsForm k = kms_form(Poly{1.0});
  expect_coeffs_near(k.s0.value(), Poly{1.0}, 1e-14);
  EXPECT_TRUE(k.s1.value().is_zero());

  k = kms_form(Poly{1.0, 0.0, -1.0});
  EXPECT_TRUE(k.s0.value().is_zero());
  expect_coeffs_near(k.s1.value(), Poly{1.0}, 1e-14);

  k = kms_form(Poly{});
  EXPECT_TRUE(k.s0.value().is_zero());
  EXPECT_TRUE(k.s1.value().is_zero());
}

TEST(Kms, EvenCaseUsesOneSquareEach) {
  const KmsForm k = kms_form(Poly{6.0, -5.0, 1.0});
  EXPECT_TRUE(k.s0.v.is_zero());
  EXPECT_TRUE(k.s1.v.is_zero());
}

TEST(Kms, RandomDegreeBoundsAndResidual) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 200; ++it) {
    const Poly f = random_nonneg_poly(rng, static_cast<int>(rng() % 13));
    const KmsForm k = kms_form(f);
    EXPECT_LE(k.s0.value().degree(), f.degree() + 1);
    if (f.degree() == 0) {
      EXPECT_TRUE(k.s1.value().is_zero());
    } else {
      EXPECT_LE(k.s1.value().degree(), f.degree() - 1);
    }
    EXPECT_LE(rel_diff(k.value(), f), 1e-8);
  }
}

TEST(BoundarySqrt, ConstantHandTrace) {
  // s0 = 1, g = 1, l = (1 - t)/2 - (1 + t)/2 = -t.
  const Poly s = boundary_matched_sqrt(Poly{1.0}, 1.0, -1.0);
  expect_coeffs_near(s, Poly{0.0, -1.0}, 1e-14);
}

TEST(BoundarySqrt, DegenerateEndsGiveZero) {
  EXPECT_TRUE(boundary_matched_sqrt(Poly{1.0, 0.0, -1.0}, 0.0, 0.0).is_zero());
}

TEST(BoundarySqrt, SquareOfOnePlusT) {
  const Poly f{1.0, 2.0, 1.0};
  const Poly s = boundary_matched_sqrt(f, 0.0, 2.0);
  EXPECT_NEAR(s(-1.0), 0.0, 1e-12);
  EXPECT_NEAR(s(1.0), 2.0, 1e-12);
  for (double x : grid()) {
    EXPECT_LE(eval_ld(s, x) * eval_ld(s, x), eval_ld(f, x) + 1e-8 * f.norm_inf());
  }
}

TEST(BoundarySqrt, InfeasibleBoundary) {
  try {
    boundary_matched_sqrt(Poly{1.0}, 2.0, 0.0);
    FAIL() << "expected BoundaryInfeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::boundary_infeasible);
  }
}

TEST(BoundarySqrt, RandomDominanceInterpolationDegree) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    const Poly f = random_nonneg_poly(rng, static_cast<int>(rng() % 11));
    const double a = unif(rng) * std::sqrt(std::max(f(-1.0), 0.0));
    const double b = unif(rng) * std::sqrt(std::max(f(1.0), 0.0));
    const Poly s = boundary_matched_sqrt(f, a, b);
    const double scale = 1.0 + f.norm_inf();
    EXPECT_LE(std::abs(s(-1.0) - a), 1e-8 * scale);
    EXPECT_LE(std::abs(s(1.0) - b), 1e-8 * scale);
    for (double x : grid()) {
      EXPECT_LE(eval_ld(s, x) * eval_ld(s, x), eval_ld(f, x) + 1e-8 * f.norm_inf());
    }
    if (!s.is_zero()) {
      EXPECT_LE(2 * s.degree(), f.degree() + 3);
    }
  }
}

TEST(AdaptSos, ConstantInterpolatedByConstant) {
  const AdaptResult r = adapt_sos(Poly{1.0}, {1.0}, {1.0}, MatchEnds::both);
  ASSERT_EQ(r.squares.size(), 3u);
  expect_coeffs_near(r.squares[0], Poly{1.0}, 1e-14);
  EXPECT_TRUE(r.squares[1].is_zero());
  EXPECT_TRUE(r.squares[2].is_zero());
  EXPECT_TRUE(r.remainder.value().is_zero());
}

TEST(AdaptSos, SignFlipContinuesWithKms) {
  const AdaptResult r = adapt_sos(Poly{1.0}, {1.0}, {-1.0}, MatchEnds::both);
  ASSERT_EQ(r.squares.size(), 3u);
  expect_coeffs_near(r.squares[0], Poly{0.0, -1.0}, 1e-14);
  for (int i = 1; i <= 2; ++i) {
    EXPECT_NEAR(r.squares[static_cast<std::size_t>(i)](-1.0), 0.0, 1e-12);
    EXPECT_NEAR(r.squares[static_cast<std::size_t>(i)](1.0), 0.0, 1e-12);
  }
  // 1 - t^2 is the weight itself: s2 = s3 = 0 and r = 1.
  EXPECT_TRUE(r.squares[1].is_zero());
  EXPECT_TRUE(r.squares[2].is_zero());
  expect_coeffs_near(r.remainder.value(), Poly{1.0}, 1e-14);
  expect_coeffs_near(r.value(), Poly{1.0}, 1e-14);
}

TEST(AdaptSos, PureRemainder) {
  const AdaptResult r = adapt_sos(Poly{1.0, 0.0, -1.0}, {}, {}, MatchEnds::both);
  ASSERT_EQ(r.squares.size(), 2u);
  EXPECT_TRUE(r.squares[0].is_zero());
  EXPECT_TRUE(r.squares[1].is_zero());
  expect_coeffs_near(r.remainder.value(), Poly{1.0}, 1e-14);
}

TEST(AdaptSos, RejectsMismatchedNorms) {
  EXPECT_THROW(adapt_sos(Poly{1.0}, {0.5}, {1.0}, MatchEnds::both), Error);
}

// Boundary vectors with the prescribed squared norms in random directions.
std::vector<double> random_direction(std::mt19937_64& rng, std::size_t k, double norm2) {
  std::normal_distribution<double> gauss;
  std::vector<double> v(k);
  double n = 0.0;
  for (double& x : v) {
    x = gauss(rng);
    n += x * x;
  }
  for (double& x : v) x *= std::sqrt(std::max(norm2, 0.0) / n);
  return v;
}

TEST(AdaptSos, RandomBothEnds) {
  std::mt19937_64 rng(8);
  for (int k = 1; k <= 6; ++k) {
    for (int it = 0; it < 20; ++it) {
      const Poly f = random_nonneg_poly(rng, static_cast<int>(rng() % 9));
      const auto a = random_direction(rng, static_cast<std::size_t>(k), f(-1.0));
      const auto b = random_direction(rng, static_cast<std::size_t>(k), f(1.0));
      const AdaptResult r = adapt_sos(f, a, b, MatchEnds::both);
      ASSERT_EQ(r.squares.size(), static_cast<std::size_t>(k) + 2);
      EXPECT_LE(rel_diff(r.value(), f), 1e-8);
      const int bound = f.degree() + 3 * k + 1;
      for (std::size_t i = 0; i < r.squares.size(); ++i) {
        if (i < a.size()) {
          EXPECT_NEAR(r.squares[i](-1.0), a[i], 1e-7);
          EXPECT_NEAR(r.squares[i](1.0), b[i], 1e-7);
        } else {
          EXPECT_NEAR(r.squares[i](-1.0), 0.0, 1e-7);
          EXPECT_NEAR(r.squares[i](1.0), 0.0, 1e-7);
        }
        if (!r.squares[i].is_zero()) {
          EXPECT_LE(2 * r.squares[i].degree(), bound);
        }
      }
      EXPECT_LE(r.remainder.value().degree(), bound);
      double left = 0.0;
      double right = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        left += r.squares[i](-1.0) * r.squares[i](-1.0);
        right += r.squares[i](1.0) * r.squares[i](1.0);
      }
      EXPECT_NEAR(left, f(-1.0), 1e-8 * (1.0 + std::abs(f(-1.0))));
      EXPECT_NEAR(right, f(1.0), 1e-8 * (1.0 + std::abs(f(1.0))));
    }
  }
}

TEST(AdaptSos, RightEndOnly) {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 50; ++it) {
    const Poly f = random_nonneg_poly(rng, 2 + static_cast<int>(rng() % 7));
    const std::size_t k = 1 + rng() % 4;
    const auto b = random_direction(rng, k, f(1.0));
    const AdaptResult r = adapt_sos(f, {}, b, MatchEnds::right_only);
    ASSERT_EQ(r.squares.size(), k + 2);
    EXPECT_LE(rel_diff(r.value(), f), 1e-8);
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(r.squares[i](1.0), b[i], 1e-7);
    EXPECT_NEAR(r.squares[k](1.0), 0.0, 1e-7);
    EXPECT_NEAR(r.squares[k + 1](1.0), 0.0, 1e-7);
  }
}

TEST(AdaptSos, LeftEndOnly) {
  const Poly f{2.0, 0.5, 1.0};
  const AdaptResult r = adapt_sos(f, {1.5, -0.5}, {}, MatchEnds::left_only);
  EXPECT_NEAR(r.squares[0](-1.0), 1.5, 1e-10);
  EXPECT_NEAR(r.squares[1](-1.0), -0.5, 1e-10);
  EXPECT_LE(rel_diff(r.value(), f), 1e-8);
}

TEST(AdaptSos, MatchedEndVanishes) {
  // f = (1 - t)(2 + t) vanishes at the matched end only.
  const Poly f = Poly{1.0, -1.0} * Poly{2.0, 1.0};
  for (MatchEnds match : {MatchEnds::right_only, MatchEnds::left_only}) {
    const Poly g = match == MatchEnds::right_only ? f : f.reflected();
    const std::vector<double> zeros(3, 0.0);
    const AdaptResult r = match == MatchEnds::right_only
                              ? adapt_sos(g, {}, zeros, match)
                              : adapt_sos(g, zeros, {}, match);
    EXPECT_LE(rel_diff(r.value(), g), 1e-8);
    const double matched = match == MatchEnds::right_only ? 1.0 : -1.0;
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.squares[i](matched), 0.0, 1e-7);
  }
}

TEST(AdaptSos, ZeroInput) {
  const AdaptResult r = adapt_sos(Poly{}, {0.0, 0.0}, {0.0, 0.0}, MatchEnds::both);
  ASSERT_EQ(r.squares.size(), 4u);
  for (const Poly& s : r.squares) EXPECT_TRUE(s.is_zero());
}

}  // namespace
