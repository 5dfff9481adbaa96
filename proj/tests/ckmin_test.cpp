#include "ppfit/ckmin.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ppfit/errors.hpp"
#include "ppfit/loss.hpp"
#include "test_support.hpp"

namespace ppfit {
namespace {

double max_jump(const PiecewisePolynomial& pp, int k, BoundaryMode mode) {
  double worst = 0.0;
  for (const auto& j : derivative_jumps(pp, k, mode))
    worst = std::max(worst, std::abs(j.value));
  return worst;
}

TEST(DerivativeConditionRow, Examples) {
  EXPECT_EQ(derivative_condition_row(1.0, 0, 1), (std::vector<double>{1, 1}));
  EXPECT_EQ(derivative_condition_row(2.0, 1, 3), (std::vector<double>{0, 1, 4, 12}));
  EXPECT_EQ(derivative_condition_row(0.0, 3, 7),
            (std::vector<double>{0, 0, 0, 6, 0, 0, 0, 0}));
}

TEST(Ckmin, HandSolvedStep) {
  // p_1 = 0, p_2 = 1 on [0,2],[2,4], k = 0: q_1 = x/4, q_2 = -0.5 + (x-2)/4.
  for (auto basis : {BasisKind::Power, BasisKind::Chebyshev}) {
    const PiecewisePolynomial pp({0, 2, 4}, {{0, 0}, {1, 0}}, basis);
    const auto out = ckmin(pp, 0);
    for (double x = 0.0; x <= 2.0; x += 0.25)
      EXPECT_NEAR(out.segment(0)(x), x / 4.0, 1e-12);
    for (double x = 2.0; x <= 4.0; x += 0.25)
      EXPECT_NEAR(out.segment(1)(x), 1.0 - 0.5 + (x - 2.0) / 4.0, 1e-12);
    EXPECT_NEAR(out.segment(0)(2.0), 0.5, 1e-12);
    EXPECT_NEAR(out.segment(1)(2.0), 0.5, 1e-12);
  }
}

TEST(Ckmin, SingleSegmentUnchanged) {
  std::mt19937_64 rng(1);
  const auto pp = testing::random_pp(rng, 1, 7, BasisKind::Chebyshev);
  const auto out = ckmin(pp, 3);
  const auto a = pp.flat_coefficients(), b = out.flat_coefficients();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Ckmin, ContinuousInputGetsNegligibleCorrection) {
  // One global polynomial split over three segments.
  const std::vector<double> g = {0.2, -1.0, 0.4, 0.3, -0.05, 0.01, 0.002, -0.0004};
  std::vector<std::vector<double>> pieces;
  for (double mu : {1.0, 3.0, 5.0}) pieces.push_back(compose_affine(g, 1.0, mu));
  const PiecewisePolynomial pp(uniform_knots(3), pieces, BasisKind::Power);
  const auto out = ckmin(pp, 3);
  const auto a = pp.flat_coefficients(), b = out.flat_coefficients();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST(Ckmin, EstablishesContinuityAndPreservesEnds) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + trial % 5;
    const auto basis = trial % 2 ? BasisKind::Power : BasisKind::Chebyshev;
    const int degree = 7 + trial % 3;
    const auto pp = testing::random_pp(rng, m, degree, basis, 10.0);
    const auto out = ckmin(pp, 3);
    EXPECT_LT(max_jump(out, 3, BoundaryMode::Open), 1e-8);
    EXPECT_LT(ck_loss(out, {1.0, 3, BoundaryMode::Open, Regularization::None}), 1e-16);
    EXPECT_EQ(out.degree(), degree);
    const double a = pp.domain_begin(), b = pp.domain_end();
    for (int j = 0; j <= 3; ++j) {
      EXPECT_NEAR(out.segment(0)(a, j), pp.segment(0)(a, j), 1e-9);
      EXPECT_NEAR(out.segment(m - 1)(b, j), pp.segment(m - 1)(b, j), 1e-9);
    }
    // Corrections have degree at most 2k+1.
    for (int i = 0; i < m; ++i) {
      const auto diff = to_basis(
          CoeffVector{[&] {
                        auto c = out.segment(i).coeffs.coeffs;
                        for (int l = 0; l <= degree; ++l) c[l] -= pp.segment(i).coeffs.coeffs[l];
                        return c;
                      }(),
                      basis},
          BasisKind::Power);
      for (int l = 8; l <= degree; ++l) EXPECT_NEAR(diff.coeffs[l], 0.0, 1e-9);
    }
  }
}

TEST(Ckmin, IdempotentAndDeterministic) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pp = testing::random_pp(rng, 4, 7, BasisKind::Chebyshev, 10.0);
    const auto once = ckmin(pp, 3);
    const auto twice = ckmin(once, 3);
    const auto a = once.flat_coefficients(), b = twice.flat_coefficients();
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-8);
    EXPECT_EQ(ckmin(pp, 3).flat_coefficients(), a);
  }
}

TEST(Ckmin, LowerOrders) {
  std::mt19937_64 rng(6);
  for (int k = 0; k <= 4; ++k) {
    const auto pp = testing::random_pp(rng, 3, 2 * k + 1, BasisKind::Chebyshev, 5.0);
    EXPECT_LT(max_jump(ckmin(pp, k), k, BoundaryMode::Open), 1e-8) << "k=" << k;
  }
}

TEST(Ckmin, PeriodicAndCyclicWrap) {
  std::mt19937_64 rng(21);
  for (int m = 1; m <= 4; ++m) {
    const auto pp = testing::random_pp(rng, m, 7, BasisKind::Chebyshev, 3.0);
    const auto periodic = ckmin(pp, 3, BoundaryMode::Periodic);
    EXPECT_LT(max_jump(periodic, 3, BoundaryMode::Periodic), 1e-8) << "m=" << m;

    const auto cyclic = ckmin(pp, 3, BoundaryMode::Cyclic);
    EXPECT_LT(max_jump(cyclic, 3, BoundaryMode::Cyclic), 1e-8) << "m=" << m;
    // The positional offset between the ends is kept.
    EXPECT_NEAR(cyclic.evaluate(cyclic.domain_end()) - cyclic.evaluate(0.0),
                pp.segment(m - 1)(pp.domain_end()) - pp.segment(0)(0.0), 1e-9);
  }
}

TEST(Ckmin, DegreeTooLow) {
  const auto pp = PiecewisePolynomial::zeros(uniform_knots(2), 5, BasisKind::Power);
  EXPECT_THROW(ckmin(pp, 3), UsageError);
}

}  // namespace
}  // namespace ppfit
