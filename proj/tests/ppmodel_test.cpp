#include "ppfit/ppmodel.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ppfit/errors.hpp"
#include "test_support.hpp"

namespace ppfit {
namespace {

TEST(LocateSegment, LeftTieRule) {
  const auto pp = PiecewisePolynomial::zeros({0, 2, 4}, 1, BasisKind::Power);
  // 0-based: segment 0 is [xi_0, xi_1].
  EXPECT_EQ(pp.locate(1.0), 0);
  EXPECT_EQ(pp.locate(2.0), 0);
  EXPECT_EQ(pp.locate(4.0), 1);
  EXPECT_EQ(pp.locate(0.0), 0);
  EXPECT_EQ(pp.locate(2.0000001), 1);
}

TEST(LocateSegment, OutsideDomainThrows) {
  const auto pp = PiecewisePolynomial::zeros({0, 2, 4}, 1, BasisKind::Power);
  EXPECT_THROW(pp.locate(-1e-9), DomainError);
  EXPECT_THROW(pp.locate(4.5), DomainError);
  EXPECT_THROW(pp.evaluate(std::nan("")), DomainError);
}

TEST(EvalPP, ConstantAndDerivatives) {
  const PiecewisePolynomial pp({0, 2, 4, 6}, {{3, 0, 0}, {3, 0, 0}, {3, 0, 0}},
                               BasisKind::Chebyshev);
  for (double x : {0.0, 1.3, 2.0, 4.9, 6.0}) {
    EXPECT_DOUBLE_EQ(pp.evaluate(x), 3.0);
    EXPECT_DOUBLE_EQ(pp.evaluate(x, 1), 0.0);
  }
  EXPECT_EQ(pp.evaluate(1.0, 5), 0.0);
}

TEST(EvalPP, CenteredSquare) {
  // (x - 1)^2 on [0, 2], mu = 1.
  const PiecewisePolynomial pp({0, 2}, {{0, 0, 1}}, BasisKind::Power);
  EXPECT_DOUBLE_EQ(pp.segment(0).mu, 1.0);
  EXPECT_DOUBLE_EQ(pp.evaluate(2.0), 1.0);
  EXPECT_DOUBLE_EQ(pp.evaluate(2.0, 1), 2.0);
  EXPECT_DOUBLE_EQ(pp.evaluate(0.5, 2), 2.0);
}

TEST(PiecewisePolynomial, RejectsBadConstruction) {
  EXPECT_THROW(PiecewisePolynomial({0, 2}, {{1}, {1}}, BasisKind::Power), UsageError);
  EXPECT_THROW(PiecewisePolynomial({0, 0}, {{1}}, BasisKind::Power), UsageError);
  EXPECT_THROW(PiecewisePolynomial({0, 2, 4}, {{1, 2}, {1}}, BasisKind::Power),
               UsageError);
  EXPECT_THROW(PiecewisePolynomial({0, 2}, {{std::nan("")}}, BasisKind::Power),
               UsageError);
}

TEST(PiecewisePolynomial, FlatCoefficientsRoundTrip) {
  std::mt19937_64 rng(1);
  const auto pp = testing::random_pp(rng, 3, 4, BasisKind::Chebyshev);
  const auto flat = pp.flat_coefficients();
  ASSERT_EQ(flat.size(), 15u);
  EXPECT_EQ(flat[5], pp.segment(1).coeffs.coeffs[0]);
  EXPECT_EQ(pp.with_coefficients(flat).flat_coefficients(), flat);
  EXPECT_THROW(pp.with_coefficients(std::vector<double>(3)), UsageError);
}

TEST(BuildTransform, Examples) {
  const auto b = build_transform(0.0, 2.0 * std::numbers::pi, 2);
  EXPECT_NEAR(b.scale, 2.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(b.to_scaled(2.0 * std::numbers::pi), 4.0, 1e-14);

  const auto e = build_transform(0.0, 8.0, 4);
  EXPECT_DOUBLE_EQ(e.scale, 1.0);
  EXPECT_DOUBLE_EQ(e.to_scaled(8.0), 8.0);

  const auto u = build_transform(0.0, 1.0, 1);
  EXPECT_DOUBLE_EQ(u.scale, 2.0);
  const auto pp = PiecewisePolynomial::zeros(uniform_knots(1), 0, BasisKind::Power);
  EXPECT_DOUBLE_EQ(pp.segment(0).mu, 1.0);

  EXPECT_THROW(build_transform(1.0, 1.0, 2), UsageError);
  EXPECT_THROW(build_transform(0.0, 1.0, 0), UsageError);
}

TEST(BuildTransform, SegmentsHaveWidthTwo) {
  for (int m = 1; m <= 9; ++m) {
    const auto t = build_transform(-3.7, 11.2, m);
    const double width = (t.to_scaled(11.2) - t.to_scaled(-3.7)) / m;
    EXPECT_NEAR(width, 2.0, 1e-12);
    const auto knots = uniform_knots(m);
    for (int i = 1; i <= m; ++i) EXPECT_NEAR(knots[i] - knots[i - 1], 2.0, 1e-12);
  }
}

TEST(ExportForm, IdentityTransformPowerBasis) {
  const PiecewisePolynomial pp({0, 2, 4}, {{1, 2, 3}, {-1, 0.5, 0.25}},
                               BasisKind::Power);
  const auto ex = to_export_form(pp, {1.0, 0.0});
  for (double x = 0.0; x <= 4.0; x += 0.125)
    EXPECT_NEAR(ex.evaluate(x), pp.evaluate(x), 1e-13);
  // Absolute coefficients of 1 + 2(x-1) + 3(x-1)^2 = 2 - 4x + 3x^2.
  const auto abs0 = absolute_power_coefficients(ex, 0);
  EXPECT_NEAR(abs0[0], 2.0, 1e-14);
  EXPECT_NEAR(abs0[1], -4.0, 1e-14);
  EXPECT_NEAR(abs0[2], 3.0, 1e-14);
}

TEST(ExportForm, ChebyshevT1UnderScaling) {
  // T_1 segment on scaled [0, 2] with mu = 1: f(x') = x' - 1, x' = 2x.
  const PiecewisePolynomial pp({0, 2}, {{0, 1}}, BasisKind::Chebyshev);
  const DomainTransform t{2.0, 0.0};
  const auto ex = to_export_form(pp, t);
  EXPECT_NEAR(ex.domain_begin(), 0.0, 1e-15);
  EXPECT_NEAR(ex.domain_end(), 1.0, 1e-15);
  const auto abs = absolute_power_coefficients(ex, 0);
  EXPECT_NEAR(abs[0], -1.0, 1e-14);
  EXPECT_NEAR(abs[1], 2.0, 1e-14);
  for (double x = 0.0; x <= 1.0; x += 0.01)
    EXPECT_NEAR(ex.evaluate(x), pp.evaluate(t.to_scaled(x)), 1e-10);
}

TEST(ExportForm, PreservesValuesAndDerivativesOfRandomPP) {
  std::mt19937_64 rng(42);
  for (auto basis : {BasisKind::Chebyshev, BasisKind::Power}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 1 + trial % 4;
      const auto pp = testing::random_pp(rng, m, 7, basis, 1.0);
      const auto t = build_transform(0.3 + trial, 2.0 * std::numbers::pi + trial, m);
      const auto ex = to_export_form(pp, t);
      for (int i = 0; i < m; ++i) {
        const double a = ex.knots()[i], b = ex.knots()[i + 1];
        for (int probe = 0; probe < 100; ++probe) {
          const double x = a + (b - a) * (probe + 0.5) / 100.0;
          const double xs = std::clamp(t.to_scaled(x), pp.segment(i).mu - 1.0,
                                       pp.segment(i).mu + 1.0);
          double chain = 1.0;
          for (int order = 0; order <= 3; ++order) {
            const double expected = pp.segment(i)(xs, order) * chain;
            const double got = ex.segment(i)(x, order);
            EXPECT_NEAR(got, expected, 1e-8 * std::max(1.0, std::abs(expected)));
            chain *= t.scale;
          }
        }
      }
    }
  }
}

TEST(ComposeAffine, ExpandsSubstitution) {
  // p(u) = 1 + u + u^2 with u = 2v + 3 -> 13 + 14v + 4v^2
  const auto c = compose_affine(std::vector<double>{1, 1, 1}, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(c[0], 13.0);
  EXPECT_DOUBLE_EQ(c[1], 14.0);
  EXPECT_DOUBLE_EQ(c[2], 4.0);
}

}  // namespace
}  // namespace ppfit
