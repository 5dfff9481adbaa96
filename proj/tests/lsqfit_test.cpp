#include "ppfit/lsqfit.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ppfit/datagen.hpp"
#include "ppfit/errors.hpp"
#include "ppfit/loss.hpp"

namespace ppfit {
namespace {

SampleSet sampled(const std::function<double(double)>& f, int n, int segments) {
  SampleSet s;
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * segments * i / (n - 1);
    s.x.push_back(x);
    s.y.push_back(f(x));
  }
  return s;
}

TEST(FitSegmentwise, RecoversExactPolynomial) {
  const auto cubic = [](double x) { return 0.5 - x + 0.25 * x * x - 0.03 * x * x * x; };
  const auto data = sampled(cubic, 40, 2);
  for (auto basis : {BasisKind::Chebyshev, BasisKind::Power}) {
    const auto fit = fit_segmentwise(data, uniform_knots(2), 3, basis);
    EXPECT_LT(l2_loss(fit, data), 1e-18);
    for (double x = 0.0; x <= 4.0; x += 0.1) EXPECT_NEAR(fit.evaluate(x), cubic(x), 1e-12);
  }
}

TEST(FitSegmentwise, CollinearPointsGiveInterpolatingLine) {
  SampleSet s;
  s.x = {0.0, 1.0, 2.0};
  s.y = {1.0, 2.0, 3.0};
  const auto fit = fit_segmentwise(s, uniform_knots(1), 1, BasisKind::Power);
  EXPECT_NEAR(fit.segment(0).coeffs.coeffs[0], 2.0, 1e-14);
  EXPECT_NEAR(fit.segment(0).coeffs.coeffs[1], 1.0, 1e-14);
  EXPECT_NEAR(l2_loss(fit, s), 0.0, 1e-28);
}

TEST(FitSegmentwise, UnderdeterminedSegmentNamesSegment) {
  SampleSet s;
  s.x = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
  s.y.assign(s.x.size(), 1.0);
  try {
    fit_segmentwise(s, uniform_knots(2), 3, BasisKind::Chebyshev);
    FAIL() << "expected ConditioningError";
  } catch (const ConditioningError& e) {
    EXPECT_NE(std::string(e.what()).find("segment 2"), std::string::npos) << e.what();
  }
}

TEST(FitSegmentwise, RepeatedAbscissaeAreRankDeficient) {
  SampleSet s;
  s.x = {0.5, 0.5, 0.5, 1.5, 1.5, 1.5};
  s.y = {1, 2, 3, 4, 5, 6};
  EXPECT_THROW(fit_segmentwise(s, uniform_knots(1), 3, BasisKind::Power),
               ConditioningError);
}

TEST(FitSegmentwise, BasisIndependentMinimizer) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> noise(0.0, 0.3);
  auto data = sampled([](double x) { return std::cos(x); }, 90, 3);
  for (auto& y : data.y) y += noise(rng);
  for (int d = 1; d <= 9; ++d) {
    const auto c = fit_segmentwise(data, uniform_knots(3), d, BasisKind::Chebyshev);
    const auto p = fit_segmentwise(data, uniform_knots(3), d, BasisKind::Power);
    for (double x = 0.0; x <= 6.0; x += 0.05) {
      const double a = c.evaluate(x), b = p.evaluate(x);
      EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(Baselines, SingleSegmentIsUnchangedByCkmin) {
  const auto data = generate(preset(DatasetId::A, 0.1, 0)).points;
  const auto s = rescale(data, 1);
  const auto r = baselines(s, uniform_knots(1), 7, BasisKind::Chebyshev, 3);
  EXPECT_EQ(r.l2_star, r.l2_star_tilde);
}

TEST(Baselines, OrderingHoldsAcrossDatasets) {
  for (auto id : {DatasetId::A, DatasetId::B, DatasetId::C})
    for (double noise : {0.0, 0.1, 0.5}) {
      const auto g = generate(preset(id, noise, 0));
      for (int k = 0; k <= 3; ++k) {
        const auto r = baselines(g.samples, uniform_knots(preset(id).segments), 7,
                                 BasisKind::Chebyshev, k);
        EXPECT_LE(r.l2_star, r.l2_star_tilde);
      }
    }
}

TEST(Baselines, DegreeTooLowForK) {
  const auto g = generate(preset(DatasetId::B));
  EXPECT_THROW(baselines(g.samples, uniform_knots(2), 5, BasisKind::Power, 3), UsageError);
}

}  // namespace
}  // namespace ppfit
