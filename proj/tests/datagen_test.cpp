#include "ppfit/datagen.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "ppfit/errors.hpp"

namespace ppfit {
namespace {

TEST(Generate, PresetAEndpointsAndScaledDomain) {
  const auto g = generate(preset(DatasetId::A));
  ASSERT_EQ(g.points.x.size(), 50u);
  EXPECT_EQ(g.points.x.front(), 0.0);
  EXPECT_EQ(g.points.x.back(), std::numbers::pi / 2);
  EXPECT_EQ(g.samples.x.front(), 0.0);
  EXPECT_EQ(g.samples.x.back(), 4.0);
}

TEST(Generate, PresetsMatchTable) {
  const auto b = preset(DatasetId::B);
  EXPECT_EQ(b.n, 100);
  EXPECT_EQ(b.segments, 2);
  EXPECT_DOUBLE_EQ(b.b, 2 * std::numbers::pi);
  const auto c = preset(DatasetId::C);
  EXPECT_EQ(c.n, 100);
  EXPECT_EQ(c.segments, 3);
  EXPECT_DOUBLE_EQ(c.generator(0.5), std::sin(0.25 * 4 * std::numbers::pi));
  for (auto id : {DatasetId::A, DatasetId::B, DatasetId::C}) {
    const auto g = generate(preset(id));
    EXPECT_EQ(g.samples.x.back(), 2.0 * preset(id).segments);
  }
}

TEST(Generate, NoiseFreeIsBitExact) {
  const auto spec = preset(DatasetId::C);
  const auto g = generate(spec);
  for (std::size_t i = 0; i < g.points.x.size(); ++i)
    EXPECT_EQ(g.points.y[i], spec.generator(g.points.x[i]));
}

TEST(Generate, EqualSpacing) {
  for (auto id : {DatasetId::A, DatasetId::B, DatasetId::C}) {
    const auto g = generate(preset(id));
    const auto& x = g.points.x;
    const double h = x[1] - x[0];
    for (std::size_t i = 1; i < x.size(); ++i) EXPECT_NEAR(x[i] - x[i - 1], h, 1e-12);
  }
}

TEST(Generate, NoiseStatistics) {
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    const auto spec = preset(DatasetId::B, 0.5, seed);
    const auto g = generate(spec);
    ASSERT_EQ(g.points.x.size(), 100u);
    double mean = 0.0;
    for (std::size_t i = 0; i < 100; ++i) mean += g.points.y[i] - spec.generator(g.points.x[i]);
    mean /= 100.0;
    double var = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
      const double r = g.points.y[i] - spec.generator(g.points.x[i]) - mean;
      var += r * r;
    }
    const double sd = std::sqrt(var / 99.0);
    EXPECT_LT(std::abs(mean), 0.2) << "seed " << seed;
    EXPECT_GE(sd, 0.35) << "seed " << seed;
    EXPECT_LE(sd, 0.65) << "seed " << seed;
  }
}

TEST(Generate, Deterministic) {
  const auto a = generate(preset(DatasetId::A, 0.1, 7));
  const auto b = generate(preset(DatasetId::A, 0.1, 7));
  const auto c = generate(preset(DatasetId::A, 0.1, 8));
  EXPECT_EQ(a.points.y, b.points.y);
  EXPECT_NE(a.points.y, c.points.y);
}

TEST(NormalSampler, MomentsOverManyDraws) {
  NormalSampler z(123);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = z();
    s += v;
    s2 += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Csv, ParsesMinimalFile) {
  const auto p = parse_csv("x,y\n0,0\n1,1");
  ASSERT_EQ(p.x.size(), 2u);
  EXPECT_EQ(p.x[1], 1.0);
  EXPECT_EQ(p.y[1], 1.0);
  EXPECT_EQ(parse_csv("x,y\r\n0,1\r\n2,3\r\n").x.size(), 2u);
}

TEST(Csv, BadFieldReportsLine) {
  try {
    parse_csv("x,y\n0,0\n0,abc\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_csv("a,b\n0,0\n"), ParseError);
  EXPECT_THROW(parse_csv("x,y\n0,0,0\n"), ParseError);
}

TEST(Csv, NonMonotoneAbscissaRejected) {
  EXPECT_THROW(parse_csv("x,y\n0,0\n1,1\n1,2\n"), UsageError);
  EXPECT_THROW(parse_csv("x,y\n0,0\n-1,1\n"), UsageError);
}

TEST(Csv, RoundTripIsBitExact) {
  const auto g = generate(preset(DatasetId::C, 0.5, 0));
  const auto path = std::filesystem::temp_directory_path() / "ppfit_datagen_roundtrip.csv";
  write_csv(g.points, path);
  const auto back = read_csv(path);
  EXPECT_EQ(back.x, g.points.x);
  EXPECT_EQ(back.y, g.points.y);
  EXPECT_EQ(format_csv(back), format_csv(g.points));
  std::filesystem::remove(path);
  EXPECT_THROW(read_csv(path), IoError);
}

TEST(Rescale, MapsToSegmentUnits) {
  const auto g = generate(preset(DatasetId::B));
  const auto s = rescale(g.points, 5);
  EXPECT_EQ(s.x.front(), 0.0);
  EXPECT_EQ(s.x.back(), 10.0);
  EXPECT_EQ(s.y, g.points.y);
}

TEST(DatasetNames, Parse) {
  EXPECT_EQ(parse_dataset("A"), DatasetId::A);
  EXPECT_EQ(parse_dataset("c"), DatasetId::C);
  EXPECT_THROW(parse_dataset("D"), UsageError);
}

}  // namespace
}  // namespace ppfit
