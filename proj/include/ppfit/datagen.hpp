#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <string_view>

#include "ppfit/samples.hpp"

namespace ppfit {

enum class DatasetId { A, B, C, Custom };

std::string_view to_string(DatasetId id);
DatasetId parse_dataset(std::string_view name);

struct DatasetSpec {
  DatasetId id = DatasetId::Custom;
  std::string formula;  // human-readable description of generator
  std::function<double(double)> generator;
  double a = 0.0;
  double b = 1.0;
  int n = 2;
  int segments = 1;
  double noise_scale = 0.0;
  std::uint64_t seed = 0;
};

// Reference datasets:
//   A  sin(x)          on [0, pi/2]  n=50   m=2
//   B  sin(x)          on [0, 2pi]   n=100  m=2
//   C  sin(4 pi x^2)   on [0, 1]     n=100  m=3
DatasetSpec preset(DatasetId id, double noise_scale = 0.0,
                   std::uint64_t seed = 0);

// Standard normal variates from mt19937_64 via the Box-Muller transform.
// The output sequence depends only on the seed, not on the standard library.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
  double operator()();

 private:
  double uniform();  // (0, 1], 53 random bits

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct GeneratedData {
  PointCloud points;  // original units
  SampleSet samples;  // scaled so every segment has width 2
};

// n equally spaced samples on [a, b] (endpoints included), plus
// noise_scale * N(0, 1) when noise_scale > 0.
GeneratedData generate(const DatasetSpec& spec);

// CSV with header "x,y", one sample per line. Reading requires strictly
// increasing x and reports the 1-based line number of the first bad row.
PointCloud read_csv(const std::filesystem::path& path);
PointCloud parse_csv(std::string_view text);
void write_csv(const PointCloud& points, const std::filesystem::path& path);
std::string format_csv(const PointCloud& points);

}  // namespace ppfit
