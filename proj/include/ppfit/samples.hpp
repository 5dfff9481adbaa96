#pragma once

#include <vector>

#include "ppfit/ppmodel.hpp"

namespace ppfit {

// Raw (x, y) points in original units, as read from or written to CSV.
struct PointCloud {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
};

// Samples on the scaled x axis together with the map back to original units.
struct SampleSet {
  std::vector<double> x;
  std::vector<double> y;
  DomainTransform transform;

  std::size_t size() const { return x.size(); }
};

// Applies build_transform([x_1, x_n], segments). Scaled abscissae are clamped
// to [0, 2*segments] so rounding never pushes an endpoint off the domain.
SampleSet rescale(const PointCloud& points, int segments);

}  // namespace ppfit
