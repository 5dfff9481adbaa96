#pragma once

#include <span>

#include "ppfit/ppmodel.hpp"
#include "ppfit/samples.hpp"

namespace ppfit {

// Independent least-squares polynomial per segment, solved by column-pivoted
// Householder QR on the local-coordinate design matrix. Throws
// ConditioningError naming the segment if it holds fewer than degree+1
// samples or the design matrix is rank deficient.
PiecewisePolynomial fit_segmentwise(const SampleSet& data,
                                    std::span<const double> knots, int degree,
                                    BasisKind basis);

struct BaselineReport {
  double l2_star = 0.0;        // l2 of the segment-wise optimum
  double l2_star_tilde = 0.0;  // l2 of that optimum after ckmin
  PiecewisePolynomial fitted;
  PiecewisePolynomial corrected;
};

// Requires degree >= 2k+1; throws UsageError otherwise.
BaselineReport baselines(const SampleSet& data, std::span<const double> knots,
                         int degree, BasisKind basis, int k);

}  // namespace ppfit
