#pragma once

#include <vector>

#include "ppfit/loss.hpp"
#include "ppfit/ppmodel.hpp"

namespace ppfit {

// Row of the monomial derivative-condition matrix: entry l is the order-th
// derivative of x^l at xi, i.e. l!/(l-order)! * xi^(l-order), for
// l = 0..degree (zero where l < order).
std::vector<double> derivative_condition_row(double xi, int order, int degree);

// Makes pp exactly C^k by adding a degree 2k+1 correction to every segment,
// left to right. Each interior knot is moved to the mean of the two one-sided
// derivative values; the outer ends of the first and last segment are kept.
// In Periodic mode the outer ends are joined the same way (Cyclic skips the
// order 0 wrap condition). Requires degree >= 2k+1.
PiecewisePolynomial ckmin(const PiecewisePolynomial& pp, int k,
                          BoundaryMode boundary = BoundaryMode::Open);

}  // namespace ppfit
