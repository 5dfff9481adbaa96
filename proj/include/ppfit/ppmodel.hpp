#pragma once

#include <span>
#include <vector>

#include "ppfit/basis.hpp"

namespace ppfit {

// One polynomial piece, expressed in the local variable (x - mu).
struct SegmentPolynomial {
  CoeffVector coeffs;
  double mu = 0.0;

  double operator()(double x, int order = 0) const;
};

// Affine map from original x to scaled x' = (x - offset) * scale.
struct DomainTransform {
  double scale = 1.0;
  double offset = 0.0;

  double to_scaled(double x) const { return (x - offset) * scale; }
  double to_original(double xs) const { return xs / scale + offset; }
};

// Scale and offset so that [a, b] maps onto [0, 2m]: each of m equal
// segments then has width 2 and local coordinates in [-1, 1].
DomainTransform build_transform(double a, double b, int segments);

// Knots 0, 2, 4, ..., 2m.
std::vector<double> uniform_knots(int segments);

// Piecewise polynomial on knots xi_0 < ... < xi_m. Every segment shares the
// same degree and basis and is centered at its interval midpoint.
class PiecewisePolynomial {
 public:
  // segment_coeffs.size() must equal knots.size() - 1. Unequally spaced
  // knots are accepted with a one-time warning on stderr.
  PiecewisePolynomial(std::vector<double> knots,
                      std::vector<std::vector<double>> segment_coeffs,
                      BasisKind basis);

  static PiecewisePolynomial zeros(std::vector<double> knots, int degree,
                                   BasisKind basis);

  int degree() const { return degree_; }
  int num_segments() const { return static_cast<int>(segments_.size()); }
  int num_parameters() const { return num_segments() * (degree_ + 1); }
  BasisKind basis() const { return basis_; }
  std::span<const double> knots() const { return knots_; }
  double domain_begin() const { return knots_.front(); }
  double domain_end() const { return knots_.back(); }

  // 0-based segment access; segment i lives on [knots[i], knots[i+1]].
  const SegmentPolynomial& segment(int i) const { return segments_.at(i); }

  // Segment owning x. Interior knots belong to the segment on their left.
  // Throws DomainError outside [xi_0, xi_m].
  int locate(double x) const;

  // f^{(order)}(x); order > degree yields 0.
  double evaluate(double x, int order = 0) const;

  // Coefficients flattened segment-major, degree-minor.
  std::vector<double> flat_coefficients() const;
  PiecewisePolynomial with_coefficients(std::span<const double> flat) const;

  // Same function, coefficients expressed in another basis.
  PiecewisePolynomial in_basis(BasisKind target) const;

 private:
  std::vector<double> knots_;
  std::vector<SegmentPolynomial> segments_;
  BasisKind basis_;
  int degree_;
};

// Power-basis representation on the ORIGINAL x axis. Knots are mapped back
// through the transform and each segment is re-expanded about its
// original-domain midpoint.
PiecewisePolynomial to_export_form(const PiecewisePolynomial& pp,
                                   const DomainTransform& t);

// Ascending power coefficients of segment i about absolute x (no centering),
// as consumed by drives that take plain power-basis pieces.
std::vector<double> absolute_power_coefficients(const PiecewisePolynomial& pp,
                                                int segment);

// Re-expands power coefficients of p(u) as coefficients of p(scale*v + shift)
// in v.
std::vector<double> compose_affine(std::span<const double> power_coeffs,
                                   double scale, double shift);

}  // namespace ppfit
