#include "ppfit/ppmodel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>

#include <fmt/format.h>

#include "ppfit/errors.hpp"

namespace ppfit {

double SegmentPolynomial::operator()(double x, int order) const {
  if (order > coeffs.degree()) return 0.0;
  if (order == 0) return ppfit::evaluate(coeffs, x - mu);
  return ppfit::evaluate(derivative(coeffs, order), x - mu);
}

DomainTransform build_transform(double a, double b, int segments) {
  if (!(a < b)) throw UsageError(fmt::format("invalid interval [{}, {}]", a, b));
  if (segments < 1) throw UsageError("segment count must be at least 1");
  return {2.0 * segments / (b - a), a};
}

std::vector<double> uniform_knots(int segments) {
  if (segments < 1) throw UsageError("segment count must be at least 1");
  std::vector<double> knots(segments + 1);
  for (int i = 0; i <= segments; ++i) knots[i] = 2.0 * i;
  return knots;
}

namespace {

void warn_non_uniform_once() {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true))
    std::cerr << "warning: non-uniform knots; segment widths differ and "
                 "local coordinates will not all span [-1, 1]\n";
}

}  // namespace

PiecewisePolynomial::PiecewisePolynomial(
    std::vector<double> knots, std::vector<std::vector<double>> segment_coeffs,
    BasisKind basis)
    : knots_(std::move(knots)), basis_(basis) {
  if (knots_.size() < 2) throw UsageError("need at least two knots");
  if (segment_coeffs.size() != knots_.size() - 1)
    throw UsageError(fmt::format("{} knots require {} segments, got {}",
                                 knots_.size(), knots_.size() - 1,
                                 segment_coeffs.size()));
  bool uniform = true;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i - 1] < knots_[i]))
      throw UsageError("knots must be strictly increasing");
    const double first = knots_[1] - knots_[0];
    if (std::abs(knots_[i] - knots_[i - 1] - first) > 1e-9 * first)
      uniform = false;
  }
  if (!uniform) warn_non_uniform_once();

  degree_ = static_cast<int>(segment_coeffs.front().size()) - 1;
  if (degree_ < 0) throw UsageError("segments need at least one coefficient");
  segments_.reserve(segment_coeffs.size());
  for (std::size_t i = 0; i < segment_coeffs.size(); ++i) {
    if (static_cast<int>(segment_coeffs[i].size()) != degree_ + 1)
      throw UsageError("all segments must share one degree");
    for (double c : segment_coeffs[i])
      if (!std::isfinite(c)) throw UsageError("non-finite coefficient");
    segments_.push_back({{std::move(segment_coeffs[i]), basis_},
                         0.5 * (knots_[i] + knots_[i + 1])});
  }
}

PiecewisePolynomial PiecewisePolynomial::zeros(std::vector<double> knots,
                                               int degree, BasisKind basis) {
  if (degree < 0) throw UsageError("degree must be non-negative");
  const std::size_t m = knots.size() > 0 ? knots.size() - 1 : 0;
  return {std::move(knots),
          std::vector<std::vector<double>>(m, std::vector<double>(degree + 1)),
          basis};
}

int PiecewisePolynomial::locate(double x) const {
  if (!(x >= knots_.front() && x <= knots_.back()))
    throw DomainError(fmt::format("x = {} outside [{}, {}]", x, knots_.front(),
                                  knots_.back()));
  // First knot >= x among xi_1..xi_m; ties therefore go left.
  const auto it = std::lower_bound(knots_.begin() + 1, knots_.end(), x);
  return static_cast<int>(it - knots_.begin()) - 1;
}

double PiecewisePolynomial::evaluate(double x, int order) const {
  if (order < 0) throw UsageError("derivative order must be non-negative");
  return segments_[locate(x)](x, order);
}

std::vector<double> PiecewisePolynomial::flat_coefficients() const {
  std::vector<double> flat;
  flat.reserve(num_parameters());
  for (const auto& s : segments_)
    flat.insert(flat.end(), s.coeffs.coeffs.begin(), s.coeffs.coeffs.end());
  return flat;
}

PiecewisePolynomial PiecewisePolynomial::with_coefficients(
    std::span<const double> flat) const {
  if (static_cast<int>(flat.size()) != num_parameters())
    throw UsageError(fmt::format("expected {} coefficients, got {}",
                                 num_parameters(), flat.size()));
  PiecewisePolynomial copy = *this;
  const std::size_t width = degree_ + 1;
  for (std::size_t i = 0; i < copy.segments_.size(); ++i) {
    auto& c = copy.segments_[i].coeffs.coeffs;
    std::copy_n(flat.begin() + i * width, width, c.begin());
  }
  return copy;
}

PiecewisePolynomial PiecewisePolynomial::in_basis(BasisKind target) const {
  if (target == basis_) return *this;
  PiecewisePolynomial copy = *this;
  copy.basis_ = target;
  for (auto& s : copy.segments_) s.coeffs = to_basis(s.coeffs, target);
  return copy;
}

std::vector<double> compose_affine(std::span<const double> power_coeffs,
                                   double scale, double shift) {
  // Horner in polynomial arithmetic: acc <- acc * (scale*v + shift) + c_j.
  const std::size_t n = power_coeffs.size();
  std::vector<double> acc(n, 0.0);
  std::size_t len = 0;
  for (std::size_t j = n; j-- > 0;) {
    std::vector<double> next(n, 0.0);
    for (std::size_t p = 0; p < len; ++p) {
      next[p] += acc[p] * shift;
      next[p + 1] += acc[p] * scale;
    }
    next[0] += power_coeffs[j];
    acc = std::move(next);
    len = std::min(n, len + 1);
  }
  return acc;
}

PiecewisePolynomial to_export_form(const PiecewisePolynomial& pp,
                                   const DomainTransform& t) {
  std::vector<double> knots(pp.knots().size());
  std::transform(pp.knots().begin(), pp.knots().end(), knots.begin(),
                 [&](double k) { return t.to_original(k); });

  std::vector<std::vector<double>> coeffs;
  coeffs.reserve(pp.num_segments());
  for (int i = 0; i < pp.num_segments(); ++i) {
    const auto& seg = pp.segment(i);
    const auto power = to_basis(seg.coeffs, BasisKind::Power);
    // Scaled-local u = s*(x - a) - mu'. With v = x - mid: u = s*v + shift.
    const double mid = 0.5 * (knots[i] + knots[i + 1]);
    const double shift = t.scale * (mid - t.offset) - seg.mu;
    coeffs.push_back(compose_affine(power.coeffs, t.scale, shift));
  }
  return {std::move(knots), std::move(coeffs), BasisKind::Power};
}

std::vector<double> absolute_power_coefficients(const PiecewisePolynomial& pp,
                                                int segment) {
  const auto& seg = pp.segment(segment);
  const auto power = to_basis(seg.coeffs, BasisKind::Power);
  return compose_affine(power.coeffs, 1.0, -seg.mu);
}

}  // namespace ppfit
