#include "ppfit/ckmin.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "ppfit/errors.hpp"

namespace ppfit {

std::vector<double> derivative_condition_row(double xi, int order, int degree) {
  if (order < 0) throw UsageError("derivative order must be non-negative");
  std::vector<double> row(degree + 1, 0.0);
  for (int l = order; l <= degree; ++l) {
    double v = 1.0;
    for (int t = 0; t < order; ++t) v *= l - t;
    row[l] = v * std::pow(xi, l - order);
  }
  return row;
}

namespace {

// Solves for power coefficients c of q(t), t in [-1, 1], with
// q^{(j)}(-1) = left[j] and q^{(j)}(1) = right[j] for j = 0..k.
Eigen::VectorXd solve_correction(const Eigen::MatrixXd& system,
                                 const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                                 const std::vector<double>& left,
                                 const std::vector<double>& right) {
  const int k1 = static_cast<int>(left.size());
  Eigen::VectorXd rhs(2 * k1);
  for (int j = 0; j < k1; ++j) {
    rhs[j] = left[j];
    rhs[k1 + j] = right[j];
  }
  Eigen::VectorXd c = lu.solve(rhs);
  const double residual = (system * c - rhs).lpNorm<Eigen::Infinity>();
  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (!c.allFinite() || !(residual < 1e-9 * scale))
    throw ConditioningError(
        fmt::format("correction system residual {} too large", residual));
  return c;
}

}  // namespace

PiecewisePolynomial ckmin(const PiecewisePolynomial& pp, int k,
                          BoundaryMode boundary) {
  if (k < 0) throw UsageError("continuity order k must be non-negative");
  const int d = pp.degree();
  const int qdeg = 2 * k + 1;
  if (d < qdeg)
    throw UsageError(fmt::format(
        "C^{} enforcement needs degree >= {} (got {}); elevate the degree", k,
        qdeg, d));

  const int m = pp.num_segments();
  const auto knots = pp.knots();
  const bool wrap = boundary != BoundaryMode::Open;
  const bool skip_wrap_value = boundary == BoundaryMode::Cyclic;

  // Knot-local system, identical for every segment.
  Eigen::MatrixXd system(2 * (k + 1), qdeg + 1);
  for (int j = 0; j <= k; ++j) {
    const auto lrow = derivative_condition_row(-1.0, j, qdeg);
    const auto rrow = derivative_condition_row(1.0, j, qdeg);
    for (int l = 0; l <= qdeg; ++l) {
      system(j, l) = lrow[l];
      system(k + 1 + j, l) = rrow[l];
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);

  std::vector<std::vector<double>> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i)
    out.push_back(pp.segment(i).coeffs.coeffs);

  const auto original = [&](int seg, double x, int j) {
    return pp.segment(seg)(x, j);
  };
  const auto corrected = [&](int seg, double x, int j) {
    const SegmentPolynomial s{{out[seg], pp.basis()}, pp.segment(seg).mu};
    return s(x, j);
  };

  // Values the first segment's left end is moved to (needed by the wrap).
  std::vector<double> first_target(k + 1, 0.0);

  for (int i = 0; i < m; ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    std::vector<double> left(k + 1, 0.0);
    std::vector<double> right(k + 1, 0.0);
    for (int j = 0; j <= k; ++j) {
      const bool skip = skip_wrap_value && j == 0;
      if (i > 0) {
        left[j] = corrected(i - 1, a, j) - original(i, a, j);
      } else if (wrap && !skip) {
        left[j] = 0.5 * (original(m - 1, knots[m], j) - original(0, a, j));
      }
      if (i == 0) first_target[j] = original(0, a, j) + left[j];

      if (i + 1 < m) {
        right[j] = 0.5 * (original(i + 1, b, j) - original(i, b, j));
      } else if (wrap && !skip) {
        right[j] = first_target[j] - original(i, b, j);
      }
    }

    // Map x in [a, b] to t in [-1, 1]: d^j/dx^j = h^{-j} d^j/dt^j.
    const double h = 0.5 * (b - a);
    double hp = 1.0;
    for (int j = 0; j <= k; ++j) {
      left[j] *= hp;
      right[j] *= hp;
      hp *= h;
    }
    const Eigen::VectorXd c = solve_correction(system, lu, left, right);

    // t = u / h with u = x - mu, so q(u) = sum c_l h^{-l} u^l.
    std::vector<double> q(d + 1, 0.0);
    double inv = 1.0;
    for (int l = 0; l <= qdeg; ++l) {
      q[l] = c[l] * inv;
      inv /= h;
    }
    const auto q_basis = to_basis({std::move(q), BasisKind::Power}, pp.basis());
    for (int l = 0; l <= d; ++l) out[i][l] += q_basis.coeffs[l];
  }

  return {std::vector<double>(knots.begin(), knots.end()), std::move(out),
          pp.basis()};
}

}  // namespace ppfit
