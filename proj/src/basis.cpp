#include "ppfit/basis.hpp"

#include <algorithm>
#include <cassert>

#include <fmt/format.h>

#include "ppfit/errors.hpp"

namespace ppfit {

std::string_view to_string(BasisKind kind) {
  return kind == BasisKind::Chebyshev ? "cheb" : "power";
}

BasisKind parse_basis(std::string_view name) {
  if (name == "cheb" || name == "chebyshev") return BasisKind::Chebyshev;
  if (name == "power") return BasisKind::Power;
  throw UsageError(fmt::format("unknown basis '{}' (expected cheb|power)", name));
}

double evaluate(const CoeffVector& c, double x) {
  const auto& a = c.coeffs;
  if (a.empty()) return 0.0;
  if (c.basis == BasisKind::Power) {
    double acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  // Clenshaw: b_k = c_k + 2x b_{k+1} - b_{k+2}, result = c_0 + x b_1 - b_2.
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = a.size() - 1; k >= 1; --k) {
    const double b0 = a[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a[0] + x * b1 - b2;
}

CoeffVector derivative(const CoeffVector& c) {
  const auto& a = c.coeffs;
  const int d = c.degree();
  if (d < 1) return {{0.0}, c.basis};

  std::vector<double> out(d, 0.0);
  if (c.basis == BasisKind::Power) {
    for (int j = 1; j <= d; ++j) out[j - 1] = j * a[j];
    return {std::move(out), c.basis};
  }
  // d'_{j-1} = d'_{j+1} + 2j c_j, with d'_0 halved at the end.
  for (int j = d; j >= 1; --j) {
    const double next = (j + 1 <= d - 1) ? out[j + 1] : 0.0;
    out[j - 1] = next + 2.0 * j * a[j];
  }
  out[0] *= 0.5;
  return {std::move(out), c.basis};
}

CoeffVector derivative(const CoeffVector& c, int order) {
  if (order < 0) throw UsageError("derivative order must be non-negative");
  CoeffVector r = c;
  for (int i = 0; i < order; ++i) r = derivative(r);
  return r;
}

void basis_values(BasisKind kind, int degree, double x, int order,
                  std::span<double> out) {
  assert(static_cast<int>(out.size()) == degree + 1);
  if (kind == BasisKind::Power) {
    // d^order/dx^order x^l = l!/(l-order)! x^(l-order)
    for (int l = 0; l <= degree; ++l) {
      if (l < order) {
        out[l] = 0.0;
        continue;
      }
      double v = 1.0;
      for (int t = 0; t < order; ++t) v *= (l - t);
      for (int t = 0; t < l - order; ++t) v *= x;
      out[l] = v;
    }
    return;
  }
  // T_l^{(j)} = 2x T_{l-1}^{(j)} + 2j T_{l-1}^{(j-1)} - T_{l-2}^{(j)}
  std::vector<double> prev(degree + 1);
  std::vector<double> cur(degree + 1);
  for (int j = 0; j <= order; ++j) {
    for (int l = 0; l <= degree; ++l) {
      if (j == 0) {
        cur[l] = l == 0 ? 1.0 : l == 1 ? x : 2.0 * x * cur[l - 1] - cur[l - 2];
      } else if (l < j) {
        cur[l] = 0.0;
      } else {
        const double tm2 = l >= 2 ? cur[l - 2] : 0.0;
        const double tm1 = l >= 1 ? cur[l - 1] : 0.0;
        const double dm1 = l >= 1 ? prev[l - 1] : 0.0;
        cur[l] = l == 1 ? 1.0 : 2.0 * x * tm1 + 2.0 * j * dm1 - tm2;
      }
    }
    std::swap(prev, cur);
  }
  std::copy(prev.begin(), prev.end(), out.begin());
}

std::vector<double> basis_values(BasisKind kind, int degree, double x,
                                 int order) {
  std::vector<double> out(degree + 1);
  basis_values(kind, degree, x, order, out);
  return out;
}

namespace {

// Column l holds the power coefficients of T_l (upper triangular).
std::vector<std::vector<double>> chebyshev_power_table(int degree) {
  std::vector<std::vector<double>> t(degree + 1,
                                     std::vector<double>(degree + 1, 0.0));
  t[0][0] = 1.0;
  if (degree >= 1) t[1][1] = 1.0;
  for (int l = 2; l <= degree; ++l) {
    for (int p = 0; p <= l; ++p) {
      const double shifted = p >= 1 ? 2.0 * t[l - 1][p - 1] : 0.0;
      t[l][p] = shifted - t[l - 2][p];
    }
  }
  return t;
}

}  // namespace

CoeffVector cheb_to_power(const CoeffVector& c) {
  if (c.basis != BasisKind::Chebyshev)
    throw UsageError("cheb_to_power expects Chebyshev coefficients");
  const int d = c.degree();
  const auto table = chebyshev_power_table(d);
  std::vector<double> out(d + 1, 0.0);
  for (int l = 0; l <= d; ++l)
    for (int p = 0; p <= l; ++p) out[p] += c.coeffs[l] * table[l][p];
  return {std::move(out), BasisKind::Power};
}

CoeffVector power_to_cheb(const CoeffVector& c) {
  if (c.basis != BasisKind::Power)
    throw UsageError("power_to_cheb expects power coefficients");
  const int d = c.degree();
  const auto table = chebyshev_power_table(d);
  // Back substitution on sum_l a_l table[l][p] = c_p, from the top degree down.
  std::vector<double> out(d + 1, 0.0);
  for (int p = d; p >= 0; --p) {
    double rhs = c.coeffs[p];
    for (int l = p + 1; l <= d; ++l) rhs -= out[l] * table[l][p];
    out[p] = rhs / table[p][p];
  }
  return {std::move(out), BasisKind::Chebyshev};
}

CoeffVector to_basis(const CoeffVector& c, BasisKind target) {
  if (c.basis == target) return c;
  return target == BasisKind::Power ? cheb_to_power(c) : power_to_cheb(c);
}

}  // namespace ppfit
