#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace ppfit {

enum class BasisKind { Chebyshev, Power };

std::string_view to_string(BasisKind kind);
// Accepts "cheb"/"chebyshev" and "power"; throws UsageError otherwise.
BasisKind parse_basis(std::string_view name);

// Coefficients c_0..c_d of a polynomial with respect to one basis kind.
struct CoeffVector {
  std::vector<double> coeffs;
  BasisKind basis = BasisKind::Power;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Sum_j c_j B_j(x). Chebyshev series use Clenshaw's recurrence and power
// series use Horner's scheme. For Chebyshev the intended domain is [-1, 1];
// values outside are computed but not guarded against growth.
double evaluate(const CoeffVector& c, double x);

// Coefficients of dp/dx in the same basis. Output length is max(1, d).
CoeffVector derivative(const CoeffVector& c);
CoeffVector derivative(const CoeffVector& c, int order);

// Values B_0^{(order)}(x) .. B_degree^{(order)}(x) of the basis functions'
// order-th derivatives at x. Written into out, which must hold degree+1 items.
void basis_values(BasisKind kind, int degree, double x, int order,
                  std::span<double> out);
std::vector<double> basis_values(BasisKind kind, int degree, double x,
                                 int order = 0);

// Change of basis. Both throw UsageError if the input basis is wrong.
CoeffVector cheb_to_power(const CoeffVector& c);
CoeffVector power_to_cheb(const CoeffVector& c);

// Converts to the requested basis (no-op when it already matches).
CoeffVector to_basis(const CoeffVector& c, BasisKind target);

}  // namespace ppfit
