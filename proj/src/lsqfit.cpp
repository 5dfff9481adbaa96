#include "ppfit/lsqfit.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include "ppfit/ckmin.hpp"
#include "ppfit/errors.hpp"
#include "ppfit/loss.hpp"

namespace ppfit {

PiecewisePolynomial fit_segmentwise(const SampleSet& data,
                                    std::span<const double> knots, int degree,
                                    BasisKind basis) {
  if (data.size() == 0) throw UsageError("sample set is empty");
  if (degree < 0) throw UsageError("degree must be non-negative");
  const auto shape = PiecewisePolynomial::zeros(
      std::vector<double>(knots.begin(), knots.end()), degree, basis);
  const int m = shape.num_segments();

  std::vector<std::vector<std::size_t>> members(m);
  for (std::size_t s = 0; s < data.size(); ++s)
    members[shape.locate(data.x[s])].push_back(s);

  std::vector<std::vector<double>> coeffs(m);
  std::vector<double> row(degree + 1);
  for (int i = 0; i < m; ++i) {
    const auto& idx = members[i];
    if (static_cast<int>(idx.size()) < degree + 1)
      throw ConditioningError(fmt::format(
          "segment {} has {} samples, needs at least {} for degree {}", i + 1,
          idx.size(), degree + 1, degree));
    Eigen::MatrixXd design(idx.size(), degree + 1);
    Eigen::VectorXd rhs(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      basis_values(basis, degree, data.x[idx[r]] - shape.segment(i).mu, 0, row);
      for (int l = 0; l <= degree; ++l) design(r, l) = row[l];
      rhs[r] = data.y[idx[r]];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < degree + 1)
      throw ConditioningError(fmt::format(
          "segment {} design matrix is rank deficient ({} < {})", i + 1,
          qr.rank(), degree + 1));
    const Eigen::VectorXd sol = qr.solve(rhs);
    coeffs[i].assign(sol.data(), sol.data() + sol.size());
  }
  return {std::vector<double>(knots.begin(), knots.end()), std::move(coeffs),
          basis};
}

BaselineReport baselines(const SampleSet& data, std::span<const double> knots,
                         int degree, BasisKind basis, int k) {
  if (degree < 2 * k + 1)
    throw UsageError(fmt::format(
        "C^{} baseline needs degree >= {} (got {}); elevate the degree", k,
        2 * k + 1, degree));
  auto fitted = fit_segmentwise(data, knots, degree, basis);
  auto corrected = ckmin(fitted, k);
  const double l2_star = l2_loss(fitted, data);
  const double l2_tilde = l2_loss(corrected, data);
  return {l2_star, l2_tilde, std::move(fitted), std::move(corrected)};
}

}  // namespace ppfit
