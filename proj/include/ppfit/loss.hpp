#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ppfit/basis.hpp"
#include "ppfit/ppmodel.hpp"
#include "ppfit/samples.hpp"

namespace ppfit {

// Open: interior knots only. Periodic: additionally joins the last segment's
// right end to the first segment's left end. Cyclic: like Periodic, but the
// positional (order 0) wrap term is dropped so an offset is allowed.
enum class BoundaryMode { Open, Cyclic, Periodic };

// How each derivative jump is scaled before squaring.
enum class Regularization { Factorial, ChebEndpoint, None };

std::string_view to_string(BoundaryMode mode);
std::string_view to_string(Regularization mode);
BoundaryMode parse_boundary(std::string_view name);
Regularization parse_regularization(std::string_view name);

struct LossConfig {
  double alpha = 0.0;
  int k = 3;
  BoundaryMode boundary = BoundaryMode::Open;
  Regularization regularization = Regularization::Factorial;
};

struct LossBreakdown {
  double total = 0.0;
  double l2 = 0.0;
  double ck = 0.0;
};

// Scale for the order-j jump of a degree-d polynomial:
//   Factorial     d!/(d-j)!
//   ChebEndpoint  |T_d^{(j)}(1)|
//   None          1
double reg_factor(int degree, int order,
                  Regularization mode = Regularization::Factorial);

// Mean squared residual over the samples.
double l2_loss(const PiecewisePolynomial& pp, const SampleSet& data);

// Normalized sum of squared, regularized derivative jumps at the knots.
// Zero for a single segment in Open mode.
double ck_loss(const PiecewisePolynomial& pp, const LossConfig& cfg);

// alpha * ck + (1 - alpha) * l2.
double total_loss(const PiecewisePolynomial& pp, const SampleSet& data,
                  const LossConfig& cfg);

// Analytic gradient of total_loss with respect to the flattened coefficients.
std::vector<double> grad_total(const PiecewisePolynomial& pp,
                               const SampleSet& data, const LossConfig& cfg);

// Jumps p_{right}^{(order)}(xi) - p_{left}^{(order)}(xi) at every junction
// the boundary mode considers, for orders 0..k (no regularization applied).
struct Jump {
  int knot;   // index into pp.knots() where the jump is measured on the left
  int order;
  double value;
};
std::vector<Jump> derivative_jumps(const PiecewisePolynomial& pp, int k,
                                   BoundaryMode boundary = BoundaryMode::Open);

// Precomputed loss for a fixed sample set, knot vector, degree and basis.
// Evaluates loss and gradient for a flat coefficient vector in O(n*d).
class Objective {
 public:
  Objective(const SampleSet& data, std::span<const double> knots, int degree,
            BasisKind basis, const LossConfig& cfg);
  Objective(const SampleSet& data, const PiecewisePolynomial& shape,
            const LossConfig& cfg)
      : Objective(data, shape.knots(), shape.degree(), shape.basis(), cfg) {}

  // Continuity part only; l2 evaluates to 0.
  static Objective continuity_only(std::span<const double> knots, int degree,
                                   BasisKind basis, const LossConfig& cfg);

  int num_parameters() const { return segments_ * width_; }
  const LossConfig& config() const { return cfg_; }

  LossBreakdown evaluate(std::span<const double> theta) const;
  // Also writes d(total)/d(theta) into grad.
  LossBreakdown evaluate(std::span<const double> theta,
                         std::span<double> grad) const;

 private:
  // One squared term (jump / r)^2 between two segment ends.
  struct JumpTerm {
    int left;
    int right;
    double inv_reg;
    std::vector<double> left_row;   // B_l^{(j)} at the left segment's end
    std::vector<double> right_row;  // B_l^{(j)} at the right segment's start
  };

  LossBreakdown compute(std::span<const double> theta,
                        std::span<double> grad) const;

  LossConfig cfg_;
  int segments_;
  int width_;
  bool has_data_;
  std::vector<int> sample_segment_;
  std::vector<double> design_;  // n x width_, row-major
  std::vector<double> y_;
  std::vector<JumpTerm> jumps_;
  double jump_norm_ = 0.0;  // 1 / (number of junctions), 0 if none

  Objective(std::span<const double> knots, int degree, BasisKind basis,
            const LossConfig& cfg);
};

}  // namespace ppfit
