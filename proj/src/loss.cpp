#include "ppfit/loss.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ppfit/errors.hpp"

namespace ppfit {

std::string_view to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::Open: return "open";
    case BoundaryMode::Cyclic: return "cyclic";
    case BoundaryMode::Periodic: return "periodic";
  }
  return "?";
}

std::string_view to_string(Regularization mode) {
  switch (mode) {
    case Regularization::Factorial: return "factorial";
    case Regularization::ChebEndpoint: return "cheb-endpoint";
    case Regularization::None: return "none";
  }
  return "?";
}

BoundaryMode parse_boundary(std::string_view name) {
  if (name == "open") return BoundaryMode::Open;
  if (name == "cyclic") return BoundaryMode::Cyclic;
  if (name == "periodic") return BoundaryMode::Periodic;
  throw UsageError(fmt::format("unknown boundary mode '{}'", name));
}

Regularization parse_regularization(std::string_view name) {
  if (name == "factorial") return Regularization::Factorial;
  if (name == "cheb-endpoint") return Regularization::ChebEndpoint;
  if (name == "none") return Regularization::None;
  throw UsageError(fmt::format("unknown regularization '{}'", name));
}

double reg_factor(int degree, int order, Regularization mode) {
  if (order < 0 || order > degree)
    throw UsageError(
        fmt::format("regularization order {} outside [0, {}]", order, degree));
  double r = 1.0;
  switch (mode) {
    case Regularization::Factorial:
      for (int t = 0; t < order; ++t) r *= degree - t;
      break;
    case Regularization::ChebEndpoint:
      // T_d^{(j)}(1) = prod_{t<j} (d^2 - t^2) / (2t + 1)
      for (int t = 0; t < order; ++t)
        r *= static_cast<double>(degree * degree - t * t) / (2 * t + 1);
      break;
    case Regularization::None:
      break;
  }
  return std::abs(r);
}

namespace {

void validate(const LossConfig& cfg, int degree) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
    throw UsageError(fmt::format("alpha = {} outside [0, 1]", cfg.alpha));
  if (cfg.k < 0) throw UsageError("continuity order k must be non-negative");
  if (cfg.k > degree)
    throw UsageError(
        fmt::format("continuity order k = {} exceeds degree {}", cfg.k, degree));
}

// Junction (left segment, right segment, knot index) pairs for a mode.
struct Junction {
  int left;
  int right;
  int knot;
  bool wrap;
};

std::vector<Junction> junctions(int segments, BoundaryMode boundary) {
  std::vector<Junction> out;
  for (int i = 0; i + 1 < segments; ++i) out.push_back({i, i + 1, i + 1, false});
  if (boundary != BoundaryMode::Open)
    out.push_back({segments - 1, 0, segments, true});
  return out;
}

}  // namespace

Objective::Objective(std::span<const double> knots, int degree,
                     BasisKind basis, const LossConfig& cfg)
    : cfg_(cfg),
      segments_(static_cast<int>(knots.size()) - 1),
      width_(degree + 1),
      has_data_(false) {
  validate(cfg, degree);
  if (segments_ < 1) throw UsageError("need at least one segment");

  const auto mid = [&](int i) { return 0.5 * (knots[i] + knots[i + 1]); };
  const auto js = junctions(segments_, cfg.boundary);
  for (const auto& j : js) {
    // Left end of the junction is the left segment's right boundary; the
    // right end is the right segment's left boundary (xi_0 when wrapping).
    const double left_local = knots[j.left + 1] - mid(j.left);
    const double right_local = knots[j.right] - mid(j.right);
    for (int order = 0; order <= cfg.k; ++order) {
      if (j.wrap && order == 0 && cfg.boundary == BoundaryMode::Cyclic) continue;
      jumps_.push_back({j.left, j.right,
                        1.0 / reg_factor(degree, order, cfg.regularization),
                        basis_values(basis, degree, left_local, order),
                        basis_values(basis, degree, right_local, order)});
    }
  }
  if (!js.empty()) jump_norm_ = 1.0 / static_cast<double>(js.size());
}

Objective::Objective(const SampleSet& data, std::span<const double> knots,
                     int degree, BasisKind basis, const LossConfig& cfg)
    : Objective(knots, degree, basis, cfg) {
  if (data.size() == 0) throw UsageError("sample set is empty");
  if (data.x.size() != data.y.size())
    throw UsageError("sample x and y lengths differ");
  has_data_ = true;
  const auto shape = PiecewisePolynomial::zeros(
      std::vector<double>(knots.begin(), knots.end()), degree, basis);
  sample_segment_.resize(data.size());
  design_.resize(data.size() * width_);
  y_ = data.y;
  for (std::size_t s = 0; s < data.size(); ++s) {
    const int seg = shape.locate(data.x[s]);
    sample_segment_[s] = seg;
    basis_values(basis, degree, data.x[s] - shape.segment(seg).mu, 0,
                 std::span<double>(design_).subspan(s * width_, width_));
  }
}

Objective Objective::continuity_only(std::span<const double> knots, int degree,
                                     BasisKind basis, const LossConfig& cfg) {
  return Objective(knots, degree, basis, cfg);
}

LossBreakdown Objective::evaluate(std::span<const double> theta) const {
  return compute(theta, {});
}

LossBreakdown Objective::evaluate(std::span<const double> theta,
                                  std::span<double> grad) const {
  if (grad.size() != theta.size())
    throw UsageError("gradient buffer size mismatch");
  return compute(theta, grad);
}

LossBreakdown Objective::compute(std::span<const double> theta,
                                 std::span<double> grad) const {
  if (static_cast<int>(theta.size()) != num_parameters())
    throw UsageError(fmt::format("expected {} parameters, got {}",
                                 num_parameters(), theta.size()));
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  const double alpha = cfg_.alpha;
  LossBreakdown out;

  if (has_data_) {
    const std::size_t n = y_.size();
    const double g_scale = 2.0 * (1.0 - alpha) / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const int base = sample_segment_[s] * width_;
      const double* row = &design_[s * width_];
      double f = 0.0;
      for (int l = 0; l < width_; ++l) f += row[l] * theta[base + l];
      const double r = f - y_[s];
      sum += r * r;
      if (want_grad)
        for (int l = 0; l < width_; ++l) grad[base + l] += g_scale * r * row[l];
    }
    out.l2 = sum / static_cast<double>(n);
  }

  if (!jumps_.empty()) {
    const double g_scale = 2.0 * alpha * jump_norm_;
    double sum = 0.0;
    for (const auto& t : jumps_) {
      const int lb = t.left * width_;
      const int rb = t.right * width_;
      double delta = 0.0;
      for (int l = 0; l < width_; ++l)
        delta += t.right_row[l] * theta[rb + l] - t.left_row[l] * theta[lb + l];
      const double scaled = delta * t.inv_reg;
      sum += scaled * scaled;
      if (want_grad) {
        const double w = g_scale * scaled * t.inv_reg;
        for (int l = 0; l < width_; ++l) {
          grad[rb + l] += w * t.right_row[l];
          grad[lb + l] -= w * t.left_row[l];
        }
      }
    }
    out.ck = sum * jump_norm_;
  }

  out.total = alpha * out.ck + (1.0 - alpha) * out.l2;
  return out;
}

double l2_loss(const PiecewisePolynomial& pp, const SampleSet& data) {
  const Objective obj(data, pp, LossConfig{0.0, 0});
  return obj.evaluate(pp.flat_coefficients()).l2;
}

double ck_loss(const PiecewisePolynomial& pp, const LossConfig& cfg) {
  const auto obj =
      Objective::continuity_only(pp.knots(), pp.degree(), pp.basis(), cfg);
  return obj.evaluate(pp.flat_coefficients()).ck;
}

double total_loss(const PiecewisePolynomial& pp, const SampleSet& data,
                  const LossConfig& cfg) {
  const Objective obj(data, pp, cfg);
  return obj.evaluate(pp.flat_coefficients()).total;
}

std::vector<double> grad_total(const PiecewisePolynomial& pp,
                               const SampleSet& data, const LossConfig& cfg) {
  const Objective obj(data, pp, cfg);
  std::vector<double> grad(obj.num_parameters());
  obj.evaluate(pp.flat_coefficients(), grad);
  return grad;
}

std::vector<Jump> derivative_jumps(const PiecewisePolynomial& pp, int k,
                                   BoundaryMode boundary) {
  if (k < 0) throw UsageError("continuity order k must be non-negative");
  std::vector<Jump> out;
  const auto knots = pp.knots();
  for (const auto& j : junctions(pp.num_segments(), boundary)) {
    const double left_x = knots[j.left + 1];
    const double right_x = knots[j.right];
    for (int order = 0; order <= k; ++order) {
      if (j.wrap && order == 0 && boundary == BoundaryMode::Cyclic) continue;
      out.push_back({j.knot, order,
                     pp.segment(j.right)(right_x, order) -
                         pp.segment(j.left)(left_x, order)});
    }
  }
  return out;
}

}  // namespace ppfit
