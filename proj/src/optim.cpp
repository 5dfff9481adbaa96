#include "ppfit/optim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "ppfit/errors.hpp"
#include "ppfit/lsqfit.hpp"

namespace ppfit {

namespace {

constexpr std::array kAllOptimizers = {
    OptimizerKind::SGD,      OptimizerKind::SGDMomentum,
    OptimizerKind::SGDNesterov, OptimizerKind::Adagrad,
    OptimizerKind::Adadelta, OptimizerKind::Adam,
    OptimizerKind::Adamax,   OptimizerKind::Nadam,
    OptimizerKind::AMSGrad,  OptimizerKind::FTRL,
};

}  // namespace

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::SGD: return "sgd";
    case OptimizerKind::SGDMomentum: return "sgd-momentum";
    case OptimizerKind::SGDNesterov: return "sgd-nesterov";
    case OptimizerKind::Adagrad: return "adagrad";
    case OptimizerKind::Adadelta: return "adadelta";
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::Adamax: return "adamax";
    case OptimizerKind::Nadam: return "nadam";
    case OptimizerKind::AMSGrad: return "amsgrad";
    case OptimizerKind::FTRL: return "ftrl";
  }
  return "?";
}

OptimizerKind parse_optimizer(std::string_view name) {
  for (auto kind : kAllOptimizers)
    if (to_string(kind) == name) return kind;
  throw UsageError(fmt::format("unknown optimizer '{}'", name));
}

std::span<const OptimizerKind> all_optimizers() { return kAllOptimizers; }

double default_learning_rate(double alpha) { return alpha == 0.0 ? 1.0 : 0.1; }

Optimizer::Optimizer(const OptimizerConfig& cfg, std::size_t num_params)
    : cfg_(cfg), size_(num_params) {
  if (!(cfg.learning_rate > 0.0))
    throw UsageError("learning rate must be positive");
  double init_a = 0.0;
  if (cfg.kind == OptimizerKind::Adagrad || cfg.kind == OptimizerKind::FTRL)
    init_a = cfg.initial_accumulator;
  slot_a_.assign(num_params, init_a);
  slot_b_.assign(num_params, 0.0);
  slot_c_.assign(num_params, 0.0);
}

void Optimizer::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != size_ || grads.size() != size_)
    throw UsageError(fmt::format("optimizer expects {} parameters, got {}/{}",
                                 size_, params.size(), grads.size()));
  ++step_;
  const double lr = cfg_.learning_rate;
  const double eps = cfg_.epsilon;
  const double b1 = cfg_.beta1;
  const double b2 = cfg_.beta2;
  const double t = static_cast<double>(step_);

  switch (cfg_.kind) {
    case OptimizerKind::SGD:
      for (std::size_t i = 0; i < size_; ++i) params[i] -= lr * grads[i];
      break;

    case OptimizerKind::SGDMomentum:
    case OptimizerKind::SGDNesterov: {
      // slot_a: velocity
      const double mu = cfg_.momentum;
      const bool nesterov = cfg_.kind == OptimizerKind::SGDNesterov;
      for (std::size_t i = 0; i < size_; ++i) {
        auto& v = slot_a_[i];
        v = mu * v - lr * grads[i];
        params[i] += nesterov ? mu * v - lr * grads[i] : v;
      }
      break;
    }

    case OptimizerKind::Adagrad:
      // slot_a: sum of squared gradients
      for (std::size_t i = 0; i < size_; ++i) {
        slot_a_[i] += grads[i] * grads[i];
        params[i] -= lr * grads[i] / (std::sqrt(slot_a_[i]) + eps);
      }
      break;

    case OptimizerKind::Adadelta: {
      // slot_a: E[g^2], slot_b: E[dx^2]
      const double rho = cfg_.rho;
      for (std::size_t i = 0; i < size_; ++i) {
        auto& eg = slot_a_[i];
        auto& ex = slot_b_[i];
        eg = rho * eg + (1.0 - rho) * grads[i] * grads[i];
        const double dx = std::sqrt(ex + eps) / std::sqrt(eg + eps) * grads[i];
        ex = rho * ex + (1.0 - rho) * dx * dx;
        params[i] -= lr * dx;
      }
      break;
    }

    case OptimizerKind::Adam:
    case OptimizerKind::AMSGrad: {
      // slot_a: m, slot_b: v, slot_c: running max of v (AMSGrad)
      const bool ams = cfg_.kind == OptimizerKind::AMSGrad;
      const double step_size =
          lr * std::sqrt(1.0 - std::pow(b2, t)) / (1.0 - std::pow(b1, t));
      for (std::size_t i = 0; i < size_; ++i) {
        auto& m = slot_a_[i];
        auto& v = slot_b_[i];
        m += (grads[i] - m) * (1.0 - b1);
        v += (grads[i] * grads[i] - v) * (1.0 - b2);
        double denom_v = v;
        if (ams) {
          slot_c_[i] = std::max(slot_c_[i], v);
          denom_v = slot_c_[i];
        }
        params[i] -= m * step_size / (std::sqrt(denom_v) + eps);
      }
      break;
    }

    case OptimizerKind::Adamax: {
      // slot_a: m, slot_b: infinity norm u
      const double step_size = lr / (1.0 - std::pow(b1, t));
      for (std::size_t i = 0; i < size_; ++i) {
        auto& m = slot_a_[i];
        auto& u = slot_b_[i];
        m += (grads[i] - m) * (1.0 - b1);
        u = std::max(b2 * u, std::abs(grads[i]));
        params[i] -= step_size * m / (u + eps);
      }
      break;
    }

    case OptimizerKind::Nadam: {
      // Momentum schedule mu_t = b1 * (1 - 0.5 * 0.96^(0.004 t)).
      const double u_t = b1 * (1.0 - 0.5 * std::pow(0.96, 0.004 * t));
      const double u_next = b1 * (1.0 - 0.5 * std::pow(0.96, 0.004 * (t + 1)));
      const double u_prod = nadam_u_product_ * u_t;
      const double u_prod_next = u_prod * u_next;
      nadam_u_product_ = u_prod;
      const double b2_power = std::pow(b2, t);
      for (std::size_t i = 0; i < size_; ++i) {
        auto& m = slot_a_[i];
        auto& v = slot_b_[i];
        m += (grads[i] - m) * (1.0 - b1);
        v += (grads[i] * grads[i] - v) * (1.0 - b2);
        const double m_hat = u_next * m / (1.0 - u_prod_next) +
                             (1.0 - u_t) * grads[i] / (1.0 - u_prod);
        const double v_hat = v / (1.0 - b2_power);
        params[i] -= m_hat * lr / (std::sqrt(v_hat) + eps);
      }
      break;
    }

    case OptimizerKind::FTRL: {
      // slot_a: accumulator n, slot_b: linear z
      const double p = -cfg_.lr_power;
      for (std::size_t i = 0; i < size_; ++i) {
        auto& n = slot_a_[i];
        auto& z = slot_b_[i];
        if (step_ == 1 && params[i] != 0.0) {
          // Seed z so that the starting point is the current parameter
          // rather than the origin.
          const double q0 = std::pow(n, p) / lr + 2.0 * cfg_.l2;
          z = -params[i] * q0 - std::copysign(cfg_.l1, params[i]);
        }
        const double n_new = n + grads[i] * grads[i];
        z += grads[i] - (std::pow(n_new, p) - std::pow(n, p)) / lr * params[i];
        const double quadratic = std::pow(n_new, p) / lr + 2.0 * cfg_.l2;
        const double clipped = std::clamp(z, -cfg_.l1, cfg_.l1);
        params[i] = (clipped - z) / quadratic;
        n = n_new;
      }
      break;
    }
  }
}

std::string_view to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::L2Optimum: return "l2";
    case InitStrategy::Zero: return "zero";
    case InitStrategy::Random: return "random";
  }
  return "?";
}

InitStrategy parse_init(std::string_view name) {
  if (name == "l2") return InitStrategy::L2Optimum;
  if (name == "zero") return InitStrategy::Zero;
  if (name == "random") return InitStrategy::Random;
  throw UsageError(fmt::format("unknown init strategy '{}'", name));
}

PiecewisePolynomial initialize(const SampleSet& data,
                               std::span<const double> knots, int degree,
                               BasisKind basis, InitStrategy strategy,
                               std::uint64_t seed) {
  std::vector<double> kv(knots.begin(), knots.end());
  switch (strategy) {
    case InitStrategy::L2Optimum:
      return fit_segmentwise(data, knots, degree, basis);
    case InitStrategy::Zero:
      return PiecewisePolynomial::zeros(std::move(kv), degree, basis);
    case InitStrategy::Random: {
      auto pp = PiecewisePolynomial::zeros(std::move(kv), degree, basis);
      std::mt19937_64 engine(seed);
      std::vector<double> theta(pp.num_parameters());
      for (auto& c : theta)
        c = static_cast<double>(engine() >> 11) * 0x1.0p-52 - 1.0;
      return pp.with_coefficients(theta);
    }
  }
  throw UsageError("unknown init strategy");
}

TrainResult train(const SampleSet& data, const PiecewisePolynomial& initial,
                  const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw UsageError("epochs must be at least 1");
  if (cfg.patience < 0 || cfg.patience > cfg.epochs)
    throw UsageError(fmt::format("patience {} outside [0, epochs = {}]",
                                 cfg.patience, cfg.epochs));
  const Objective objective(data, initial, cfg.loss);
  Optimizer opt(cfg.optimizer, objective.num_parameters());

  std::vector<double> theta = initial.flat_coefficients();
  std::vector<double> grad(theta.size());

  TrainingTrace trace;
  trace.records.reserve(cfg.epochs);
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto loss = objective.evaluate(theta, grad);
    if (!std::isfinite(loss.total))
      throw DivergenceError(
          fmt::format("loss became non-finite at epoch {}", epoch), epoch);
    trace.records.push_back({epoch, loss.total, loss.l2, loss.ck});
    if (loss.total < best) {
      best = loss.total;
      trace.best_epoch = epoch;
      trace.best_coefficients = theta;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      trace.stopped_early = true;
      break;
    }
    opt.step(theta, grad);
  }
  auto model = initial.with_coefficients(trace.best_coefficients);
  return {std::move(trace), std::move(model)};
}

TrainResult train(const SampleSet& data, std::span<const double> knots,
                  int degree, BasisKind basis, const TrainConfig& cfg) {
  return train(data,
               initialize(data, knots, degree, basis, cfg.init, cfg.rng_seed),
               cfg);
}

}  // namespace ppfit
