#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ppfit/loss.hpp"
#include "ppfit/ppmodel.hpp"
#include "ppfit/samples.hpp"

namespace ppfit {

enum class OptimizerKind {
  SGD,
  SGDMomentum,
  SGDNesterov,
  Adagrad,
  Adadelta,
  Adam,
  Adamax,
  Nadam,
  AMSGrad,
  FTRL,
};

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);
std::span<const OptimizerKind> all_optimizers();

// Hyperparameters. Defaults are the usual published values; fields not used
// by the selected kind are ignored.
struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::AMSGrad;
  double learning_rate = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  double momentum = 0.9;              // SGDMomentum, SGDNesterov
  double rho = 0.95;                  // Adadelta
  double initial_accumulator = 0.1;   // Adagrad, FTRL
  double l1 = 0.0;                    // FTRL
  double l2 = 0.0;                    // FTRL
  double lr_power = -0.5;             // FTRL
};

// 1.0 when only approximating (alpha == 0), 0.1 for the combined loss.
double default_learning_rate(double alpha);

// Stateful first-order update rule over a fixed-size parameter vector.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, std::size_t num_params);

  // One in-place update. Throws UsageError on size mismatch.
  void step(std::span<double> params, std::span<const double> grads);

  std::int64_t iterations() const { return step_; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  OptimizerConfig cfg_;
  std::size_t size_;
  std::int64_t step_ = 0;
  // Per-parameter slots; meaning depends on kind (moments, accumulators).
  std::vector<double> slot_a_;
  std::vector<double> slot_b_;
  std::vector<double> slot_c_;
  double nadam_u_product_ = 1.0;
};

enum class InitStrategy { L2Optimum, Zero, Random };

std::string_view to_string(InitStrategy s);
InitStrategy parse_init(std::string_view name);

struct TrainConfig {
  OptimizerConfig optimizer;
  int epochs = 2000;
  int patience = 0;  // 0 disables early stopping
  InitStrategy init = InitStrategy::L2Optimum;
  LossConfig loss;
  std::uint64_t rng_seed = 0;
};

struct EpochRecord {
  int epoch = 0;
  double total = 0.0;
  double l2 = 0.0;
  double ck = 0.0;
};

struct TrainingTrace {
  std::vector<EpochRecord> records;
  int best_epoch = 0;
  std::vector<double> best_coefficients;
  bool stopped_early = false;

  const EpochRecord& best() const { return records.at(best_epoch); }
};

struct TrainResult {
  TrainingTrace trace;
  PiecewisePolynomial model;  // carries the best coefficients
};

// Starting coefficients: segment-wise least squares, all zeros, or
// i.i.d. uniform on [-1, 1] drawn from mt19937_64(seed).
PiecewisePolynomial initialize(const SampleSet& data,
                               std::span<const double> knots, int degree,
                               BasisKind basis, InitStrategy strategy,
                               std::uint64_t seed);

// Full-batch gradient descent. Epoch e records the loss of the coefficients
// before its update. Stops after `patience` consecutive epochs without a new
// best total loss and returns the best coefficients seen. Throws
// DivergenceError on a non-finite loss.
TrainResult train(const SampleSet& data, const PiecewisePolynomial& initial,
                  const TrainConfig& cfg);
TrainResult train(const SampleSet& data, std::span<const double> knots,
                  int degree, BasisKind basis, const TrainConfig& cfg);

}  // namespace ppfit
