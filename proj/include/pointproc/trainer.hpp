#pragma once

#include <cstdint>
#include <vector>

#include "pointproc/likelihood.hpp"
#include "pointproc/model.hpp"

namespace pointproc {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First-order moment tracker; step() ascends the objective.
class Adam {
public:
  Adam(int dim, const AdamConfig& config);
  void step(Eigen::VectorXd& x, const Eigen::VectorXd& grad);

private:
  AdamConfig config_;
  Eigen::VectorXd m_, v_;
  std::int64_t t_ = 0;
};

struct TrainConfig {
  AdamConfig adam;
  int max_epochs = 50;
  int patience = 5;       // epochs without a dev improvement before stopping
  int eval_mult = 10;     // dev-eval draws per event
  std::uint64_t seed = 0;
  int threads = 1;
  int batch = 1;  // streams per step; 1 is plain per-stream SGD, >1 averages gradients
};

struct EpochRow {
  int epoch = 0;                  // 1-based
  double train_ll_per_event = 0;  // sampled objective seen during the pass
  double dev_ll_per_event = 0;
};

struct FitReport {
  std::vector<EpochRow> epoch_log;
  int stopped_epoch = 0;
  double best_dev_ll_per_event = 0.0;
  int best_epoch = 0;
};

// Fresh parameters for training: classical rates and scales start at 1,
// neural weights are N(0, 0.01) draws.  Deterministic per seed.  D is
// ignored for the classical kinds.
[[nodiscard]] AnyModel init_params(ModelKind kind, int K, int D, std::uint64_t seed);

// Epoch-shuffled stochastic MLE with positivity kept through a softplus
// reparameterization and early stopping on dev log-likelihood.  The model
// is left at the best dev-scoring parameters.
FitReport train(AnyModel& m, const Dataset& train_data, const Dataset& dev_data,
                const TrainConfig& config);

struct LearningCurvePoint {
  int n_train = 0;
  double test_ll_per_event = 0.0;
};

// Re-train from scratch on nested prefixes of the training set.
[[nodiscard]] std::vector<LearningCurvePoint> learning_curve(
    ModelKind kind, int D, const Dataset& train_data, const Dataset& dev_data,
    const Dataset& test_data, const std::vector<int>& sizes,
    const TrainConfig& config);

}  // namespace pointproc
