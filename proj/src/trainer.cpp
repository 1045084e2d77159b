#include "pointproc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pointproc/parallel.hpp"
#include "pointproc/rng.hpp"
#include "pointproc/transfer.hpp"

namespace pointproc {

Adam::Adam(int dim, const AdamConfig& config)
    : config_(config), m_(Eigen::VectorXd::Zero(dim)),
      v_(Eigen::VectorXd::Zero(dim)) {
  if (dim < 1) throw ValidationError("Adam needs at least one parameter");
}

void Adam::step(Eigen::VectorXd& x, const Eigen::VectorXd& grad) {
  if (grad.size() != m_.size() || x.size() != m_.size()) {
    throw ValidationError("Adam dimension mismatch");
  }
  ++t_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseProduct(grad);
  const double m_scale = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double v_scale = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  // gradient ascent
  x.array() += config_.lr * (m_ / m_scale).array() /
               ((v_ / v_scale).array().sqrt() + config_.eps);
}

AnyModel init_params(ModelKind kind, int K, int D, std::uint64_t seed) {
  if (K < 1) throw ValidationError("num_types must be at least 1");
  switch (kind) {
    case ModelKind::sempp: {
      SemppParams p;
      p.mu = Eigen::VectorXd::Ones(K);
      p.alpha = Eigen::MatrixXd::Ones(K, K);
      p.delta = Eigen::MatrixXd::Ones(K, K);
      return p;
    }
    case ModelKind::dsmpp: {
      DsmppParams p;
      p.mu = Eigen::VectorXd::Ones(K);
      p.alpha = Eigen::MatrixXd::Ones(K, K);
      p.delta = Eigen::MatrixXd::Ones(K, K);
      p.s = Eigen::VectorXd::Ones(K);
      return p;
    }
    case ModelKind::nsmmpp: {
      if (D < 1) throw ValidationError("hidden size must be at least 1");
      CtlstmParams p = make_zero_ctlstm(K, D);
      Eigen::VectorXd v = get_params(p);
      Rng rng(derive_seed(seed, 0x696e6974ULL));  // "init" tag
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal(0.0, 0.01);
      v.segment(v.size() - (K + 1), K).setOnes();  // s_k
      v[v.size() - 1] = 1.0;                       // decay scale
      set_params(p, v);
      return p;
    }
  }
  throw ValidationError("unknown model kind");
}

namespace {

Eigen::VectorXd to_raw(const Eigen::VectorXd& v, const std::vector<char>& mask) {
  Eigen::VectorXd raw = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (mask[i]) {
      if (!(v[i] > 0.0)) {
        throw ValidationError("positive-constrained parameter " +
                              std::to_string(i) + " is not positive");
      }
      raw[i] = softplus_inverse(v[i]);
    }
  }
  return raw;
}

Eigen::VectorXd from_raw(const Eigen::VectorXd& raw,
                         const std::vector<char>& mask) {
  Eigen::VectorXd v = raw;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (mask[i]) v[i] = softplus(raw[i]);
  }
  return v;
}

// chain rule through the reparameterization: d v / d raw = sigmoid(raw)
Eigen::VectorXd grad_to_raw(const Eigen::VectorXd& grad_v,
                            const Eigen::VectorXd& raw,
                            const std::vector<char>& mask) {
  Eigen::VectorXd g = grad_v;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (mask[i]) g[i] *= sigmoid(raw[i]);
  }
  return g;
}

}  // namespace

FitReport train(AnyModel& m, const Dataset& train_data, const Dataset& dev_data,
                const TrainConfig& config) {
  if (train_data.size() == 0) throw ValidationError("training set is empty");
  if (dev_data.size() == 0) throw ValidationError("dev set is empty");
  if (train_data.num_types != num_types(m) ||
      dev_data.num_types != num_types(m)) {
    throw ValidationError("dataset and model disagree on the number of types");
  }
  if (config.max_epochs < 1) throw ValidationError("max_epochs must be >= 1");
  if (config.patience < 1) throw ValidationError("patience must be >= 1");
  if (config.batch < 1) throw ValidationError("batch must be >= 1");

  const std::vector<char> mask = positivity_mask(m);
  Eigen::VectorXd raw = to_raw(get_params(m), mask);
  Adam adam(static_cast<int>(raw.size()), config.adam);

  FitReport report;
  Eigen::VectorXd best_raw = raw;
  double best_dev = -std::numeric_limits<double>::infinity();
  int evals_since_best = 0;

  const int n = train_data.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(config.seed, 0x65706f63ULL,
                                static_cast<std::uint64_t>(epoch)));  // "epoc"
    shuffle_rng.shuffle(order);

    double epoch_ll = 0.0;
    std::int64_t epoch_events = 0;
    for (int start = 0; start < n; start += config.batch) {
      const int count = std::min(config.batch, n - start);
      set_params(m, from_raw(raw, mask));

      // all streams of the batch see the same parameters
      std::vector<Eigen::VectorXd> grads(count);
      std::vector<double> totals(count);
      std::vector<std::int64_t> events(count);
      parallel_for(count, config.threads, [&](int b) {
        const int idx = order[start + b];
        const EventStream& stream = train_data.streams[idx];
        McConfig mc;
        mc.n_samples = std::max(1, stream.size());
        mc.seed = derive_seed(config.seed, 0x67726164ULL,  // "grad"
                              static_cast<std::uint64_t>(epoch),
                              static_cast<std::uint64_t>(idx));
        LogLikReport ll;
        grads[b] = loglik_gradient(m, stream, mc, &ll);
        totals[b] = ll.total;
        events[b] = stream.size();
      });

      Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(raw.size());
      for (int b = 0; b < count; ++b) {
        if (!std::isfinite(totals[b])) {
          throw NumericalError("log-likelihood became non-finite on stream " +
                               std::to_string(order[start + b]) + " in epoch " +
                               std::to_string(epoch));
        }
        grad_sum += grads[b];
        epoch_ll += totals[b];
        epoch_events += events[b];
      }
      Eigen::VectorXd grad_raw =
          grad_to_raw(grad_sum / count, raw, mask);
      if (!grad_raw.allFinite()) {
        throw NumericalError("gradient became non-finite in epoch " +
                             std::to_string(epoch));
      }
      adam.step(raw, grad_raw);
    }

    set_params(m, from_raw(raw, mask));
    const DatasetLoglik dev = dataset_log_likelihood(
        m, dev_data, derive_seed(config.seed, 0x64657632ULL),  // "dev2"
        config.eval_mult, config.threads);

    EpochRow row;
    row.epoch = epoch;
    row.train_ll_per_event =
        epoch_events > 0 ? epoch_ll / epoch_events : epoch_ll;
    row.dev_ll_per_event = dev.per_event;
    report.epoch_log.push_back(row);
    report.stopped_epoch = epoch;

    if (dev.per_event > best_dev) {
      best_dev = dev.per_event;
      best_raw = raw;
      report.best_epoch = epoch;
      evals_since_best = 0;
    } else if (++evals_since_best >= config.patience) {
      break;
    }
  }

  report.best_dev_ll_per_event = best_dev;
  set_params(m, from_raw(best_raw, mask));
  return report;
}

std::vector<LearningCurvePoint> learning_curve(
    ModelKind kind, int D, const Dataset& train_data, const Dataset& dev_data,
    const Dataset& test_data, const std::vector<int>& sizes,
    const TrainConfig& config) {
  std::vector<LearningCurvePoint> curve;
  for (const int n : sizes) {
    if (n < 1 || n > train_data.size()) {
      throw ValidationError("learning-curve size " + std::to_string(n) +
                            " is outside the training set");
    }
    Dataset prefix;
    prefix.num_types = train_data.num_types;
    prefix.streams.assign(train_data.streams.begin(),
                          train_data.streams.begin() + n);

    AnyModel m = init_params(kind, train_data.num_types, D,
                             derive_seed(config.seed, 0x6c637276ULL,  // "lcrv"
                                         static_cast<std::uint64_t>(n)));
    TrainConfig tc = config;
    tc.seed = derive_seed(config.seed, 0x6c637276ULL,
                          static_cast<std::uint64_t>(n), 1);
    train(m, prefix, dev_data, tc);

    const DatasetLoglik test = dataset_log_likelihood(
        m, test_data, derive_seed(config.seed, 0x6c637276ULL, 0, 2),
        config.eval_mult, config.threads);
    curve.push_back(LearningCurvePoint{n, test.per_event});
  }
  return curve;
}

}  // namespace pointproc
