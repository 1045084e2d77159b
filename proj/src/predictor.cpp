#include "pointproc/predictor.hpp"

#include <cmath>
#include <variant>

#include "pointproc/parallel.hpp"
#include "pointproc/sampler.hpp"

namespace pointproc {

template <class Model>
Prediction predict_next(const Model& m, const cursor_t<Model>& cursor,
                        int n_draws, Rng& rng) {
  if (n_draws < 1) throw ValidationError("n_draws must be at least 1");

  const int K = static_cast<int>(bound_at(m, cursor).size());
  double time_sum = 0.0;
  Eigen::VectorXd ratio_sum = Eigen::VectorXd::Zero(K);
  for (int d = 0; d < n_draws; ++d) {
    const auto next = sample_next(m, cursor, rng);
    if (!next) {
      throw NumericalError(
          "cannot predict the next event of a dead process");
    }
    const Eigen::VectorXd lambda = intensity_at(m, cursor, next->time);
    time_sum += next->time;
    ratio_sum += lambda / lambda.sum();
  }

  Prediction out;
  out.time = time_sum / n_draws;
  int best = 0;
  for (int k = 1; k < K; ++k) {
    if (ratio_sum[k] > ratio_sum[best]) best = k;  // ties keep the smaller id
  }
  out.type = best + 1;
  return out;
}

namespace {

template <class Model>
void predict_stream(const Model& m, const EventStream& stream, int stream_idx,
                    int n_draws, std::uint64_t seed,
                    std::vector<PredictionRow>& rows) {
  auto cursor = make_cursor(m);
  rows.resize(stream.size());
  for (int j = 0; j < stream.size(); ++j) {
    Rng rng(derive_seed(seed, 0x70726564ULL, static_cast<std::uint64_t>(stream_idx),
                        static_cast<std::uint64_t>(j)));  // "pred" tag
    const Prediction pred = predict_next(m, cursor, n_draws, rng);
    const Event& truth = stream.events[j];
    rows[j] = PredictionRow{stream_idx, j, truth.time, pred.time, truth.type,
                            pred.type};
    advance(m, cursor, truth.type, truth.time);
  }
}

}  // namespace

PredictionMetrics evaluate_predictions(const AnyModel& m, const Dataset& data,
                                       int n_draws, std::uint64_t seed,
                                       int threads,
                                       std::vector<PredictionRow>* rows) {
  if (data.num_types != num_types(m)) {
    throw ValidationError("dataset and model disagree on the number of types");
  }
  for (int i = 0; i < data.size(); ++i) validate_stream(data.streams[i]);

  std::vector<std::vector<PredictionRow>> per_stream(data.size());
  parallel_for(data.size(), threads, [&](int i) {
    std::visit(
        [&](const auto& p) {
          predict_stream(p, data.streams[i], i, n_draws, seed, per_stream[i]);
        },
        m);
  });

  PredictionMetrics metrics;
  double sq_sum = 0.0;
  std::int64_t wrong = 0;
  for (const auto& stream_rows : per_stream) {
    for (const PredictionRow& row : stream_rows) {
      const double err = row.predicted_time - row.true_time;
      sq_sum += err * err;
      if (row.predicted_type != row.true_type) ++wrong;
      ++metrics.n_predictions;
      if (rows != nullptr) rows->push_back(row);
    }
  }
  if (metrics.n_predictions > 0) {
    metrics.rmse = std::sqrt(sq_sum / metrics.n_predictions);
    metrics.error_rate = static_cast<double>(wrong) / metrics.n_predictions;
  }
  return metrics;
}

template Prediction predict_next<SemppParams>(const SemppParams&,
                                              const DecomposableCursor&, int,
                                              Rng&);
template Prediction predict_next<DsmppParams>(const DsmppParams&,
                                              const DecomposableCursor&, int,
                                              Rng&);
template Prediction predict_next<CtlstmParams>(const CtlstmParams&,
                                               const NeuralCursor&, int, Rng&);

}  // namespace pointproc
