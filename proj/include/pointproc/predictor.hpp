#pragma once

#include <cstdint>
#include <vector>

#include "pointproc/model.hpp"
#include "pointproc/rng.hpp"

namespace pointproc {

struct Prediction {
  double time = 0.0;  // minimum-Bayes-risk time under L2: mean of sampled times
  int type = 0;       // argmax_k of the averaged ratio lambda_k / lambda
};

// Monte-Carlo minimum-Bayes-risk prediction of the next event from the
// cursor's history: n_draws thinning samples give the time estimate, and
// the same sampled times are reused to average the type ratios.  Ties in
// the argmax go to the smallest type id.
template <class Model>
[[nodiscard]] Prediction predict_next(const Model& m, const cursor_t<Model>& cursor,
                                      int n_draws, Rng& rng);

struct PredictionRow {
  int stream = 0;
  int index = 0;  // position within the stream, 0-based
  double true_time = 0.0, predicted_time = 0.0;
  int true_type = 0, predicted_type = 0;
};

struct PredictionMetrics {
  double rmse = 0.0;        // over event times
  double error_rate = 0.0;  // over event types
  std::int64_t n_predictions = 0;
};

// Predict every event of every stream from its preceding history (the
// first event is predicted from the empty history).  Sub-seeds are derived
// per (seed, stream, position), so results do not depend on threads.
[[nodiscard]] PredictionMetrics evaluate_predictions(
    const AnyModel& m, const Dataset& data, int n_draws, std::uint64_t seed,
    int threads = 1, std::vector<PredictionRow>* rows = nullptr);

}  // namespace pointproc
