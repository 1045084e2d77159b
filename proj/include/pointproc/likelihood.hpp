#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pointproc/model.hpp"

namespace pointproc {

// Monte-Carlo settings for the compensator integral.  Stratified sampling
// places one uniform draw in each of n_samples equal-width subintervals of
// (0, T); the raw mode draws all of them from (0, T) directly.  Both are
// unbiased.
struct McConfig {
  int n_samples = 1;
  std::uint64_t seed = 0;
  bool stratified = true;
  // Optional end-of-stream type: intensities are treated as 0 after an
  // event of this type, so the integral stops there.  Unused by the
  // experiments.
  std::optional<int> eos_type;
};

struct LogLikReport {
  double total = 0.0;          // event_term - integral_term
  double event_term = 0.0;     // sum_i log lambda_{k_i}(t_i)
  double integral_term = 0.0;  // estimated integral of the total intensity
  double type_term = 0.0;      // sum_i log(lambda_{k_i}(t_i) / lambda(t_i))
  double time_term = 0.0;      // total - type_term
  std::vector<double> per_event;  // log lambda_{k_i}(t_i) per event
};

// The sample times used by an McConfig, sorted ascending.  Exposed so
// oracles can integrate against the exact same grid.
[[nodiscard]] std::vector<double> mc_sample_times(double horizon,
                                                  const McConfig& mc);

[[nodiscard]] LogLikReport log_likelihood(const AnyModel& m,
                                          const EventStream& stream,
                                          const McConfig& mc);

// Estimate of integral_0^T lambda(t) dt and its gradient with respect to
// the flat parameter vector.
[[nodiscard]] std::pair<double, Eigen::VectorXd> mc_integral(
    const AnyModel& m, const EventStream& stream, const McConfig& mc);

// Gradient of the sampled log-likelihood with respect to the flat
// parameter vector.  When `report` is non-null the forward quantities are
// stored there.
[[nodiscard]] Eigen::VectorXd loglik_gradient(const AnyModel& m,
                                              const EventStream& stream,
                                              const McConfig& mc,
                                              LogLikReport* report = nullptr);

// Worst mismatch between loglik_gradient and central finite differences of
// the sampled objective, sharing the MC draw through mc.seed.  Relative
// error per coordinate, absolute where both magnitudes are below 1e-6.
// Pre: step in [1e-7, 1e-3].
[[nodiscard]] double finite_diff_check(const AnyModel& m,
                                       const EventStream& stream, double step,
                                       const McConfig& mc);

// Deterministic trapezoid integral of the total intensity over (0, T],
// splitting at event times so each panel is smooth.  Test oracle for the
// MC estimator.
[[nodiscard]] double quadrature_total_intensity(const AnyModel& m,
                                                const EventStream& stream,
                                                int n_points);

struct DatasetLoglik {
  double total = 0.0;
  std::int64_t n_events = 0;
  double per_event = 0.0;
  std::vector<LogLikReport> reports;  // one per stream
};

// Held-out evaluation: per-stream n_samples = sample_mult * max(1, I),
// sub-seeds derived per stream index.  Deterministic for fixed threads=any.
[[nodiscard]] DatasetLoglik dataset_log_likelihood(const AnyModel& m,
                                                   const Dataset& data,
                                                   std::uint64_t seed,
                                                   int sample_mult = 10,
                                                   int threads = 1);

}  // namespace pointproc
