#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "pointproc/model.hpp"
#include "pointproc/rng.hpp"

namespace pointproc {

enum class ThinningVariant {
  aggregate,  // one proposal process at the summed bound, accept + pick type together
  per_type,   // independent candidate per type, earliest accepted wins
};

// Exactly one of horizon / max_events must be set.  With horizon T the
// stream covers (0, T]; with max_events I the stream ends at its I-th
// event and the horizon is set to that time.
struct SampleConfig {
  std::optional<double> horizon;
  std::optional<int> max_events;
  std::uint64_t seed = 0;
  ThinningVariant variant = ThinningVariant::aggregate;
  std::uint64_t max_proposals_per_event = 10'000'000;  // circuit breaker
};

// Filled during sampling when supplied; the audit confirms every proposal
// satisfied lambda(t) <= bound.
struct ThinningAudit {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t bound_violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min of bound - lambda
};

struct NextEvent {
  int type = 0;
  double time = 0.0;
};

// Draw the next event after cursor's anchor by thinning.  Returns nullopt
// only when the intensity bound is exactly 0 (the process is dead).
// Throws NumericalError if the proposal budget is exhausted.
template <class Model>
[[nodiscard]] std::optional<NextEvent> sample_next(
    const Model& m, const cursor_t<Model>& cursor, Rng& rng,
    ThinningVariant variant = ThinningVariant::aggregate,
    std::uint64_t max_proposals = 10'000'000, ThinningAudit* audit = nullptr);

template <class Model>
[[nodiscard]] EventStream sample_stream(const Model& m, const SampleConfig& config,
                                        ThinningAudit* audit = nullptr);

[[nodiscard]] EventStream sample_stream(const AnyModel& m, const SampleConfig& config,
                                        ThinningAudit* audit = nullptr);

// n streams with per-stream seeds derived from config.seed.
[[nodiscard]] Dataset sample_dataset(const AnyModel& m, const SampleConfig& config,
                                     int n_streams);

}  // namespace pointproc
