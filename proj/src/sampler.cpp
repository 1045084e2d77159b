#include "pointproc/sampler.hpp"

#include <cmath>
#include <string>
#include <type_traits>

namespace pointproc {

namespace {

inline void note_proposal(ThinningAudit* audit, double bound, double lambda) {
  if (audit == nullptr) return;
  ++audit->proposals;
  const double margin = bound - lambda;
  if (margin < audit->worst_margin) audit->worst_margin = margin;
  if (lambda > bound) ++audit->bound_violations;
}

template <class Model>
std::optional<NextEvent> next_aggregate(const Model& m,
                                        const cursor_t<Model>& cursor, Rng& rng,
                                        std::uint64_t max_proposals,
                                        ThinningAudit* audit) {
  const Eigen::VectorXd bounds = bound_at(m, cursor);
  const double total_bound = bounds.sum();
  if (!(total_bound > 0.0)) return std::nullopt;  // dead process
  const int K = static_cast<int>(bounds.size());

  double t = anchor_of(cursor);
  for (std::uint64_t n = 0; n < max_proposals; ++n) {
    t += rng.exponential(total_bound);
    const Eigen::VectorXd lambda = intensity_at(m, cursor, t);
    note_proposal(audit, total_bound, lambda.sum());
    // One uniform decides acceptance and the type together: the proposal
    // survives as type k with probability lambda_k / total_bound.
    const double u = rng.uniform() * total_bound;
    double cum = 0.0;
    for (int k = 0; k < K; ++k) {
      cum += lambda[k];
      if (u < cum) {
        if (audit != nullptr) ++audit->accepted;
        return NextEvent{k + 1, t};
      }
    }
  }
  throw NumericalError(
      "thinning exhausted its proposal budget; the intensity bound is "
      "far above the realized intensity");
}

template <class Model>
std::optional<NextEvent> next_per_type(const Model& m,
                                       const cursor_t<Model>& cursor, Rng& rng,
                                       std::uint64_t max_proposals,
                                       ThinningAudit* audit) {
  const Eigen::VectorXd bounds = bound_at(m, cursor);
  const int K = static_cast<int>(bounds.size());
  const double anchor = anchor_of(cursor);

  std::optional<NextEvent> winner;
  std::uint64_t budget = max_proposals;
  for (int k = 0; k < K; ++k) {
    if (!(bounds[k] > 0.0)) continue;  // this type can never fire
    double t = anchor;
    bool accepted = false;
    while (!accepted) {
      if (budget == 0) {
        throw NumericalError(
            "thinning exhausted its proposal budget; the intensity bound "
            "is far above the realized intensity");
      }
      --budget;
      t += rng.exponential(bounds[k]);
      const double lambda_k = intensity_at(m, cursor, t)[k];
      note_proposal(audit, bounds[k], lambda_k);
      if (rng.uniform() * bounds[k] < lambda_k) {
        accepted = true;
        if (audit != nullptr) ++audit->accepted;
      }
    }
    if (!winner || t < winner->time) winner = NextEvent{k + 1, t};
  }
  return winner;
}

}  // namespace

template <class Model>
std::optional<NextEvent> sample_next(const Model& m,
                                     const cursor_t<Model>& cursor, Rng& rng,
                                     ThinningVariant variant,
                                     std::uint64_t max_proposals,
                                     ThinningAudit* audit) {
  return variant == ThinningVariant::aggregate
             ? next_aggregate(m, cursor, rng, max_proposals, audit)
             : next_per_type(m, cursor, rng, max_proposals, audit);
}

namespace {

template <class Model>
int model_type_count(const Model& m) {
  if constexpr (std::is_same_v<Model, CtlstmParams>) {
    return m.num_types;
  } else {
    return m.num_types();
  }
}

}  // namespace

template <class Model>
EventStream sample_stream(const Model& m, const SampleConfig& config,
                          ThinningAudit* audit) {
  if (config.horizon.has_value() == config.max_events.has_value()) {
    throw ValidationError(
        "exactly one of horizon and max_events must be given");
  }
  if (config.horizon && !(*config.horizon > 0.0)) {
    throw ValidationError("sampling horizon must be positive");
  }
  if (config.max_events && *config.max_events < 1) {
    throw ValidationError("max_events must be at least 1");
  }
  validate_params(m);

  Rng rng(derive_seed(config.seed, 0x73616d70ULL));  // "samp" tag
  auto cursor = make_cursor(m);
  EventStream out;
  out.num_types = model_type_count(m);

  if (config.horizon) {
    out.horizon = *config.horizon;
    for (;;) {
      const auto next = sample_next(m, cursor, rng, config.variant,
                                    config.max_proposals_per_event, audit);
      if (!next || next->time > out.horizon) break;  // overshoot discarded
      out.events.push_back({next->type, next->time});
      advance(m, cursor, next->type, next->time);
    }
  } else {
    const int target = *config.max_events;
    while (out.size() < target) {
      const auto next = sample_next(m, cursor, rng, config.variant,
                                    config.max_proposals_per_event, audit);
      if (!next) {
        throw NumericalError("the process died after " +
                             std::to_string(out.size()) + " of " +
                             std::to_string(target) + " requested events");
      }
      out.events.push_back({next->type, next->time});
      advance(m, cursor, next->type, next->time);
    }
    out.horizon = out.events.back().time;
  }
  return out;
}

EventStream sample_stream(const AnyModel& m, const SampleConfig& config,
                          ThinningAudit* audit) {
  return std::visit(
      [&](const auto& p) { return sample_stream(p, config, audit); }, m);
}

Dataset sample_dataset(const AnyModel& m, const SampleConfig& config,
                       int n_streams) {
  if (n_streams < 0) throw ValidationError("n_streams must be non-negative");
  Dataset data;
  data.num_types = num_types(m);
  data.streams.reserve(n_streams);
  for (int i = 0; i < n_streams; ++i) {
    SampleConfig per = config;
    per.seed = derive_seed(config.seed, 0x7374726dULL,
                           static_cast<std::uint64_t>(i));  // "strm" tag
    data.streams.push_back(sample_stream(m, per));
  }
  return data;
}

template std::optional<NextEvent> sample_next<SemppParams>(
    const SemppParams&, const DecomposableCursor&, Rng&, ThinningVariant,
    std::uint64_t, ThinningAudit*);
template std::optional<NextEvent> sample_next<DsmppParams>(
    const DsmppParams&, const DecomposableCursor&, Rng&, ThinningVariant,
    std::uint64_t, ThinningAudit*);
template std::optional<NextEvent> sample_next<CtlstmParams>(
    const CtlstmParams&, const NeuralCursor&, Rng&, ThinningVariant,
    std::uint64_t, ThinningAudit*);

template EventStream sample_stream<SemppParams>(const SemppParams&,
                                                const SampleConfig&,
                                                ThinningAudit*);
template EventStream sample_stream<DsmppParams>(const DsmppParams&,
                                                const SampleConfig&,
                                                ThinningAudit*);
template EventStream sample_stream<CtlstmParams>(const CtlstmParams&,
                                                 const SampleConfig&,
                                                 ThinningAudit*);

}  // namespace pointproc
