#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pointproc/sampler.hpp"
#include "pointproc/trainer.hpp"

namespace pointproc {

// Random ground-truth generator ranges: sempp draws mu, alpha from U[0,1];
// dsmpp draws mu, alpha from U[-1,1] with scales at 1; both draw delta from
// U[10,20].  nsmmpp draws every entry from U[-1,1], passing the positive
// tail (per-type scales, decay scale) through a softplus.
struct GroundTruthSpec {
  ModelKind kind = ModelKind::sempp;
  int num_types = 5;
  int hidden = 8;      // nsmmpp only
  int len_lo = 20;     // events per stream, inclusive bounds
  int len_hi = 100;
  int n_train = 800;
  int n_dev = 100;
  int n_test = 100;
};

[[nodiscard]] AnyModel gen_ground_truth(const GroundTruthSpec& spec,
                                        std::uint64_t seed);

struct SyntheticData {
  Dataset train, dev, test;
};

// Streams stop after their drawn event count; the horizon is the time of
// the last event.
[[nodiscard]] SyntheticData gen_synthetic(const AnyModel& truth,
                                          const GroundTruthSpec& spec,
                                          std::uint64_t seed);

// Remove all events of the given types and re-index the survivors densely
// (order preserving).  Horizons are unchanged; streams may become empty.
[[nodiscard]] Dataset censor(const Dataset& data,
                             const std::vector<int>& removed_types);

// Pooled intensity mean-squared error of `fitted` against `truth` on 100
// uniformly spaced probe times per stream, as a fraction of the true
// intensity's variance pooled the same way (centered per type, so a
// baseline predicting each type's mean rate scores exactly 1).
[[nodiscard]] double intensity_mse_fraction(const AnyModel& truth,
                                            const AnyModel& fitted,
                                            const Dataset& data,
                                            int probes_per_stream = 100);

struct PilotConfig {
  std::uint64_t seed = 0;
  bool full_scale = false;  // 8000/1000/1000 streams instead of 800/100/100
  int threads = 1;
  TrainConfig train;
  int probes_per_stream = 100;
  // the ground-truth nsmmpp needs a fair amount of width before its data
  // stops looking like a Hawkes process; fits stay small
  int gen_hidden = 32;
  int fit_hidden = 8;
};

// Cross-fitting grid: generators x fitted kinds, in kind order
// (sempp, dsmpp, nsmmpp).
struct PilotReport {
  std::array<ModelKind, 3> kinds{ModelKind::sempp, ModelKind::dsmpp,
                                 ModelKind::nsmmpp};
  Eigen::Matrix3d ll_grid;        // [generator][fitted] test nats/event
  Eigen::Vector3d oracle_ll;      // generator scored on its own data
  Eigen::Matrix3d intensity_mse;  // fraction of true-intensity variance
  // share of neural-generated test streams where the fitted nsmmpp beats
  // the fitted sempp
  double neural_win_rate = 0.0;
};

[[nodiscard]] PilotReport pilot_experiment(const PilotConfig& config);

void write_pilot_report(const PilotReport& report, const std::string& json_path,
                        const std::string& csv_path,
                        const std::string& header_comment);

struct MissingDataConfig {
  std::uint64_t seed = 0;
  // true: every removal set that deletes at least one type and keeps at
  // least one (30 for K = 5); false: n_patterns sampled from those
  bool all_patterns = false;
  int n_patterns = 5;
  int threads = 1;
  TrainConfig train;
};

struct MissingPatternResult {
  std::vector<int> removed;  // original type ids deleted before training
  double sempp_ll = 0.0;     // censored-test nats/event
  double nsmmpp_ll = 0.0;
};

struct MissingDataReport {
  std::vector<MissingPatternResult> patterns;
};

[[nodiscard]] MissingDataReport missing_data_experiment(
    const MissingDataConfig& config);

void write_missing_report(const MissingDataReport& report,
                          const std::string& json_path,
                          const std::string& csv_path,
                          const std::string& header_comment);

struct SuperpositionReport {
  // block-diagonal dsmpp: worst |cross-block intensity difference|, exact 0 expected
  double classical_max_abs_dev = 0.0;
  // gate-rigged nsmmpp insulation: worst relative intensity deviation when
  // insulated-type events are inserted
  double rigged_max_rel_dev = 0.0;
  // the same interleaving probe on an un-rigged random model, for contrast
  double unrigged_max_rel_dev = 0.0;
};

[[nodiscard]] SuperpositionReport superposition_check(std::uint64_t seed);

void write_superposition_report(const SuperpositionReport& report,
                                const std::string& json_path,
                                const std::string& header_comment);

// Moderate-range random instances for gradient and property checks: decay
// rates near 1 and free scales, unlike the ground-truth generator above.
[[nodiscard]] AnyModel random_test_model(ModelKind kind, int K, int D,
                                         std::uint64_t seed);

// A short stream drawn from the model itself (max_events stopping).
[[nodiscard]] EventStream random_test_stream(const AnyModel& m, int max_events,
                                             std::uint64_t seed);

}  // namespace pointproc
