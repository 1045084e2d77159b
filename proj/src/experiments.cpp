#include "pointproc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include <json.hpp>

#include "pointproc/transfer.hpp"

namespace pointproc {

namespace {

constexpr std::uint64_t kTagTruth = 0x74727468ULL;   // "trth"
constexpr std::uint64_t kTagData = 0x64617461ULL;    // "data"
constexpr std::uint64_t kTagEval = 0x65766c73ULL;    // "evls"
constexpr std::uint64_t kTagInit = 0x66696e69ULL;    // "fini"
constexpr std::uint64_t kTagTrain = 0x6674726eULL;   // "ftrn"
constexpr std::uint64_t kTagLengths = 0x6c656e73ULL; // "lens"
constexpr std::uint64_t kTagStream = 0x73747273ULL;  // "strs"
constexpr std::uint64_t kTagPattern = 0x70617474ULL; // "patt"

void check_spec(const GroundTruthSpec& spec) {
  if (spec.num_types < 1) throw ValidationError("num_types must be at least 1");
  if (spec.kind == ModelKind::nsmmpp && spec.hidden < 1) {
    throw ValidationError("hidden size must be at least 1");
  }
  if (spec.len_lo < 1 || spec.len_hi < spec.len_lo || spec.len_hi > 10000) {
    throw ValidationError("length range must satisfy 1 <= lo <= hi <= 10000");
  }
  if (spec.n_train < 1 || spec.n_dev < 1 || spec.n_test < 1) {
    throw ValidationError("stream counts must be positive");
  }
}

}  // namespace

AnyModel gen_ground_truth(const GroundTruthSpec& spec, std::uint64_t seed) {
  check_spec(spec);
  const int K = spec.num_types;
  Rng rng(derive_seed(seed, kTagTruth));
  switch (spec.kind) {
    case ModelKind::sempp: {
      SemppParams p;
      p.mu.resize(K);
      p.alpha.resize(K, K);
      p.delta.resize(K, K);
      for (int k = 0; k < K; ++k) p.mu[k] = rng.uniform(0.0, 1.0);
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) p.alpha(j, k) = rng.uniform(0.0, 1.0);
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) p.delta(j, k) = rng.uniform(10.0, 20.0);
      return p;
    }
    case ModelKind::dsmpp: {
      DsmppParams p;
      p.mu.resize(K);
      p.alpha.resize(K, K);
      p.delta.resize(K, K);
      for (int k = 0; k < K; ++k) p.mu[k] = rng.uniform(-1.0, 1.0);
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) p.alpha(j, k) = rng.uniform(-1.0, 1.0);
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) p.delta(j, k) = rng.uniform(10.0, 20.0);
      p.s = Eigen::VectorXd::Ones(K);
      return p;
    }
    case ModelKind::nsmmpp: {
      CtlstmParams p = make_zero_ctlstm(K, spec.hidden);
      Eigen::VectorXd v = get_params(p);
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
      // the tail entries (per-type scales and the decay scale) must be
      // positive, so the raw draws pass through the same transfer the
      // trainer uses for them
      for (Eigen::Index i = v.size() - (K + 1); i < v.size(); ++i)
        v[i] = softplus(v[i]);
      set_params(p, v);
      return p;
    }
  }
  throw ValidationError("unknown model kind");
}

namespace {

Dataset make_split(const AnyModel& truth, const GroundTruthSpec& spec,
                   std::uint64_t seed, int split, int count) {
  Dataset d;
  d.num_types = spec.num_types;
  d.streams.reserve(count);
  Rng len_rng(derive_seed(seed, kTagLengths, static_cast<std::uint64_t>(split)));
  for (int i = 0; i < count; ++i) {
    SampleConfig sc;
    sc.max_events = len_rng.uniform_int(spec.len_lo, spec.len_hi);
    sc.seed = derive_seed(seed, kTagStream, static_cast<std::uint64_t>(split),
                          static_cast<std::uint64_t>(i));
    d.streams.push_back(sample_stream(truth, sc));
  }
  return d;
}

}  // namespace

SyntheticData gen_synthetic(const AnyModel& truth, const GroundTruthSpec& spec,
                            std::uint64_t seed) {
  check_spec(spec);
  if (num_types(truth) != spec.num_types) {
    throw ValidationError("ground truth and spec disagree on the number of types");
  }
  SyntheticData out;
  out.train = make_split(truth, spec, seed, 0, spec.n_train);
  out.dev = make_split(truth, spec, seed, 1, spec.n_dev);
  out.test = make_split(truth, spec, seed, 2, spec.n_test);
  return out;
}

Dataset censor(const Dataset& data, const std::vector<int>& removed_types) {
  std::vector<char> removed(data.num_types + 1, 0);
  for (const int k : removed_types) {
    if (k < 1 || k > data.num_types) {
      throw ValidationError("removed type " + std::to_string(k) +
                            " is outside 1.." + std::to_string(data.num_types));
    }
    removed[k] = 1;
  }
  std::vector<int> new_id(data.num_types + 1, 0);
  int next = 0;
  for (int k = 1; k <= data.num_types; ++k) {
    if (!removed[k]) new_id[k] = ++next;
  }

  Dataset out;
  out.num_types = next;
  out.streams.reserve(data.size());
  for (const EventStream& stream : data.streams) {
    EventStream kept;
    kept.horizon = stream.horizon;
    kept.num_types = next;
    for (const Event& e : stream.events) {
      if (e.type >= 1 && e.type <= data.num_types && !removed[e.type]) {
        kept.events.push_back({new_id[e.type], e.time});
      }
    }
    out.streams.push_back(std::move(kept));
  }
  return out;
}

namespace {

struct ProbeAcc {
  Eigen::VectorXd se_sum, true_sum, true_sq_sum;
  std::int64_t n = 0;
};

template <class TM, class FM>
void probe_stream(const TM& tm, const FM& fm, const EventStream& stream,
                  int probes, ProbeAcc& acc) {
  auto tc = make_cursor(tm);
  auto fc = make_cursor(fm);
  int next_event = 0;
  for (int j = 0; j < probes; ++j) {
    const double tau = (j + 0.5) * stream.horizon / probes;
    while (next_event < stream.size() &&
           stream.events[next_event].time < tau) {
      const Event& e = stream.events[next_event];
      advance(tm, tc, e.type, e.time);
      advance(fm, fc, e.type, e.time);
      ++next_event;
    }
    const Eigen::VectorXd lt = intensity_at(tm, tc, tau);
    const Eigen::VectorXd lf = intensity_at(fm, fc, tau);
    acc.se_sum += (lf - lt).cwiseAbs2();
    acc.true_sum += lt;
    acc.true_sq_sum += lt.cwiseAbs2();
    ++acc.n;
  }
}

}  // namespace

double intensity_mse_fraction(const AnyModel& truth, const AnyModel& fitted,
                              const Dataset& data, int probes_per_stream) {
  const int K = num_types(truth);
  if (num_types(fitted) != K || data.num_types != K) {
    throw ValidationError("truth, fitted model, and data must share num_types");
  }
  if (probes_per_stream < 1) throw ValidationError("need at least one probe");

  ProbeAcc acc;
  acc.se_sum = Eigen::VectorXd::Zero(K);
  acc.true_sum = Eigen::VectorXd::Zero(K);
  acc.true_sq_sum = Eigen::VectorXd::Zero(K);
  for (const EventStream& stream : data.streams) {
    validate_stream(stream);
    std::visit(
        [&](const auto& tm) {
          std::visit(
              [&](const auto& fm) {
                probe_stream(tm, fm, stream, probes_per_stream, acc);
              },
              fitted);
        },
        truth);
  }
  if (acc.n == 0) throw ValidationError("no probe points; dataset is empty");

  // pooled over types, centered per type: a baseline that predicts every
  // type's mean intensity at all times scores exactly 1
  double se_total = 0.0;
  double var_total = 0.0;
  for (int k = 0; k < K; ++k) {
    const double mean = acc.true_sum[k] / acc.n;
    se_total += acc.se_sum[k];
    var_total += acc.true_sq_sum[k] - acc.n * mean * mean;
  }
  return se_total / std::max(var_total, 1e-12);
}

PilotReport pilot_experiment(const PilotConfig& config) {
  PilotReport report;
  report.ll_grid.setZero();
  report.oracle_ll.setZero();
  report.intensity_mse.setZero();

  for (int gi = 0; gi < 3; ++gi) {
    GroundTruthSpec spec;
    spec.kind = report.kinds[gi];
    spec.hidden = config.gen_hidden;
    if (config.full_scale) {
      spec.n_train = 8000;
      spec.n_dev = 1000;
      spec.n_test = 1000;
    }
    const AnyModel truth =
        gen_ground_truth(spec, derive_seed(config.seed, kTagTruth,
                                           static_cast<std::uint64_t>(gi)));
    const SyntheticData data =
        gen_synthetic(truth, spec, derive_seed(config.seed, kTagData,
                                               static_cast<std::uint64_t>(gi)));
    const std::uint64_t eval_seed =
        derive_seed(config.seed, kTagEval, static_cast<std::uint64_t>(gi));

    // the oracle and every fit share the eval seed, so held-out scores are
    // paired across models
    const DatasetLoglik oracle = dataset_log_likelihood(
        truth, data.test, eval_seed, config.train.eval_mult, config.threads);
    report.oracle_ll[gi] = oracle.per_event;

    std::array<DatasetLoglik, 3> fit_ll;
    for (int fi = 0; fi < 3; ++fi) {
      AnyModel m = init_params(report.kinds[fi], spec.num_types,
                               config.fit_hidden,
                               derive_seed(config.seed, kTagInit,
                                           static_cast<std::uint64_t>(gi),
                                           static_cast<std::uint64_t>(fi)));
      TrainConfig tc = config.train;
      tc.threads = config.threads;
      tc.seed = derive_seed(config.seed, kTagTrain,
                            static_cast<std::uint64_t>(gi),
                            static_cast<std::uint64_t>(fi));
      train(m, data.train, data.dev, tc);
      fit_ll[fi] = dataset_log_likelihood(m, data.test, eval_seed,
                                          config.train.eval_mult,
                                          config.threads);
      report.ll_grid(gi, fi) = fit_ll[fi].per_event;
      report.intensity_mse(gi, fi) =
          intensity_mse_fraction(truth, m, data.test, config.probes_per_stream);
    }

    if (report.kinds[gi] == ModelKind::nsmmpp) {
      int wins = 0;
      for (int i = 0; i < data.test.size(); ++i) {
        if (fit_ll[2].reports[i].total > fit_ll[0].reports[i].total) ++wins;
      }
      report.neural_win_rate =
          static_cast<double>(wins) / static_cast<double>(data.test.size());
    }
  }
  return report;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

nlohmann::json matrix_json(const Eigen::Matrix3d& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 3; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void write_pilot_report(const PilotReport& report, const std::string& json_path,
                        const std::string& csv_path,
                        const std::string& header_comment) {
  nlohmann::json j;
  nlohmann::json kinds = nlohmann::json::array();
  for (const ModelKind k : report.kinds) kinds.push_back(to_string(k));
  j["kinds"] = kinds;
  j["ll_grid"] = matrix_json(report.ll_grid);
  j["oracle_ll"] = {report.oracle_ll[0], report.oracle_ll[1],
                    report.oracle_ll[2]};
  j["intensity_mse"] = matrix_json(report.intensity_mse);
  j["neural_win_rate"] = report.neural_win_rate;
  if (!header_comment.empty()) j["config_comment"] = header_comment;
  open_out(json_path) << j.dump(2) << "\n";

  std::ofstream csv = open_out(csv_path);
  if (!header_comment.empty()) csv << "# " << header_comment << "\n";
  csv << "generator,fitted,test_ll_per_event,oracle_ll_per_event,"
         "intensity_mse_fraction\n";
  for (int gi = 0; gi < 3; ++gi) {
    for (int fi = 0; fi < 3; ++fi) {
      csv << to_string(report.kinds[gi]) << "," << to_string(report.kinds[fi])
          << "," << report.ll_grid(gi, fi) << "," << report.oracle_ll[gi]
          << "," << report.intensity_mse(gi, fi) << "\n";
    }
  }
  csv << "# neural_win_rate=" << report.neural_win_rate << "\n";
}

MissingDataReport missing_data_experiment(const MissingDataConfig& config) {
  GroundTruthSpec spec;  // sempp, K = 5, desk-scale counts
  const AnyModel truth =
      gen_ground_truth(spec, derive_seed(config.seed, kTagTruth));
  const SyntheticData data =
      gen_synthetic(truth, spec, derive_seed(config.seed, kTagData));
  const int K = spec.num_types;

  // removal sets that delete at least one type and keep at least one
  std::vector<unsigned> masks;
  for (unsigned mask = 1; mask + 1 < (1u << K); ++mask) masks.push_back(mask);
  if (!config.all_patterns) {
    if (config.n_patterns < 1 ||
        config.n_patterns > static_cast<int>(masks.size())) {
      throw ValidationError("n_patterns must be in 1.." +
                            std::to_string(masks.size()));
    }
    Rng rng(derive_seed(config.seed, kTagPattern));
    rng.shuffle(masks);
    masks.resize(config.n_patterns);
  }

  MissingDataReport report;
  for (const unsigned mask : masks) {
    MissingPatternResult res;
    for (int b = 0; b < K; ++b) {
      if (mask & (1u << b)) res.removed.push_back(b + 1);
    }
    const Dataset ctrain = censor(data.train, res.removed);
    const Dataset cdev = censor(data.dev, res.removed);
    const Dataset ctest = censor(data.test, res.removed);
    const int kept = ctrain.num_types;
    // per-pattern seeds key on the mask, so a sampled run matches the
    // corresponding rows of a full run
    const std::uint64_t eval_seed = derive_seed(config.seed, kTagEval, mask);

    const std::array<ModelKind, 2> fits{ModelKind::sempp, ModelKind::nsmmpp};
    for (int fi = 0; fi < 2; ++fi) {
      AnyModel m = init_params(fits[fi], kept, 8,
                               derive_seed(config.seed, kTagInit, mask,
                                           static_cast<std::uint64_t>(fi)));
      TrainConfig tc = config.train;
      tc.threads = config.threads;
      tc.seed = derive_seed(config.seed, kTagTrain, mask,
                            static_cast<std::uint64_t>(fi));
      train(m, ctrain, cdev, tc);
      const double ll =
          dataset_log_likelihood(m, ctest, eval_seed, config.train.eval_mult,
                                 config.threads)
              .per_event;
      (fi == 0 ? res.sempp_ll : res.nsmmpp_ll) = ll;
    }
    report.patterns.push_back(std::move(res));
  }
  return report;
}

void write_missing_report(const MissingDataReport& report,
                          const std::string& json_path,
                          const std::string& csv_path,
                          const std::string& header_comment) {
  nlohmann::json j;
  nlohmann::json rows = nlohmann::json::array();
  for (const MissingPatternResult& res : report.patterns) {
    nlohmann::json row;
    row["removed"] = res.removed;
    row["sempp_ll_per_event"] = res.sempp_ll;
    row["nsmmpp_ll_per_event"] = res.nsmmpp_ll;
    rows.push_back(row);
  }
  j["patterns"] = rows;
  if (!header_comment.empty()) j["config_comment"] = header_comment;
  open_out(json_path) << j.dump(2) << "\n";

  std::ofstream csv = open_out(csv_path);
  if (!header_comment.empty()) csv << "# " << header_comment << "\n";
  csv << "removed_types,sempp_ll_per_event,nsmmpp_ll_per_event\n";
  for (const MissingPatternResult& res : report.patterns) {
    for (std::size_t i = 0; i < res.removed.size(); ++i) {
      csv << (i ? "|" : "") << res.removed[i];
    }
    csv << "," << res.sempp_ll << "," << res.nsmmpp_ll << "\n";
  }
}

namespace {

// strictly increasing times in (0, T); collisions have probability zero but
// would trip stream validation, so nudge them apart
std::vector<double> sorted_times(Rng& rng, int n, double horizon) {
  std::vector<double> t(n);
  for (double& x : t) x = rng.uniform(0.0, horizon);
  std::sort(t.begin(), t.end());
  for (int i = 1; i < n; ++i) {
    if (t[i] <= t[i - 1]) t[i] = std::nextafter(t[i - 1], horizon);
  }
  return t;
}

void classical_round(const DsmppParams& p, Rng& rng, double& max_dev) {
  const double T = 10.0;
  std::vector<Event> block1, block2;
  for (const double t : sorted_times(rng, rng.uniform_int(5, 15), T)) {
    block1.push_back({rng.uniform_int(1, 2), t});
  }
  for (const double t : sorted_times(rng, rng.uniform_int(5, 15), T)) {
    block2.push_back({rng.uniform_int(3, 5), t});
  }
  std::vector<Event> merged;
  std::merge(block1.begin(), block1.end(), block2.begin(), block2.end(),
             std::back_inserter(merged),
             [](const Event& a, const Event& b) { return a.time < b.time; });

  std::vector<double> probes = sorted_times(rng, 20, T);
  DecomposableCursor cm, c1, c2;
  std::size_t im = 0, i1 = 0, i2 = 0;
  for (const double tau : probes) {
    while (im < merged.size() && merged[im].time < tau) {
      advance(p, cm, merged[im].type, merged[im].time);
      ++im;
    }
    while (i1 < block1.size() && block1[i1].time < tau) {
      advance(p, c1, block1[i1].type, block1[i1].time);
      ++i1;
    }
    while (i2 < block2.size() && block2[i2].time < tau) {
      advance(p, c2, block2[i2].type, block2[i2].time);
      ++i2;
    }
    const Eigen::VectorXd lm = intensity_at(p, cm, tau);
    const Eigen::VectorXd l1 = intensity_at(p, c1, tau);
    const Eigen::VectorXd l2 = intensity_at(p, c2, tau);
    for (int k = 0; k < 2; ++k) {
      max_dev = std::max(max_dev, std::abs(lm[k] - l1[k]));
    }
    for (int k = 2; k < 5; ++k) {
      max_dev = std::max(max_dev, std::abs(lm[k] - l2[k]));
    }
  }
}

DsmppParams block_diagonal_dsmpp(Rng& rng) {
  const int K = 5;
  DsmppParams p;
  p.mu.resize(K);
  p.alpha = Eigen::MatrixXd::Zero(K, K);
  p.delta.resize(K, K);
  p.s.resize(K);
  for (int k = 0; k < K; ++k) p.mu[k] = rng.uniform(-1.0, 1.0);
  for (int j = 0; j < K; ++j) {
    for (int k = 0; k < K; ++k) {
      const bool same_block = (j < 2) == (k < 2);
      if (same_block) p.alpha(j, k) = rng.uniform(-1.0, 1.0);
      p.delta(j, k) = rng.uniform(10.0, 20.0);
    }
  }
  for (int k = 0; k < K; ++k) p.s[k] = rng.uniform(0.5, 2.0);
  return p;
}

// K = 3, D = 8.  Hidden dims 0..3 are insulated from type 3: reading type 3
// drives their forget gates to sigmoid(37) = 1 and input gates to
// sigmoid(-37) ~ 8.5e-17, and their output and decay gates ignore the input
// entirely, so those cells keep decaying toward their previous targets.
// Type 1 reads only the insulated dims, so lambda_1 cannot see type 3.
CtlstmParams rigged_ctlstm(Rng& rng) {
  const int K = 3, D = 8, insulated = 4, inserted = 3;
  CtlstmParams p = make_zero_ctlstm(K, D);
  Eigen::VectorXd v = get_params(p);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.0, 1.0);
  v.segment(v.size() - (K + 1), K).setOnes();
  v[v.size() - 1] = 1.0;
  set_params(p, v);

  p.embed.setZero();  // type m embeds as coordinate m of the input space
  for (int m = 0; m <= K; ++m) p.embed(m, m) = 1.0;

  for (int d = 0; d < insulated; ++d) {
    p.gi.W(d, inserted) = -37.0;
    p.gi.U.row(d).setZero();
    p.gi.d[d] = 0.0;
    p.gibar.W(d, inserted) = -37.0;
    p.gibar.U.row(d).setZero();
    p.gibar.d[d] = 0.0;
    p.gf.W(d, inserted) = 37.0;
    p.gf.U.row(d).setZero();
    p.gf.d[d] = 0.0;
    p.gfbar.W(d, inserted) = 37.0;
    p.gfbar.U.row(d).setZero();
    p.gfbar.d[d] = 0.0;
    p.go.W.row(d).setZero();  // output gate pinned at sigmoid(bias)
    p.go.U.row(d).setZero();
    p.gd.W.row(d).setZero();  // decay rate pinned too
    p.gd.U.row(d).setZero();
    // the cell candidate may read only the insulated block of h, which
    // stays clean by induction; anything else leaks type 3 back in
    p.gz.U.row(d).segment(insulated, D - insulated).setZero();
  }
  p.w.row(0).segment(insulated, D - insulated).setZero();
  return p;
}

double neural_round(const CtlstmParams& p, Rng& rng) {
  const double T = 10.0;
  std::vector<Event> base;
  for (const double t : sorted_times(rng, rng.uniform_int(10, 25), T)) {
    base.push_back({rng.uniform_int(1, 2), t});
  }
  std::vector<double> base_times;
  for (const Event& e : base) base_times.push_back(e.time);

  std::vector<Event> inserted;
  for (double t : sorted_times(rng, rng.uniform_int(3, 10), T)) {
    while (std::binary_search(base_times.begin(), base_times.end(), t)) {
      t = std::nextafter(t, T);
    }
    inserted.push_back({3, t});
  }
  std::vector<Event> merged;
  std::merge(base.begin(), base.end(), inserted.begin(), inserted.end(),
             std::back_inserter(merged),
             [](const Event& a, const Event& b) { return a.time < b.time; });

  const std::vector<double> probes = sorted_times(rng, 20, T);
  NeuralCursor cb = make_cursor(p), cm = make_cursor(p);
  std::size_t ib = 0, im = 0;
  double max_rel = 0.0;
  for (const double tau : probes) {
    while (ib < base.size() && base[ib].time < tau) {
      advance(p, cb, base[ib].type, base[ib].time);
      ++ib;
    }
    while (im < merged.size() && merged[im].time < tau) {
      advance(p, cm, merged[im].type, merged[im].time);
      ++im;
    }
    const double a = intensity_at(p, cb, tau)[0];
    const double b = intensity_at(p, cm, tau)[0];
    max_rel = std::max(max_rel,
                       std::abs(a - b) / std::max({std::abs(a), std::abs(b),
                                                   1e-12}));
  }
  return max_rel;
}

}  // namespace

SuperpositionReport superposition_check(std::uint64_t seed) {
  SuperpositionReport report;
  const int rounds = 100;

  Rng crng(derive_seed(seed, 0x73757063ULL));  // "supc"
  const DsmppParams blocky = block_diagonal_dsmpp(crng);
  for (int r = 0; r < rounds; ++r) {
    classical_round(blocky, crng, report.classical_max_abs_dev);
  }

  Rng rrng(derive_seed(seed, 0x72696767ULL));  // "rigg"
  const CtlstmParams rigged = rigged_ctlstm(rrng);
  for (int r = 0; r < rounds; ++r) {
    report.rigged_max_rel_dev =
        std::max(report.rigged_max_rel_dev, neural_round(rigged, rrng));
  }

  Rng urng(derive_seed(seed, 0x756e7267ULL));  // "unrg"
  CtlstmParams plain = make_zero_ctlstm(3, 8);
  {
    Eigen::VectorXd v = get_params(plain);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = urng.uniform(-1.0, 1.0);
    v.segment(v.size() - 4, 3).setOnes();
    v[v.size() - 1] = 1.0;
    set_params(plain, v);
  }
  for (int r = 0; r < rounds; ++r) {
    report.unrigged_max_rel_dev =
        std::max(report.unrigged_max_rel_dev, neural_round(plain, urng));
  }
  return report;
}

void write_superposition_report(const SuperpositionReport& report,
                                const std::string& json_path,
                                const std::string& header_comment) {
  nlohmann::json j;
  j["classical_max_abs_dev"] = report.classical_max_abs_dev;
  j["rigged_max_rel_dev"] = report.rigged_max_rel_dev;
  j["unrigged_max_rel_dev"] = report.unrigged_max_rel_dev;
  if (!header_comment.empty()) j["config_comment"] = header_comment;
  open_out(json_path) << j.dump(2) << "\n";
}

AnyModel random_test_model(ModelKind kind, int K, int D, std::uint64_t seed) {
  if (K < 1) throw ValidationError("num_types must be at least 1");
  Rng rng(derive_seed(seed, 0x7473746dULL));  // "tstm"
  switch (kind) {
    case ModelKind::sempp: {
      SemppParams p;
      p.mu.resize(K);
      p.alpha.resize(K, K);
      p.delta.resize(K, K);
      for (int k = 0; k < K; ++k) p.mu[k] = rng.uniform(0.1, 1.0);
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) p.alpha(j, k) = rng.uniform(0.0, 0.8);
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) p.delta(j, k) = rng.uniform(0.5, 2.0);
      return p;
    }
    case ModelKind::dsmpp: {
      DsmppParams p;
      p.mu.resize(K);
      p.alpha.resize(K, K);
      p.delta.resize(K, K);
      p.s.resize(K);
      for (int k = 0; k < K; ++k) p.mu[k] = rng.uniform(-1.0, 1.0);
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) p.alpha(j, k) = rng.uniform(-0.8, 0.8);
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k) p.delta(j, k) = rng.uniform(0.5, 2.0);
      for (int k = 0; k < K; ++k) p.s[k] = rng.uniform(0.5, 2.0);
      return p;
    }
    case ModelKind::nsmmpp: {
      if (D < 1) throw ValidationError("hidden size must be at least 1");
      CtlstmParams p = make_zero_ctlstm(K, D);
      Eigen::VectorXd v = get_params(p);
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-0.5, 0.5);
      for (int k = 0; k < K; ++k) {
        v[v.size() - 1 - K + k] = rng.uniform(0.5, 2.0);  // s_k
      }
      v[v.size() - 1] = rng.uniform(0.5, 2.0);  // decay scale
      set_params(p, v);
      return p;
    }
  }
  throw ValidationError("unknown model kind");
}

EventStream random_test_stream(const AnyModel& m, int max_events,
                               std::uint64_t seed) {
  SampleConfig sc;
  sc.max_events = max_events;
  sc.seed = derive_seed(seed, 0x74737473ULL);  // "tsts"
  return sample_stream(m, sc);
}

}  // namespace pointproc
