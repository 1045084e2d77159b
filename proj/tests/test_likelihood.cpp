#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <vector>

#include "pointproc/ctlstm.hpp"
#include "pointproc/errors.hpp"
#include "pointproc/experiments.hpp"
#include "pointproc/likelihood.hpp"
#include "pointproc/model.hpp"

#include "helpers.hpp"

using namespace pointproc;
using testutil::homogeneous;
using testutil::make_stream;

namespace {

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

TEST_SUITE("likelihood") {

TEST_CASE("homogeneous closed form is reproduced exactly") {
  const AnyModel m = homogeneous({2.0});
  const auto s = make_stream(3.0, 1, {{1, 1.0}, {1, 2.0}, {1, 3.0}});
  // 3 log 2 - 2 * 3, and the MC integral is exact for a constant rate
  const double expected = -3.9205584583201643;
  for (int n : {1, 7, 64}) {
    for (bool strat : {true, false}) {
      McConfig mc;
      mc.n_samples = n;
      mc.seed = 5 + n;
      mc.stratified = strat;
      const LogLikReport rep = log_likelihood(m, s, mc);
      CHECK(rep.total == doctest::Approx(expected).epsilon(1e-13));
      CHECK(rep.event_term == doctest::Approx(3 * kLn2).epsilon(1e-14));
      CHECK(rep.integral_term == doctest::Approx(6.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("total splits into type and time terms") {
  const AnyModel m = homogeneous({0.5, 1.5});
  const auto s = make_stream(4.0, 2, {{2, 0.5}, {1, 1.0}, {2, 3.0}});
  McConfig mc;
  mc.n_samples = 16;
  mc.seed = 3;
  const LogLikReport rep = log_likelihood(m, s, mc);
  CHECK(rep.total ==
        doctest::Approx(rep.type_term + rep.time_term).epsilon(1e-12));
  REQUIRE(rep.per_event.size() == 3);
  CHECK(rep.per_event[0] == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  // single-type streams have no type information
  const AnyModel m1 = homogeneous({2.0});
  const auto s1 = make_stream(3.0, 1, {{1, 1.0}});
  const LogLikReport rep1 = log_likelihood(m1, s1, mc);
  CHECK(rep1.type_term == 0.0);
}

TEST_CASE("zero-parameter neural model has a closed form") {
  const AnyModel m = make_zero_ctlstm(2, 3);
  const auto s = make_stream(2.0, 2, {{1, 0.5}, {2, 1.5}});
  McConfig mc;
  mc.n_samples = 9;
  mc.seed = 17;
  const LogLikReport rep = log_likelihood(m, s, mc);
  // every intensity is log 2: ell = 2 log log 2 - T * 2 log 2
  const double expected = 2.0 * std::log(kLn2) - 2.0 * 2.0 * kLn2;
  CHECK(rep.total == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("empty stream integrates the base rate only") {
  const AnyModel m = homogeneous({0.75});
  const auto s = make_stream(8.0, 1, {});
  McConfig mc;
  mc.n_samples = 4;
  mc.seed = 1;
  const LogLikReport rep = log_likelihood(m, s, mc);
  CHECK(rep.total == doctest::Approx(-6.0).epsilon(1e-14));
  CHECK(rep.event_term == 0.0);
}

TEST_CASE("gradient of the homogeneous model by hand") {
  const AnyModel m = homogeneous({2.0});
  const auto s = make_stream(3.0, 1, {{1, 1.0}, {1, 2.0}, {1, 3.0}});
  McConfig mc;
  mc.n_samples = 32;
  mc.seed = 8;
  const Eigen::VectorXd g = loglik_gradient(m, s, mc);
  // d ell / d mu = sum 1/lambda - T = 3/2 - 3
  CHECK(g[0] == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("mc integral is unbiased against quadrature") {
  const AnyModel m = random_test_model(ModelKind::nsmmpp, 2, 4, 77);
  const EventStream s = random_test_stream(m, 12, 78);
  const double quad = quadrature_total_intensity(m, s, 200000);

  const int reps = 60;
  double sum = 0.0, sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    McConfig mc;
    mc.n_samples = 64;
    mc.seed = 1000 + r;
    mc.stratified = true;
    const double est = mc_integral(m, s, mc).first;
    sum += est;
    sq += est * est;
  }
  const double mean = sum / reps;
  const double var = (sq - reps * mean * mean) / (reps - 1);
  const double se = std::sqrt(var / reps);
  CHECK(std::abs(mean - quad) <= 4.0 * se + 1e-9);

  // stratification should shrink the spread on a fluctuating intensity
  double sq_raw = 0.0, sum_raw = 0.0;
  for (int r = 0; r < reps; ++r) {
    McConfig mc;
    mc.n_samples = 64;
    mc.seed = 5000 + r;
    mc.stratified = false;
    const double est = mc_integral(m, s, mc).first;
    sum_raw += est;
    sq_raw += est * est;
  }
  const double mean_raw = sum_raw / reps;
  const double var_raw = (sq_raw - reps * mean_raw * mean_raw) / (reps - 1);
  CHECK(var < var_raw);
}

TEST_CASE("finite differences agree for every kind") {
  struct Case {
    ModelKind kind;
    std::uint64_t seed;
  };
  for (const Case c : {Case{ModelKind::sempp, 31}, Case{ModelKind::dsmpp, 32},
                       Case{ModelKind::nsmmpp, 33}}) {
    const AnyModel m = random_test_model(c.kind, 2, 3, c.seed);
    const EventStream s = random_test_stream(m, 8, c.seed + 100);
    McConfig mc;
    mc.n_samples = 4;
    mc.seed = 9;
    const double err = finite_diff_check(m, s, 1e-5, mc);
    CHECK(err <= 1e-4);
  }
}

TEST_CASE("eos marker truncates the integral") {
  const AnyModel m = homogeneous({1.0, 1.0});
  const auto s = make_stream(5.0, 2, {{1, 1.0}, {2, 2.0}});
  McConfig mc;
  mc.n_samples = 3;
  mc.seed = 2;
  mc.eos_type = 2;
  const LogLikReport rep = log_likelihood(m, s, mc);
  CHECK(rep.total == doctest::Approx(-4.0).epsilon(1e-13));
  McConfig plain = mc;
  plain.eos_type.reset();
  CHECK(log_likelihood(m, s, plain).total == doctest::Approx(-10.0).epsilon(1e-13));
  // events after the marker are rejected
  const auto bad = make_stream(5.0, 2, {{2, 2.0}, {1, 3.0}});
  CHECK_THROWS_AS((void)log_likelihood(m, bad, mc), ValidationError);
}

TEST_CASE("vanishing intensity at an event raises NumericalError") {
  SemppParams p;
  p.mu = Eigen::VectorXd::Zero(1);
  p.alpha = Eigen::MatrixXd::Zero(1, 1);
  p.delta = Eigen::MatrixXd::Ones(1, 1);
  const AnyModel m = p;
  const auto s = make_stream(2.0, 1, {{1, 1.0}});
  McConfig mc;
  mc.n_samples = 2;
  mc.seed = 4;
  CHECK_THROWS_AS((void)log_likelihood(m, s, mc), NumericalError);
}

TEST_CASE("mc sample times are sorted and inside the horizon") {
  for (bool strat : {true, false}) {
    McConfig mc;
    mc.n_samples = 40;
    mc.seed = 21;
    mc.stratified = strat;
    const std::vector<double> ts = mc_sample_times(7.0, mc);
    REQUIRE(ts.size() == 40);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(ts[i] > 0.0);
      CHECK(ts[i] <= 7.0);
      if (i) CHECK(ts[i] >= ts[i - 1]);
    }
  }
  // stratified draws hit every panel
  McConfig mc;
  mc.n_samples = 10;
  mc.seed = 30;
  mc.stratified = true;
  const std::vector<double> ts = mc_sample_times(10.0, mc);
  for (int i = 0; i < 10; ++i) {
    CHECK(ts[i] >= double(i));
    CHECK(ts[i] <= double(i + 1));
  }
}

TEST_CASE("dataset log likelihood aggregates and is thread invariant") {
  const AnyModel m = random_test_model(ModelKind::sempp, 3, 1, 55);
  Dataset data;
  data.num_types = 3;
  for (int i = 0; i < 6; ++i) {
    data.streams.push_back(random_test_stream(m, 10, 200 + i));
  }
  const DatasetLoglik a = dataset_log_likelihood(m, data, 99, 10, 1);
  const DatasetLoglik b = dataset_log_likelihood(m, data, 99, 10, 4);
  CHECK(a.total == b.total);
  CHECK(a.n_events == data.total_events());
  double manual = 0.0;
  REQUIRE(a.reports.size() == 6);
  for (const auto& r : a.reports) manual += r.total;
  CHECK(a.total == doctest::Approx(manual).epsilon(1e-12));
  CHECK(a.per_event == doctest::Approx(a.total / a.n_events).epsilon(1e-12));
}

}  // TEST_SUITE
