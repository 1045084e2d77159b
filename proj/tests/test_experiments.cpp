#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <set>
#include <vector>

#include "pointproc/errors.hpp"
#include "pointproc/experiments.hpp"
#include "pointproc/transfer.hpp"

#include "helpers.hpp"

using namespace pointproc;
using testutil::make_stream;

TEST_SUITE("experiments") {

TEST_CASE("censor drops types and renumbers the survivors") {
  Dataset data;
  data.num_types = 5;
  data.streams.push_back(make_stream(
      10.0, 5, {{1, 0.5}, {2, 1.0}, {3, 2.0}, {4, 3.0}, {5, 4.0}, {3, 5.0}}));

  const Dataset out = censor(data, {2, 5});
  CHECK(out.num_types == 3);
  REQUIRE(out.streams.size() == 1);
  const auto& ev = out.streams[0].events;
  REQUIRE(ev.size() == 4);
  // survivors keep their order; 1 -> 1, 3 -> 2, 4 -> 3
  CHECK(ev[0].time == 0.5);
  CHECK(ev[0].type == 1);
  CHECK(ev[1].time == 2.0);
  CHECK(ev[1].type == 2);
  CHECK(ev[2].time == 3.0);
  CHECK(ev[2].type == 3);
  CHECK(ev[3].time == 5.0);
  CHECK(ev[3].type == 2);
  CHECK(out.streams[0].horizon == 10.0);
  CHECK(out.streams[0].num_types == 3);
}

TEST_CASE("censoring nothing is the identity") {
  Dataset data;
  data.num_types = 2;
  data.streams.push_back(make_stream(4.0, 2, {{2, 1.0}, {1, 2.0}}));
  const Dataset out = censor(data, {});
  CHECK(out.num_types == 2);
  REQUIRE(out.streams.size() == 1);
  CHECK(out.streams[0].events.size() == 2);
  CHECK(out.streams[0].events[0].type == 2);
  CHECK(out.streams[0].horizon == 4.0);
}

TEST_CASE("censoring every type leaves empty streams with horizons") {
  Dataset data;
  data.num_types = 2;
  data.streams.push_back(make_stream(6.0, 2, {{1, 1.0}, {2, 2.0}}));
  const Dataset out = censor(data, {1, 2});
  CHECK(out.num_types == 0);
  REQUIRE(out.streams.size() == 1);
  CHECK(out.streams[0].events.empty());
  CHECK(out.streams[0].horizon == 6.0);
}

TEST_CASE("censor rejects bad type lists") {
  Dataset data;
  data.num_types = 2;
  data.streams.push_back(make_stream(1.0, 2, {{1, 0.5}}));
  CHECK_THROWS_AS((void)censor(data, {3}), ValidationError);
  CHECK_THROWS_AS((void)censor(data, {0}), ValidationError);
  // listing a type twice is harmless set semantics
  const Dataset out = censor(data, {1, 1});
  CHECK(out.num_types == 1);
  CHECK(out.streams[0].events.empty());
}

TEST_CASE("sempp ground truth lands in the documented ranges") {
  GroundTruthSpec spec;
  spec.kind = ModelKind::sempp;
  const AnyModel m = gen_ground_truth(spec, 9001);
  const auto& p = std::get<SemppParams>(m);
  REQUIRE(p.mu.size() == 5);
  CHECK(p.mu.minCoeff() >= 0.0);
  CHECK(p.mu.maxCoeff() <= 1.0);
  CHECK(p.alpha.minCoeff() >= 0.0);
  CHECK(p.alpha.maxCoeff() <= 1.0);
  CHECK(p.delta.minCoeff() >= 10.0);
  CHECK(p.delta.maxCoeff() <= 20.0);

  const AnyModel again = gen_ground_truth(spec, 9001);
  CHECK((get_params(m) - get_params(again)).cwiseAbs().maxCoeff() == 0.0);
  const AnyModel other = gen_ground_truth(spec, 9002);
  CHECK((get_params(m) - get_params(other)).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("dsmpp ground truth allows inhibition and pins unit scales") {
  GroundTruthSpec spec;
  spec.kind = ModelKind::dsmpp;
  const AnyModel m = gen_ground_truth(spec, 31337);
  const auto& p = std::get<DsmppParams>(m);
  CHECK(p.mu.minCoeff() >= -1.0);
  CHECK(p.mu.maxCoeff() <= 1.0);
  CHECK(p.alpha.minCoeff() >= -1.0);
  CHECK(p.alpha.maxCoeff() <= 1.0);
  CHECK(p.delta.minCoeff() >= 10.0);
  CHECK(p.delta.maxCoeff() <= 20.0);
  CHECK(p.s.minCoeff() == 1.0);
  CHECK(p.s.maxCoeff() == 1.0);
  // a generator that never inhibits would defeat the point of this kind
  CHECK(p.alpha.minCoeff() < 0.0);
}

TEST_CASE("neural ground truth has positive transfer scales") {
  GroundTruthSpec spec;
  spec.kind = ModelKind::nsmmpp;
  spec.hidden = 4;
  const AnyModel m = gen_ground_truth(spec, 2718);
  const auto& p = std::get<CtlstmParams>(m);
  const Eigen::VectorXd v = get_params(p);
  REQUIRE(v.size() == ctlstm_param_count(5, 4) + 1);
  const double lo = softplus(-1.0);
  const double hi = softplus(1.0);
  for (Eigen::Index i = v.size() - 6; i < v.size(); ++i) {
    CHECK(v[i] >= lo);
    CHECK(v[i] <= hi);
  }
  for (Eigen::Index i = 0; i < v.size() - 6; ++i) {
    CHECK(v[i] >= -1.0);
    CHECK(v[i] <= 1.0);
  }
  validate_params(m);
}

TEST_CASE("synthetic streams respect the length band") {
  GroundTruthSpec spec;
  spec.kind = ModelKind::sempp;
  spec.len_lo = 5;
  spec.len_hi = 12;
  spec.n_train = 6;
  spec.n_dev = 2;
  spec.n_test = 2;
  const AnyModel truth = gen_ground_truth(spec, 1);
  const SyntheticData data = gen_synthetic(truth, spec, 2);

  CHECK(data.train.size() == 6);
  CHECK(data.dev.size() == 2);
  CHECK(data.test.size() == 2);
  for (const Dataset* d : {&data.train, &data.dev, &data.test}) {
    CHECK(d->num_types == 5);
    for (const auto& s : d->streams) {
      CHECK(s.size() >= 5);
      CHECK(s.size() <= 12);
      REQUIRE(!s.events.empty());
      CHECK(s.horizon == s.events.back().time);
      validate_stream(s);
    }
  }

  const SyntheticData again = gen_synthetic(truth, spec, 2);
  REQUIRE(again.train.size() == 6);
  CHECK(again.train.streams[0].events.back().time ==
        data.train.streams[0].events.back().time);
  const SyntheticData other = gen_synthetic(truth, spec, 3);
  CHECK(other.train.streams[0].events.back().time !=
        data.train.streams[0].events.back().time);
}

TEST_CASE("random test instances are valid models") {
  for (auto kind : {ModelKind::sempp, ModelKind::dsmpp, ModelKind::nsmmpp}) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const AnyModel m = random_test_model(kind, 3, 4, seed);
      validate_params(m);
      CHECK(num_types(m) == 3);
      const EventStream s = random_test_stream(m, 10, seed);
      CHECK(s.size() <= 10);
      validate_stream(s);
    }
  }
}

TEST_CASE("intensity mse fraction is zero against itself") {
  GroundTruthSpec spec;
  spec.kind = ModelKind::sempp;
  spec.len_lo = 5;
  spec.len_hi = 10;
  spec.n_train = 1;
  spec.n_dev = 1;
  spec.n_test = 4;
  const AnyModel truth = gen_ground_truth(spec, 55);
  const SyntheticData data = gen_synthetic(truth, spec, 56);

  CHECK(intensity_mse_fraction(truth, truth, data.test) == 0.0);

  AnyModel bumped = truth;
  Eigen::VectorXd v = get_params(bumped);
  v[0] += 0.5;
  set_params(bumped, v);
  const double frac = intensity_mse_fraction(truth, bumped, data.test);
  CHECK(frac > 0.0);
  CHECK(std::isfinite(frac));

  CHECK_THROWS_AS(
      (void)intensity_mse_fraction(truth, bumped, data.test, 0),
      ValidationError);
}

TEST_CASE("a mean-rate baseline scores about one") {
  // the normalization is calibrated so a constant fit at each type's mean
  // rate has fraction 1; a homogeneous fit at the empirical rates gets close
  GroundTruthSpec spec;
  spec.kind = ModelKind::sempp;
  spec.len_lo = 30;
  spec.len_hi = 60;
  spec.n_train = 1;
  spec.n_dev = 1;
  spec.n_test = 10;
  const AnyModel truth = gen_ground_truth(spec, 77);
  const SyntheticData data = gen_synthetic(truth, spec, 78);

  // constant-intensity model at arbitrary rates: the centered part of its
  // error is exactly the true variance only when the constants match the
  // probe means, so just check the fraction is >= 1 up to probe noise for
  // a deliberately wrong constant fit and finite for a plausible one
  SemppParams flat;
  flat.mu = Eigen::VectorXd::Constant(5, 0.9);
  flat.alpha = Eigen::MatrixXd::Zero(5, 5);
  flat.delta = Eigen::MatrixXd::Ones(5, 5);
  const double frac = intensity_mse_fraction(truth, flat, data.test);
  CHECK(frac > 0.0);
  CHECK(std::isfinite(frac));
}

TEST_CASE("superposition invariants hold") {
  const SuperpositionReport report = superposition_check(4242);
  CHECK(report.classical_max_abs_dev == 0.0);
  CHECK(report.rigged_max_rel_dev <= 1e-6);
  CHECK(report.unrigged_max_rel_dev >= 1e-3);
}

}  // TEST_SUITE
