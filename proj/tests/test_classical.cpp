#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <vector>

#include "pointproc/classical.hpp"
#include "pointproc/errors.hpp"
#include "pointproc/transfer.hpp"

using namespace pointproc;

namespace {

SemppParams two_type_sempp() {
  SemppParams p;
  p.mu = Eigen::Vector2d(0.1, 0.2);
  p.alpha = Eigen::Matrix2d::Zero();
  p.alpha(0, 1) = 0.3;  // type 1 excites type 2
  p.alpha(1, 0) = 0.5;
  p.delta = Eigen::Matrix2d::Constant(2.0);
  return p;
}

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("parameter counts") {
  CHECK(sempp_param_count(5) == 55);
  CHECK(sempp_param_count(5000) == 50005000);
  CHECK(dsmpp_param_count(5) == 60);
  CHECK(dsmpp_param_count(5000) == 50010000);
  CHECK(sempp_param_count(1) == 3);
  CHECK(dsmpp_param_count(1) == 4);
}

TEST_CASE("single decayed excitation by hand") {
  SemppParams p;
  p.mu = Eigen::VectorXd::Constant(1, 0.5);
  p.alpha = Eigen::MatrixXd::Constant(1, 1, 1.0);
  p.delta = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const std::vector<Event> history{{1, 1.0}};
  // 0.5 + exp(-1)
  CHECK(intensity(p, history, 2.0)[0] ==
        doctest::Approx(0.8678794411714423).epsilon(1e-15));
  // immediately after the event the full jump is present
  CHECK(intensity(p, history, 1.0 + 1e-12)[0] ==
        doctest::Approx(1.5).epsilon(1e-9));
  // far away, the rate falls back to mu
  CHECK(intensity(p, history, 60.0)[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cross-type excitation by hand") {
  const SemppParams p = two_type_sempp();
  const std::vector<Event> history{{1, 1.0}};
  const Eigen::VectorXd lam = intensity(p, history, 1.5);
  // type 1 only feels its base rate, type 2 gets 0.3 exp(-2 * 0.5)
  CHECK(lam[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(lam[1] ==
        doctest::Approx(0.2 + 0.3 * std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("superposition over history is additive") {
  const SemppParams p = two_type_sempp();
  const std::vector<Event> h1{{1, 0.5}};
  const std::vector<Event> h2{{2, 1.25}};
  const std::vector<Event> both{{1, 0.5}, {2, 1.25}};
  const double t = 2.0;
  const Eigen::VectorXd sum =
      intensity(p, h1, t) + intensity(p, h2, t) - p.mu;
  const Eigen::VectorXd direct = intensity(p, both, t);
  CHECK((sum - direct).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dsmpp applies the transfer to the same excitation") {
  DsmppParams p;
  p.mu = Eigen::Vector2d(-0.4, 0.3);
  p.alpha = Eigen::Matrix2d::Constant(-0.6);  // inhibition is allowed
  p.delta = Eigen::Matrix2d::Constant(1.5);
  p.s = Eigen::Vector2d(1.0, 2.0);
  const std::vector<Event> history{{2, 0.5}};
  const double t = 1.5;
  const Eigen::VectorXd x =
      excitation(p.mu, p.alpha, p.delta, history, t);
  CHECK(x[0] == doctest::Approx(-0.4 - 0.6 * std::exp(-1.5)).epsilon(1e-14));
  const Eigen::VectorXd lam = intensity(p, history, t);
  CHECK(lam[0] == doctest::Approx(softplus_scaled(x[0], 1.0)).epsilon(1e-14));
  CHECK(lam[1] == doctest::Approx(softplus_scaled(x[1], 2.0)).epsilon(1e-14));
  CHECK(lam.minCoeff() > 0.0);
}

TEST_CASE("sempp upper bound freezes positive excitation") {
  const SemppParams p = two_type_sempp();
  const std::vector<Event> history{{1, 0.25}, {2, 0.75}};
  const double start = 0.75;
  const Eigen::VectorXd bound = upper_bound(p, history, start);
  // frozen at start: alpha(1,k) exp(-2 (start - 0.25)) + alpha(2,k) exp(0)
  CHECK(bound[0] == doctest::Approx(0.1 + 0.5).epsilon(1e-14));
  CHECK(bound[1] == doctest::Approx(0.2 + 0.3 * std::exp(-1.0)).epsilon(1e-14));
  // and the bound dominates the intensity beyond start
  for (double t : {0.7500001, 1.0, 1.5, 3.0, 10.0}) {
    const Eigen::VectorXd lam = intensity(p, history, t);
    for (int k = 0; k < 2; ++k) CHECK(lam[k] <= bound[k] + 1e-12);
  }
}

TEST_CASE("dsmpp upper bound dominates with inhibition present") {
  DsmppParams p;
  p.mu = Eigen::Vector2d(0.8, -0.2);
  p.alpha.resize(2, 2);
  p.alpha << 0.7, -0.9, -0.3, 0.4;
  p.delta = Eigen::Matrix2d::Constant(1.0);
  p.s = Eigen::Vector2d(0.7, 1.3);
  const std::vector<Event> history{{1, 0.2}, {2, 0.6}};
  const Eigen::VectorXd bound = upper_bound(p, history, 0.6);
  for (double t : {0.6000001, 0.8, 1.7, 4.0}) {
    const Eigen::VectorXd lam = intensity(p, history, t);
    for (int k = 0; k < 2; ++k) CHECK(lam[k] <= bound[k] + 1e-12);
  }
}

TEST_CASE("empty history gives the base rate") {
  const SemppParams p = two_type_sempp();
  const std::vector<Event> empty;
  CHECK(intensity(p, empty, 0.5)[0] == 0.1);
  CHECK(intensity(p, empty, 0.5)[1] == 0.2);
}

TEST_CASE("parameter vector round trip") {
  SemppParams p = two_type_sempp();
  const Eigen::VectorXd v = get_params(p);
  REQUIRE(v.size() == sempp_param_count(2));
  SemppParams q;
  q.mu.resize(2);
  q.alpha.resize(2, 2);
  q.delta.resize(2, 2);
  set_params(q, v);
  CHECK((get_params(q) - v).cwiseAbs().maxCoeff() == 0.0);
  CHECK(q.alpha(0, 1) == 0.3);

  DsmppParams d;
  d.mu = Eigen::Vector2d(-0.4, 0.3);
  d.alpha = Eigen::Matrix2d::Constant(-0.6);
  d.delta = Eigen::Matrix2d::Constant(1.5);
  d.s = Eigen::Vector2d(1.0, 2.0);
  const Eigen::VectorXd dv = get_params(d);
  REQUIRE(dv.size() == dsmpp_param_count(2));
  DsmppParams d2 = d;
  set_params(d2, dv);
  CHECK((get_params(d2) - dv).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("validate_params enforces signs and shapes") {
  SemppParams p = two_type_sempp();
  CHECK_NOTHROW(validate_params(p));
  p.mu[0] = -0.1;
  CHECK_THROWS_AS(validate_params(p), ValidationError);
  p = two_type_sempp();
  p.alpha(0, 0) = -0.5;
  CHECK_THROWS_AS(validate_params(p), ValidationError);
  p = two_type_sempp();
  p.delta(1, 1) = 0.0;
  CHECK_THROWS_AS(validate_params(p), ValidationError);
  p = two_type_sempp();
  p.alpha.resize(1, 2);
  CHECK_THROWS_AS(validate_params(p), ValidationError);

  DsmppParams d;
  d.mu = Eigen::Vector2d(-0.4, 0.3);  // negative mu is fine here
  d.alpha = Eigen::Matrix2d::Constant(-0.6);
  d.delta = Eigen::Matrix2d::Constant(1.5);
  d.s = Eigen::Vector2d(1.0, 2.0);
  CHECK_NOTHROW(validate_params(d));
  d.s[1] = 0.0;
  CHECK_THROWS_AS(validate_params(d), ValidationError);
  d.s[1] = 2.0;
  d.delta(0, 0) = -1.0;
  CHECK_THROWS_AS(validate_params(d), ValidationError);
}

}  // TEST_SUITE
