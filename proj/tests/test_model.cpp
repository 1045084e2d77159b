#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

#include "pointproc/errors.hpp"
#include "pointproc/experiments.hpp"
#include "pointproc/model.hpp"

using namespace pointproc;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("kind names round trip") {
  for (ModelKind k : {ModelKind::sempp, ModelKind::dsmpp, ModelKind::nsmmpp}) {
    CHECK(kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS((void)kind_from_string("hawkes"), ValidationError);
}

TEST_CASE("save and load are bit exact for every kind") {
  int idx = 0;
  for (ModelKind k : {ModelKind::sempp, ModelKind::dsmpp, ModelKind::nsmmpp}) {
    const AnyModel m = random_test_model(k, 3, 4, 1000 + idx);
    const std::string path = temp_path("pointproc_model_" + std::to_string(idx) + ".json");
    save_model(path, m);
    const AnyModel back = load_model(path);
    CHECK(kind_of(back) == k);
    CHECK(num_types(back) == 3);
    CHECK((get_params(back) - get_params(m)).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
    ++idx;
  }
}

TEST_CASE("load_model rejects junk") {
  const std::string path = temp_path("pointproc_model_junk.json");
  {
    std::ofstream out(path);
    out << "{\"kind\": \"sempp\", \"K\": 2, \"mu\": [0.1, 0.2]}";
  }
  CHECK_THROWS_AS((void)load_model(path), ValidationError);
  {
    std::ofstream out(path);
    out << "{\"kind\": \"meow\", \"K\": 2}";
  }
  CHECK_THROWS_AS((void)load_model(path), ValidationError);
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)load_model("/nonexistent/m.json"), ValidationError);
}

TEST_CASE("param_dim and positivity mask per kind") {
  const AnyModel se = random_test_model(ModelKind::sempp, 5, 1, 1);
  CHECK(param_dim(se) == 55);
  const auto mask_se = positivity_mask(se);
  REQUIRE(mask_se.size() == 55);
  for (char c : mask_se) CHECK(c == 1);  // everything nonnegative

  const AnyModel ds = random_test_model(ModelKind::dsmpp, 5, 1, 2);
  CHECK(param_dim(ds) == 60);
  const auto mask_ds = positivity_mask(ds);
  REQUIRE(mask_ds.size() == 60);
  // mu and alpha free, delta and s constrained
  for (int i = 0; i < 30; ++i) CHECK(mask_ds[i] == 0);
  for (int i = 30; i < 60; ++i) CHECK(mask_ds[i] == 1);

  const AnyModel ne = random_test_model(ModelKind::nsmmpp, 3, 4, 3);
  CHECK(param_dim(ne) == ctlstm_param_count(3, 4) + 1);
  const auto mask_ne = positivity_mask(ne);
  REQUIRE(mask_ne.size() == static_cast<std::size_t>(param_dim(ne)));
  // only the K scales and decay_scale are constrained
  int constrained = 0;
  for (char c : mask_ne) constrained += c;
  CHECK(constrained == 4);
  for (std::size_t i = mask_ne.size() - 4; i < mask_ne.size(); ++i)
    CHECK(mask_ne[i] == 1);
}

TEST_CASE("set_params round trip through AnyModel") {
  AnyModel m = random_test_model(ModelKind::dsmpp, 2, 1, 9);
  Eigen::VectorXd v = get_params(m);
  v[0] = -0.123;
  set_params(m, v);
  CHECK(get_params(m)[0] == -0.123);
  Eigen::VectorXd bad(v.size() + 1);
  bad.setZero();
  CHECK_THROWS_AS(set_params(m, bad), ValidationError);
}

TEST_CASE("cursor walk matches direct intensity") {
  const AnyModel m = random_test_model(ModelKind::sempp, 2, 1, 12);
  const auto& p = std::get<SemppParams>(m);
  const std::vector<Event> history{{1, 0.4}, {2, 1.0}, {1, 1.6}};
  DecomposableCursor cur = make_cursor(p);
  for (const Event& e : history) advance(p, cur, e.type, e.time);
  CHECK(anchor_of(cur) == 1.6);
  const Eigen::VectorXd via_cursor = intensity_at(p, cur, 2.5);
  const Eigen::VectorXd direct = intensity(p, history, 2.5);
  CHECK((via_cursor - direct).cwiseAbs().maxCoeff() == 0.0);
  CHECK(bound_at(p, cur).size() == 2);
}

}  // TEST_SUITE
