#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <initializer_list>
#include <string>

#include "pointproc/errors.hpp"
#include "pointproc/events.hpp"

#include "helpers.hpp"

using namespace pointproc;
using testutil::make_stream;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("events") {

TEST_CASE("validate_stream accepts a well-formed stream") {
  const auto s = make_stream(10.0, 3, {{1, 0.5}, {3, 2.0}, {1, 10.0}});
  CHECK_NOTHROW(validate_stream(s));
  CHECK(s.size() == 3);
}

TEST_CASE("validate_stream rejects structural problems") {
  CHECK_THROWS_AS(validate_stream(make_stream(0.0, 1, {})), ValidationError);
  CHECK_THROWS_AS(validate_stream(make_stream(5.0, 0, {})), ValidationError);
  // type out of range
  CHECK_THROWS_AS(validate_stream(make_stream(5.0, 2, {{0, 1.0}})), ValidationError);
  CHECK_THROWS_AS(validate_stream(make_stream(5.0, 2, {{3, 1.0}})), ValidationError);
  // times must be strictly increasing and inside (0, horizon]
  CHECK_THROWS_AS(validate_stream(make_stream(5.0, 2, {{1, 2.0}, {1, 2.0}})),
                  ValidationError);
  CHECK_THROWS_AS(validate_stream(make_stream(5.0, 2, {{1, 3.0}, {1, 2.0}})),
                  ValidationError);
  CHECK_THROWS_AS(validate_stream(make_stream(5.0, 2, {{1, 0.0}})), ValidationError);
  CHECK_THROWS_AS(validate_stream(make_stream(5.0, 2, {{1, 5.5}})), ValidationError);
}

TEST_CASE("stream line round trip is bit exact") {
  // awkward doubles on purpose
  const auto s = make_stream(7.3000000000000007, 4,
                             {{4, 0.1 + 0.2}, {2, 1.0 / 3.0}, {1, 7.2999999999999998}});
  const std::string line = format_stream_line(s);
  const EventStream back = parse_stream_line(line, 1);
  CHECK(back.horizon == s.horizon);
  CHECK(back.num_types == s.num_types);
  REQUIRE(back.size() == s.size());
  for (int i = 0; i < s.size(); ++i) {
    CHECK(back.events[i].type == s.events[i].type);
    CHECK(back.events[i].time == s.events[i].time);
  }
}

TEST_CASE("parse_stream_line rejects malformed lines") {
  CHECK_THROWS_AS(parse_stream_line("not json", 3), ValidationError);
  CHECK_THROWS_AS(parse_stream_line("{\"T\": 1.0}", 1), ValidationError);
}

TEST_CASE("dataset file round trip with comments") {
  TempFile f("pointproc_events_test.jsonl");
  Dataset data;
  data.num_types = 2;
  data.streams.push_back(make_stream(4.0, 2, {{1, 1.0}, {2, 3.5}}));
  data.streams.push_back(make_stream(2.0, 2, {}));
  save_dataset(f.path, data, "written by the test");
  const Dataset back = load_dataset(f.path);
  CHECK(back.num_types == 2);
  REQUIRE(back.size() == 2);
  CHECK(back.streams[0].events[1].time == 3.5);
  CHECK(back.streams[1].size() == 0);
  CHECK(back.total_events() == 2);
}

TEST_CASE("load_dataset rejects mixed type counts") {
  TempFile f("pointproc_events_mixed.jsonl");
  {
    std::FILE* fp = std::fopen(f.path.c_str(), "w");
    std::fputs("{\"T\": 1.0, \"K\": 2, \"events\": []}\n", fp);
    std::fputs("{\"T\": 1.0, \"K\": 3, \"events\": []}\n", fp);
    std::fclose(fp);
  }
  CHECK_THROWS_AS(load_dataset(f.path), ValidationError);
}

TEST_CASE("load_dataset missing file") {
  CHECK_THROWS_AS(load_dataset("/nonexistent/evstream.jsonl"), ValidationError);
}

TEST_CASE("split_dataset partitions deterministically") {
  Dataset data;
  data.num_types = 1;
  for (int i = 0; i < 10; ++i) {
    data.streams.push_back(make_stream(1.0 + i, 1, {}));
  }
  const DatasetSplit split = split_dataset(data, 0.8, 0.1, 0.1, 99);
  CHECK(split.train.size() == 8);
  CHECK(split.dev.size() == 1);
  CHECK(split.test.size() == 1);

  // same seed, same partition; the union is the original multiset
  const DatasetSplit again = split_dataset(data, 0.8, 0.1, 0.1, 99);
  CHECK(again.train.streams[0].horizon == split.train.streams[0].horizon);
  std::vector<double> horizons;
  for (const auto& part : {split.train, split.dev, split.test})
    for (const auto& s : part.streams) horizons.push_back(s.horizon);
  std::sort(horizons.begin(), horizons.end());
  for (int i = 0; i < 10; ++i) CHECK(horizons[i] == 1.0 + i);

  CHECK_THROWS_AS(split_dataset(data, 0.5, 0.1, 0.1, 1), ValidationError);
}

}  // TEST_SUITE
