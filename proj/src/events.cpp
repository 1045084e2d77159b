#include "pointproc/events.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pointproc/rng.hpp"

namespace pointproc {

using nlohmann::json;

std::int64_t Dataset::total_events() const {
  std::int64_t n = 0;
  for (const auto& s : streams) n += s.size();
  return n;
}

void validate_stream(const EventStream& stream) {
  if (!(stream.horizon > 0.0) || !std::isfinite(stream.horizon)) {
    throw ValidationError("stream horizon must be finite and positive");
  }
  if (stream.num_types < 1) {
    throw ValidationError("stream needs at least one event type");
  }
  double prev = 0.0;
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const Event& e = stream.events[i];
    if (e.type < 1 || e.type > stream.num_types) {
      throw ValidationError("event " + std::to_string(i) + " has type " +
                            std::to_string(e.type) + " outside [1, " +
                            std::to_string(stream.num_types) + "]");
    }
    if (!std::isfinite(e.time) || e.time <= prev) {
      throw ValidationError("event " + std::to_string(i) +
                            " breaks the strictly increasing time order");
    }
    if (e.time > stream.horizon) {
      throw ValidationError("event " + std::to_string(i) +
                            " lies beyond the horizon");
    }
    prev = e.time;
  }
}

EventStream parse_stream_line(const std::string& line, int line_number) {
  const std::string where = "line " + std::to_string(line_number) + ": ";
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& err) {
    throw ValidationError(where + err.what());
  }
  if (!j.is_object() || !j.contains("T") || !j.contains("K") ||
      !j.contains("events")) {
    throw ValidationError(where + "expected an object with T, K, events");
  }
  EventStream stream;
  try {
    stream.horizon = j.at("T").get<double>();
    stream.num_types = j.at("K").get<int>();
    for (const auto& je : j.at("events")) {
      stream.events.push_back(
          {je.at("k").get<int>(), je.at("t").get<double>()});
    }
  } catch (const json::exception& err) {
    throw ValidationError(where + err.what());
  }
  try {
    validate_stream(stream);
  } catch (const ValidationError& err) {
    throw ValidationError(where + err.what());
  }
  return stream;
}

std::string format_stream_line(const EventStream& stream) {
  json events = json::array();
  for (const Event& e : stream.events) {
    events.push_back({{"k", e.type}, {"t", e.time}});
  }
  json j{{"T", stream.horizon}, {"K", stream.num_types}, {"events", events}};
  return j.dump();
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open " + path);
  }
  Dataset data;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    EventStream stream = parse_stream_line(line, line_number);
    if (data.streams.empty()) {
      data.num_types = stream.num_types;
    } else if (stream.num_types != data.num_types) {
      throw ValidationError("line " + std::to_string(line_number) +
                            ": K differs from earlier streams");
    }
    data.streams.push_back(std::move(stream));
  }
  return data;
}

void save_dataset(const std::string& path, const Dataset& data,
                  const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write " + path);
  }
  if (!header_comment.empty()) {
    out << "# " << header_comment << "\n";
  }
  for (const EventStream& stream : data.streams) {
    out << format_stream_line(stream) << "\n";
  }
  if (!out) {
    throw ValidationError("write to " + path + " failed");
  }
}

DatasetSplit split_dataset(const Dataset& data, double train_frac,
                           double dev_frac, double test_frac,
                           std::uint64_t seed) {
  if (train_frac < 0.0 || dev_frac < 0.0 || test_frac < 0.0 ||
      std::abs(train_frac + dev_frac + test_frac - 1.0) > 1e-9) {
    throw ValidationError("split fractions must be non-negative and sum to 1");
  }
  const std::size_t n = data.streams.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x73706c6974ULL));  // "split" tag
  rng.shuffle(order);

  const auto n_dev = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * dev_frac + 1e-9));
  const auto n_test = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * test_frac + 1e-9));
  const std::size_t n_train = n - n_dev - n_test;

  DatasetSplit split;
  split.train.num_types = split.dev.num_types = split.test.num_types =
      data.num_types;
  for (std::size_t i = 0; i < n; ++i) {
    Dataset& target = i < n_train            ? split.train
                      : i < n_train + n_dev  ? split.dev
                                             : split.test;
    target.streams.push_back(data.streams[order[i]]);
  }
  return split;
}

}  // namespace pointproc
