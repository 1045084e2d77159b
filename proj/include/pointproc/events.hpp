#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pointproc/errors.hpp"

namespace pointproc {

// One typed event.  Types are 1-based; type 0 is reserved for the
// beginning-of-stream marker consumed internally by the neural model.
struct Event {
  int type = 0;
  double time = 0.0;
};

// A finite observation window (0, horizon] holding strictly increasing
// event times.  A stream may be empty while still carrying its horizon.
struct EventStream {
  double horizon = 0.0;
  int num_types = 0;
  std::vector<Event> events;

  [[nodiscard]] int size() const { return static_cast<int>(events.size()); }
};

struct Dataset {
  int num_types = 0;
  std::vector<EventStream> streams;

  [[nodiscard]] int size() const { return static_cast<int>(streams.size()); }
  [[nodiscard]] std::int64_t total_events() const;
};

struct DatasetSplit {
  Dataset train, dev, test;
};

// Throws ValidationError unless horizon > 0, num_types >= 1, types are in
// [1, num_types], and times are strictly increasing within (0, horizon].
void validate_stream(const EventStream& stream);

// JSON-lines I/O.  One stream per line:
//   {"T": 10.0, "K": 3, "events": [{"k": 1, "t": 0.5}, ...]}
// Blank lines and lines starting with '#' are skipped on load.
Dataset load_dataset(const std::string& path);
void save_dataset(const std::string& path, const Dataset& data,
                  const std::string& header_comment = "");

EventStream parse_stream_line(const std::string& line, int line_number);
std::string format_stream_line(const EventStream& stream);

// Deterministic shuffle under `seed`, then contiguous assignment.  Sizes
// are floor-rounded with the remainder going to train.  Fractions must be
// non-negative and sum to 1 within 1e-9.
DatasetSplit split_dataset(const Dataset& data, double train_frac,
                           double dev_frac, double test_frac,
                           std::uint64_t seed);

}  // namespace pointproc
