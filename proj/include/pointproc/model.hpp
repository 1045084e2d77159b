#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pointproc/classical.hpp"
#include "pointproc/ctlstm.hpp"

namespace pointproc {

enum class ModelKind { sempp, dsmpp, nsmmpp };

[[nodiscard]] std::string to_string(ModelKind kind);
// Throws ValidationError on an unknown kind string.
[[nodiscard]] ModelKind kind_from_string(const std::string& name);

using AnyModel = std::variant<SemppParams, DsmppParams, CtlstmParams>;

[[nodiscard]] ModelKind kind_of(const AnyModel& m);
[[nodiscard]] int num_types(const AnyModel& m);
[[nodiscard]] std::int64_t param_dim(const AnyModel& m);
[[nodiscard]] Eigen::VectorXd get_params(const AnyModel& m);
void set_params(AnyModel& m, const Eigen::VectorXd& v);
void validate_params(const AnyModel& m);

// Entries that must stay positive when the trainer reparameterizes the
// flat vector (1 = constrained through a softplus, 0 = free).
[[nodiscard]] std::vector<char> positivity_mask(const AnyModel& m);

// JSON model files carry {"kind": ..., dims, parameter blocks}.
[[nodiscard]] AnyModel load_model(const std::string& path);
void save_model(const std::string& path, const AnyModel& m);

// ---------------------------------------------------------------------------
// Sequential cursors: a cursor tracks the conditioning history of one
// stream so intensities, bounds, and updates can be queried incrementally.

struct DecomposableCursor {
  std::vector<Event> history;
  double anchor = 0.0;
};

struct NeuralCursor {
  CellState cell;
};

template <class Model>
struct CursorFor;
template <>
struct CursorFor<SemppParams> { using type = DecomposableCursor; };
template <>
struct CursorFor<DsmppParams> { using type = DecomposableCursor; };
template <>
struct CursorFor<CtlstmParams> { using type = NeuralCursor; };
template <class Model>
using cursor_t = typename CursorFor<Model>::type;

[[nodiscard]] inline DecomposableCursor make_cursor(const SemppParams&) { return {}; }
[[nodiscard]] inline DecomposableCursor make_cursor(const DsmppParams&) { return {}; }
[[nodiscard]] inline NeuralCursor make_cursor(const CtlstmParams& p) {
  return NeuralCursor{init_state(p)};
}

[[nodiscard]] inline double anchor_of(const DecomposableCursor& c) { return c.anchor; }
[[nodiscard]] inline double anchor_of(const NeuralCursor& c) { return c.cell.t_anchor; }

inline void advance(const SemppParams&, DecomposableCursor& c, int k, double t) {
  c.history.push_back({k, t});
  c.anchor = t;
}
inline void advance(const DsmppParams&, DecomposableCursor& c, int k, double t) {
  c.history.push_back({k, t});
  c.anchor = t;
}
inline void advance(const CtlstmParams& p, NeuralCursor& c, int k, double t) {
  c.cell = update_state(p, c.cell, k, t);
}

[[nodiscard]] inline Eigen::VectorXd intensity_at(const SemppParams& p,
                                                  const DecomposableCursor& c,
                                                  double t) {
  return intensity(p, c.history, t);
}
[[nodiscard]] inline Eigen::VectorXd intensity_at(const DsmppParams& p,
                                                  const DecomposableCursor& c,
                                                  double t) {
  return intensity(p, c.history, t);
}
[[nodiscard]] inline Eigen::VectorXd intensity_at(const CtlstmParams& p,
                                                  const NeuralCursor& c,
                                                  double t) {
  return intensity(p, c.cell, t);
}

[[nodiscard]] inline Eigen::VectorXd bound_at(const SemppParams& p,
                                              const DecomposableCursor& c) {
  return upper_bound(p, c.history, c.anchor);
}
[[nodiscard]] inline Eigen::VectorXd bound_at(const DsmppParams& p,
                                              const DecomposableCursor& c) {
  return upper_bound(p, c.history, c.anchor);
}
[[nodiscard]] inline Eigen::VectorXd bound_at(const CtlstmParams& p,
                                              const NeuralCursor& c) {
  return upper_bound(p, c.cell);
}

}  // namespace pointproc
