#pragma once

#include <vector>

#include "pointproc/classical.hpp"
#include "pointproc/events.hpp"

namespace testutil {

// constant-rate process: K types, no excitation
inline pointproc::SemppParams homogeneous(const std::vector<double>& rates) {
  const int k = static_cast<int>(rates.size());
  pointproc::SemppParams p;
  p.mu = Eigen::Map<const Eigen::VectorXd>(rates.data(), k);
  p.alpha = Eigen::MatrixXd::Zero(k, k);
  p.delta = Eigen::MatrixXd::Ones(k, k);
  return p;
}

inline pointproc::EventStream make_stream(double horizon, int num_types,
                                          const std::vector<pointproc::Event>& events) {
  pointproc::EventStream s;
  s.horizon = horizon;
  s.num_types = num_types;
  s.events = events;
  return s;
}

}  // namespace testutil
