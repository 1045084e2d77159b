#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "pointproc/events.hpp"

namespace pointproc {

// Self-exciting multivariate point process with exponential kernels.
// alpha(j, k) and delta(j, k) govern how past events of type j excite the
// future intensity of type k:
//   lambda_k(t) = mu_k + sum_{h: t_h < t} alpha(k_h, k) * exp(-delta(k_h, k) * (t - t_h))
// All of mu, alpha must be >= 0 and delta > 0, so intensities stay positive.
struct SemppParams {
  Eigen::VectorXd mu;     // K
  Eigen::MatrixXd alpha;  // K x K
  Eigen::MatrixXd delta;  // K x K

  [[nodiscard]] int num_types() const { return static_cast<int>(mu.size()); }
};

// Self-modulating variant: the same excitation sum feeds a scaled softplus,
// so mu and alpha may go negative (inhibition, depressed base rates) while
// intensities stay positive.
struct DsmppParams {
  Eigen::VectorXd mu;     // K, unconstrained
  Eigen::MatrixXd alpha;  // K x K, unconstrained
  Eigen::MatrixXd delta;  // K x K, > 0
  Eigen::VectorXd s;      // K softplus scales, > 0

  [[nodiscard]] int num_types() const { return static_cast<int>(mu.size()); }
};

void validate_params(const SemppParams& p);
void validate_params(const DsmppParams& p);

[[nodiscard]] std::int64_t sempp_param_count(std::int64_t num_types);
[[nodiscard]] std::int64_t dsmpp_param_count(std::int64_t num_types);

// The shared exponential-kernel excitation sum, one entry per target type.
// Pre: t is strictly greater than every history time.
[[nodiscard]] Eigen::VectorXd excitation(const Eigen::VectorXd& mu,
                                         const Eigen::MatrixXd& alpha,
                                         const Eigen::MatrixXd& delta,
                                         std::span<const Event> history,
                                         double t);

[[nodiscard]] Eigen::VectorXd intensity(const SemppParams& p,
                                        std::span<const Event> history,
                                        double t);
[[nodiscard]] Eigen::VectorXd intensity(const DsmppParams& p,
                                        std::span<const Event> history,
                                        double t);

// Per-type constants that dominate the intensity on (t_start, infinity):
// negative excitations are dropped, positive ones frozen at t_start.
[[nodiscard]] Eigen::VectorXd upper_bound(const SemppParams& p,
                                          std::span<const Event> history,
                                          double t_start);
[[nodiscard]] Eigen::VectorXd upper_bound(const DsmppParams& p,
                                          std::span<const Event> history,
                                          double t_start);

// Flat parameter vector (mu, alpha row-major, delta row-major[, s]).
[[nodiscard]] Eigen::VectorXd get_params(const SemppParams& p);
[[nodiscard]] Eigen::VectorXd get_params(const DsmppParams& p);
void set_params(SemppParams& p, const Eigen::VectorXd& v);
void set_params(DsmppParams& p, const Eigen::VectorXd& v);

}  // namespace pointproc
