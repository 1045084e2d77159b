#include "pointproc/classical.hpp"

#include <cmath>

#include "pointproc/transfer.hpp"

namespace pointproc {

namespace {

// exp(-x) with the argument clamped so extreme decays flush to zero
// instead of raising FE_UNDERFLOW noise; 700 is past the double range.
inline double decay_factor(double rate, double dt) {
  const double a = rate * dt;
  return a > 700.0 ? 0.0 : std::exp(-a);
}

void check_square(const Eigen::MatrixXd& m, int K, const char* name) {
  if (m.rows() != K || m.cols() != K) {
    throw ValidationError(std::string(name) + " must be K x K");
  }
}

}  // namespace

void validate_params(const SemppParams& p) {
  const int K = p.num_types();
  if (K < 1) throw ValidationError("sempp needs at least one type");
  check_square(p.alpha, K, "alpha");
  check_square(p.delta, K, "delta");
  if (!p.mu.allFinite() || (p.mu.array() < 0.0).any()) {
    throw ValidationError("sempp mu must be finite and non-negative");
  }
  if (!p.alpha.allFinite() || (p.alpha.array() < 0.0).any()) {
    throw ValidationError("sempp alpha must be finite and non-negative");
  }
  if (!p.delta.allFinite() || (p.delta.array() <= 0.0).any()) {
    throw ValidationError("delta must be finite and positive");
  }
}

void validate_params(const DsmppParams& p) {
  const int K = p.num_types();
  if (K < 1) throw ValidationError("dsmpp needs at least one type");
  check_square(p.alpha, K, "alpha");
  check_square(p.delta, K, "delta");
  if (p.s.size() != K) throw ValidationError("s must have K entries");
  if (!p.mu.allFinite() || !p.alpha.allFinite()) {
    throw ValidationError("dsmpp mu and alpha must be finite");
  }
  if (!p.delta.allFinite() || (p.delta.array() <= 0.0).any()) {
    throw ValidationError("delta must be finite and positive");
  }
  if (!p.s.allFinite() || (p.s.array() <= 0.0).any()) {
    throw ValidationError("softplus scales must be positive");
  }
}

std::int64_t sempp_param_count(std::int64_t K) { return K + 2 * K * K; }
std::int64_t dsmpp_param_count(std::int64_t K) { return 2 * K + 2 * K * K; }

Eigen::VectorXd excitation(const Eigen::VectorXd& mu,
                           const Eigen::MatrixXd& alpha,
                           const Eigen::MatrixXd& delta,
                           std::span<const Event> history, double t) {
  Eigen::VectorXd acc = mu;
  const int K = static_cast<int>(mu.size());
  for (const Event& e : history) {
    const int j = e.type - 1;
    const double dt = t - e.time;
    for (int k = 0; k < K; ++k) {
      acc[k] += alpha(j, k) * decay_factor(delta(j, k), dt);
    }
  }
  return acc;
}

Eigen::VectorXd intensity(const SemppParams& p, std::span<const Event> history,
                          double t) {
  return excitation(p.mu, p.alpha, p.delta, history, t);
}

Eigen::VectorXd intensity(const DsmppParams& p, std::span<const Event> history,
                          double t) {
  Eigen::VectorXd acc = excitation(p.mu, p.alpha, p.delta, history, t);
  for (int k = 0; k < acc.size(); ++k) {
    acc[k] = softplus_scaled(acc[k], p.s[k]);
  }
  return acc;
}

namespace {

// Freeze every non-negative excitation term at t_start; each one only
// decays afterwards and negative terms only push the sum down, so the
// result dominates the excitation on (t_start, infinity).
Eigen::VectorXd frozen_positive_part(const Eigen::VectorXd& mu,
                                     const Eigen::MatrixXd& alpha,
                                     const Eigen::MatrixXd& delta,
                                     std::span<const Event> history,
                                     double t_start) {
  Eigen::VectorXd acc = mu;
  const int K = static_cast<int>(mu.size());
  for (const Event& e : history) {
    const int j = e.type - 1;
    const double dt = t_start - e.time;
    for (int k = 0; k < K; ++k) {
      if (alpha(j, k) > 0.0) {
        acc[k] += alpha(j, k) * decay_factor(delta(j, k), dt);
      }
    }
  }
  return acc;
}

}  // namespace

Eigen::VectorXd upper_bound(const SemppParams& p, std::span<const Event> history,
                            double t_start) {
  return frozen_positive_part(p.mu, p.alpha, p.delta, history, t_start);
}

Eigen::VectorXd upper_bound(const DsmppParams& p, std::span<const Event> history,
                            double t_start) {
  Eigen::VectorXd acc =
      frozen_positive_part(p.mu, p.alpha, p.delta, history, t_start);
  for (int k = 0; k < acc.size(); ++k) {
    acc[k] = softplus_scaled(acc[k], p.s[k]);
  }
  return acc;
}

namespace {

void pack_matrix(Eigen::VectorXd& out, std::int64_t& at,
                 const Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out[at++] = m(r, c);
}

void unpack_matrix(const Eigen::VectorXd& in, std::int64_t& at,
                   Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) m(r, c) = in[at++];
}

}  // namespace

Eigen::VectorXd get_params(const SemppParams& p) {
  const int K = p.num_types();
  Eigen::VectorXd v(sempp_param_count(K));
  std::int64_t at = 0;
  v.head(K) = p.mu;
  at = K;
  pack_matrix(v, at, p.alpha);
  pack_matrix(v, at, p.delta);
  return v;
}

Eigen::VectorXd get_params(const DsmppParams& p) {
  const int K = p.num_types();
  Eigen::VectorXd v(dsmpp_param_count(K));
  std::int64_t at = 0;
  v.head(K) = p.mu;
  at = K;
  pack_matrix(v, at, p.alpha);
  pack_matrix(v, at, p.delta);
  v.tail(K) = p.s;
  return v;
}

void set_params(SemppParams& p, const Eigen::VectorXd& v) {
  const int K = p.num_types();
  if (v.size() != sempp_param_count(K)) {
    throw ValidationError("sempp parameter vector has the wrong length");
  }
  std::int64_t at = K;
  p.mu = v.head(K);
  unpack_matrix(v, at, p.alpha);
  unpack_matrix(v, at, p.delta);
}

void set_params(DsmppParams& p, const Eigen::VectorXd& v) {
  const int K = p.num_types();
  if (v.size() != dsmpp_param_count(K)) {
    throw ValidationError("dsmpp parameter vector has the wrong length");
  }
  std::int64_t at = K;
  p.mu = v.head(K);
  unpack_matrix(v, at, p.alpha);
  unpack_matrix(v, at, p.delta);
  p.s = v.tail(K);
}

}  // namespace pointproc
