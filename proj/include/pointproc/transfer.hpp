#pragma once

#include <cmath>

namespace pointproc {

// Numerically stable logistic function.
inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow for large |x|.
inline double softplus(double x) {
  if (x > 0.0) {
    return x + std::log1p(std::exp(-x));
  }
  return std::log1p(std::exp(x));
}

// Scaled softplus f(x; s) = s * log(1 + exp(x / s)), s > 0.  Approaches the
// identity for large positive x and 0 for large negative x; f(0) = s*log 2.
inline double softplus_scaled(double x, double s) { return s * softplus(x / s); }

// d/dx of softplus_scaled
inline double softplus_scaled_dx(double x, double s) { return sigmoid(x / s); }

// d/ds of softplus_scaled: log(1 + e^u) - u * sigmoid(u) with u = x/s
inline double softplus_scaled_ds(double x, double s) {
  const double u = x / s;
  return softplus(u) - u * sigmoid(u);
}

// Inverse of the unit-scale softplus: x such that log(1 + e^x) = y, y > 0.
inline double softplus_inverse(double y) {
  if (y > 30.0) {
    return y + std::log1p(-std::exp(-y));
  }
  return std::log(std::expm1(y));
}

// tanh-like squash used by the cell-to-hidden readout, 2*sigmoid(2x) - 1.
// Equal to tanh(x) analytically; written this way so the derivative
// 1 - u^2 matches the forward value exactly.
inline double squash(double x) { return 2.0 * sigmoid(2.0 * x) - 1.0; }

}  // namespace pointproc
