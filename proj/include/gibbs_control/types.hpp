#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace gibbs_control {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Single-stage stochastic optimal control problem.
/// Dynamics X1 = x0 + U + V1 with V1 ~ N(0, I_d), stage cost c(x) = |x|^2 / 2.
struct SocpInstance {
  int d = 0;
  Vector x0;
};

inline SocpInstance make_instance(Vector x0) {
  if (x0.size() < 1 || !x0.allFinite()) {
    throw std::invalid_argument("SocpInstance: x0 must be finite with d >= 1");
  }
  return SocpInstance{static_cast<int>(x0.size()), std::move(x0)};
}

/// Gaussian N(mean, cov) with SPD covariance.
struct GaussianSpec {
  Vector mean;
  Matrix cov;
};

}  // namespace gibbs_control
