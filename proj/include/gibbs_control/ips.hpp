#pragma once

#include "gibbs_control/rng.hpp"
#include "gibbs_control/types.hpp"

namespace gibbs_control {

/// Empirical uses the ensemble sample covariance in the gain; MeanField
/// uses the exact covariances (gain = I/2 for this model).
enum class GainMode { Empirical, MeanField };

struct IpsConfig {
  int n_particles = 0;
  GainMode gain_mode = GainMode::Empirical;
};

struct IpsResult {
  Vector control_estimate;  // mean(ensemble_after) - x0
  Matrix ensemble_before;   // Y0, one particle per column
  Matrix ensemble_after;    // Y1^i = Y0^i - L (Y0^i + W^i)
  Matrix gain;
  bool gain_fallback = false;  // Cholesky failed, clamped eigensolve used
};

/// One equal-weight interacting-particle update toward the Gibbs measure.
IpsResult run_ips(const SocpInstance& instance, const IpsConfig& config,
                  RngStream stream);

/// Pushes n independent samples through the exact-gain update and returns
/// their empirical moments; target N(x0/2, I/2).
GaussianSpec mean_field_push(const SocpInstance& instance, int n,
                             RngStream stream);

}  // namespace gibbs_control
