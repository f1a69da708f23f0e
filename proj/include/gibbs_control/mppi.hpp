#pragma once

#include "gibbs_control/gibbs_core.hpp"
#include "gibbs_control/rng.hpp"
#include "gibbs_control/types.hpp"

namespace gibbs_control {

/// SelfNormalized divides raw weights by their empirical mean;
/// OracleNormalized divides by the exact expectation r1 = E[raw weight].
enum class Normalization { SelfNormalized, OracleNormalized };

struct MppiConfig {
  int n_particles = 0;
  Vector ubar;  // nominal control
  Normalization normalization = Normalization::SelfNormalized;
};

struct MppiResult {
  Vector control_estimate;  // (1/N) sum eta^i X1^i - x0
  WeightedEnsemble ensemble;
  double ess = 0.0;
  double max_weight_share = 0.0;
};

/// Unnormalized importance weight exp(-|x + ubar|^2 / 2).
double mppi_weight(const Vector& x, const Vector& ubar);

/// Exact normalizer r1 = E[exp(-|X + ubar|^2 / 2)] for X ~ N(x0 + ubar, I):
/// 2^(-d/2) exp(-|x0 + 2 ubar|^2 / 4).
double exact_weight_normalizer(const SocpInstance& instance,
                               const Vector& ubar);
double log_exact_weight_normalizer(const SocpInstance& instance,
                                   const Vector& ubar);

/// One MPPI rollout: X1^i = x0 + ubar + V^i, importance-weighted mean
/// minus x0 estimates the optimal control.
MppiResult run_mppi(const SocpInstance& instance, const MppiConfig& config,
                    RngStream stream);

}  // namespace gibbs_control
