#pragma once

#include "gibbs_control/linalg_stats.hpp"
#include "gibbs_control/rng.hpp"
#include "gibbs_control/types.hpp"

#include <functional>

namespace gibbs_control {

/// Nonnegative cost c(x); must be finite on finite inputs.
using CostFunction = std::function<double(const Vector&)>;

/// N particles (columns) with nonnegative weights averaging 1 once
/// normalized. log_mean_weight is log((1/N) sum of unnormalized weights),
/// i.e. minus the free-energy estimate.
struct WeightedEnsemble {
  Matrix particles;
  Vector weights;
  bool normalized = false;
  double ess = 0.0;              // (sum w)^2 / sum w^2, on raw weights
  double max_weight_share = 0.0; // largest normalized weight / N
  double log_mean_weight = 0.0;

  Vector weighted_mean() const;
};

/// Flags weight degeneracy; threshold ess < 0.01 N.
bool weights_degenerate(const WeightedEnsemble& e);

/// Optimal deterministic control -x0/2.
Vector exact_optimal_control(const SocpInstance& instance);

/// Gibbs measure of the controlled state: N(x0/2, I/2).
GaussianSpec exact_gibbs_measure(const SocpInstance& instance);

/// KL between the controlled and uncontrolled state laws: |u|^2 / 2.
double kl_controlled_vs_uncontrolled(const Vector& u);

/// Closed-form objective value E[|X1|^2 + |u|^2]/2 for X1 ~ N(x0+u, I):
/// (|x0+u|^2 + d)/2 + |u|^2/2.
double expected_total_cost(const SocpInstance& instance, const Vector& u);

/// Minimum of KL(mu||gamma) + mu(c) over mu: (d/2) ln 2 + |x0|^2 / 4.
double free_energy(const SocpInstance& instance);

/// Importance-sampling approximation of the Gibbs measure S(prior, cost):
/// particles i.i.d. from the prior, self-normalized weights
/// exp(-c(X^i)) / ((1/N) sum_j exp(-c(X^j))), computed in log space.
WeightedEnsemble gibbs_empirical(const GaussianSpec& prior,
                                 const CostFunction& cost, int n,
                                 RngStream stream);

/// Posterior of the dual filter Z = Y0 + W, Y0 ~ N(x0, I), W ~ N(0, I):
/// N((x0 + z)/2, I/2). At z = 0 this equals exact_gibbs_measure.
GaussianSpec dual_filter_posterior(const SocpInstance& instance,
                                   const Vector& z);

/// n draws of X1 under the non-adapted control U* = -x0/2 + V1 (1/sqrt(2)-1);
/// their law is N(x0/2, I/2). Columns are samples.
Matrix sample_nonadapted_optimal(const SocpInstance& instance, int n,
                                 RngStream stream);

}  // namespace gibbs_control
