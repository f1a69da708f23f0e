#include "gibbs_control/gibbs_core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gibbs_control {

Vector WeightedEnsemble::weighted_mean() const {
  const double n = static_cast<double>(particles.cols());
  if (normalized) return particles * weights / n;
  const double total = weights.sum();
  if (total <= 0.0) {
    throw std::runtime_error("weighted_mean: total weight is zero");
  }
  return particles * weights / total;
}

bool weights_degenerate(const WeightedEnsemble& e) {
  return e.ess < 0.01 * static_cast<double>(e.particles.cols());
}

Vector exact_optimal_control(const SocpInstance& instance) {
  return -0.5 * instance.x0;
}

GaussianSpec exact_gibbs_measure(const SocpInstance& instance) {
  return {0.5 * instance.x0, 0.5 * Matrix::Identity(instance.d, instance.d)};
}

double kl_controlled_vs_uncontrolled(const Vector& u) {
  return 0.5 * u.squaredNorm();
}

double expected_total_cost(const SocpInstance& instance, const Vector& u) {
  return 0.5 * ((instance.x0 + u).squaredNorm() + instance.d) +
         0.5 * u.squaredNorm();
}

double free_energy(const SocpInstance& instance) {
  return 0.5 * instance.d * std::log(2.0) + 0.25 * instance.x0.squaredNorm();
}

WeightedEnsemble gibbs_empirical(const GaussianSpec& prior,
                                 const CostFunction& cost, int n,
                                 RngStream stream) {
  if (n < 1) throw std::invalid_argument("gibbs_empirical: n must be >= 1");
  WeightedEnsemble out;
  out.particles = sample_gaussian(prior, n, stream);

  Vector log_w(n);
  for (int i = 0; i < n; ++i) {
    log_w[i] = -cost(out.particles.col(i));
  }
  const double max_lw = log_w.maxCoeff();
  if (!std::isfinite(max_lw)) {
    std::ostringstream msg;
    msg << "gibbs_empirical: all weights numerically zero, max cost = "
        << -max_lw;
    throw std::runtime_error(msg.str());
  }
  // Max-subtracted exponentiation; weights would underflow for d >~ 200.
  Vector shifted = (log_w.array() - max_lw).exp();
  const double sum_shifted = shifted.sum();
  out.weights = shifted * (static_cast<double>(n) / sum_shifted);
  out.normalized = true;
  out.ess = sum_shifted * sum_shifted / shifted.squaredNorm();
  out.max_weight_share = shifted.maxCoeff() / sum_shifted;
  out.log_mean_weight = max_lw + std::log(sum_shifted / n);
  return out;
}

GaussianSpec dual_filter_posterior(const SocpInstance& instance,
                                   const Vector& z) {
  if (z.size() != instance.d || !z.allFinite()) {
    throw std::invalid_argument("dual_filter_posterior: bad observation z");
  }
  return {0.5 * (instance.x0 + z),
          0.5 * Matrix::Identity(instance.d, instance.d)};
}

Matrix sample_nonadapted_optimal(const SocpInstance& instance, int n,
                                 RngStream stream) {
  if (n < 1) {
    throw std::invalid_argument("sample_nonadapted_optimal: n must be >= 1");
  }
  // X1 = x0/2 + V1/sqrt(2) under U = -x0/2 + V1 (1/sqrt(2) - 1).
  NormalSampler sampler(stream);
  Matrix samples = sampler.matrix(instance.d, n) / std::sqrt(2.0);
  samples.colwise() += Vector(0.5 * instance.x0);
  return samples;
}

}  // namespace gibbs_control
