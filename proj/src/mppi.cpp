#include "gibbs_control/mppi.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gibbs_control {

double mppi_weight(const Vector& x, const Vector& ubar) {
  if (x.size() != ubar.size()) {
    throw std::invalid_argument("mppi_weight: dimension mismatch");
  }
  return std::exp(-0.5 * (x + ubar).squaredNorm());
}

double log_exact_weight_normalizer(const SocpInstance& instance,
                                   const Vector& ubar) {
  if (ubar.size() != instance.d) {
    throw std::invalid_argument("exact_weight_normalizer: dimension mismatch");
  }
  return -0.5 * instance.d * std::log(2.0) -
         0.25 * (instance.x0 + 2.0 * ubar).squaredNorm();
}

double exact_weight_normalizer(const SocpInstance& instance,
                               const Vector& ubar) {
  return std::exp(log_exact_weight_normalizer(instance, ubar));
}

MppiResult run_mppi(const SocpInstance& instance, const MppiConfig& config,
                    RngStream stream) {
  const int n = config.n_particles;
  const int d = instance.d;
  if (n < 1) throw std::invalid_argument("run_mppi: n_particles must be >= 1");
  if (config.ubar.size() != d || !config.ubar.allFinite()) {
    throw std::invalid_argument("run_mppi: bad nominal control");
  }

  NormalSampler sampler(stream);
  MppiResult out;
  out.ensemble.particles = sampler.matrix(d, n);
  Matrix& x1 = out.ensemble.particles;
  const Vector shift = instance.x0 + config.ubar;
  x1.colwise() += shift;

  // log raw weight: -|X1 + ubar|^2 / 2
  Vector log_w =
      -0.5 * (x1.colwise() + config.ubar).colwise().squaredNorm().transpose();
  const double max_lw = log_w.maxCoeff();
  if (!std::isfinite(max_lw)) {
    std::ostringstream msg;
    msg << "run_mppi: all raw weights numerically zero (max log weight "
        << max_lw << ", d=" << d << ")";
    throw std::runtime_error(msg.str());
  }

  Vector shifted = (log_w.array() - max_lw).exp();
  const double sum_shifted = shifted.sum();
  out.ess = sum_shifted * sum_shifted / shifted.squaredNorm();
  out.max_weight_share = shifted.maxCoeff() / sum_shifted;

  if (config.normalization == Normalization::SelfNormalized) {
    out.ensemble.weights = shifted * (static_cast<double>(n) / sum_shifted);
  } else {
    const double log_r1 = log_exact_weight_normalizer(instance, config.ubar);
    out.ensemble.weights = (log_w.array() - log_r1).exp();
  }
  out.ensemble.normalized =
      config.normalization == Normalization::SelfNormalized;
  out.ensemble.log_mean_weight = max_lw + std::log(sum_shifted / n);
  out.ensemble.ess = out.ess;
  out.ensemble.max_weight_share = out.max_weight_share;

  out.control_estimate =
      x1 * out.ensemble.weights / static_cast<double>(n) - instance.x0;
  return out;
}

}  // namespace gibbs_control
