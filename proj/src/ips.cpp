#include "gibbs_control/ips.hpp"

#include "gibbs_control/linalg_stats.hpp"

#include <stdexcept>

namespace gibbs_control {

IpsResult run_ips(const SocpInstance& instance, const IpsConfig& config,
                  RngStream stream) {
  const int n = config.n_particles;
  const int d = instance.d;
  if (n < 1) throw std::invalid_argument("run_ips: n_particles must be >= 1");
  if (config.gain_mode == GainMode::Empirical && n < 2) {
    throw std::invalid_argument(
        "run_ips: empirical gain needs N >= 2 for the sample covariance");
  }

  NormalSampler sampler(stream);
  IpsResult out;
  out.ensemble_before = sampler.matrix(d, n);
  out.ensemble_before.colwise() += instance.x0;
  Matrix noise = sampler.matrix(d, n);

  if (config.gain_mode == GainMode::MeanField) {
    out.gain = 0.5 * Matrix::Identity(d, d);
  } else {
    auto [mean, cov] = empirical_moments(out.ensemble_before);
    out.gain = gain_from_covariances(cov, Matrix::Identity(d, d),
                                     &out.gain_fallback);
  }

  // Y1^i = Y0^i - L (Y0^i + W^i); innovation for the dual observation z = 0.
  out.ensemble_after =
      out.ensemble_before - out.gain * (out.ensemble_before + noise);
  out.control_estimate = out.ensemble_after.rowwise().mean() - instance.x0;
  return out;
}

GaussianSpec mean_field_push(const SocpInstance& instance, int n,
                             RngStream stream) {
  if (n < 2) throw std::invalid_argument("mean_field_push: n must be >= 2");
  IpsConfig config{n, GainMode::MeanField};
  IpsResult result = run_ips(instance, config, stream);
  auto [mean, cov] = empirical_moments(result.ensemble_after);
  return {std::move(mean), std::move(cov)};
}

}  // namespace gibbs_control
