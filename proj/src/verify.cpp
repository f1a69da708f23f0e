#include "gibbs_control/verify.hpp"

#include "gibbs_control/gibbs_core.hpp"
#include "gibbs_control/linalg_stats.hpp"
#include "gibbs_control/mppi.hpp"
#include "gibbs_control/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace gibbs_control {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

PropertyResult make_result(const std::string& name, double worst,
                           double tolerance) {
  PropertyResult result;
  result.name = name;
  result.passed = worst <= tolerance;
  std::ostringstream detail;
  detail << "worst=" << worst << " tol=" << tolerance;
  result.detail = detail.str();
  return result;
}

PropertyResult check_gibbs_equals_dual_posterior() {
  NormalSampler rng({2024, 1});
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 5;
    const SocpInstance instance = make_instance(2.0 * rng.vector(d));
    const GaussianSpec gibbs = exact_gibbs_measure(instance);
    const GaussianSpec posterior =
        dual_filter_posterior(instance, Vector::Zero(d));
    worst = std::max(worst,
                     (gibbs.mean - posterior.mean).cwiseAbs().maxCoeff());
    worst =
        std::max(worst, (gibbs.cov - posterior.cov).cwiseAbs().maxCoeff());
  }
  return make_result("gibbs-measure-equals-dual-posterior-at-z0", worst, 1e-9);
}

PropertyResult check_gibbs_mean_identity() {
  NormalSampler rng({2024, 2});
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 7;
    const SocpInstance instance = make_instance(3.0 * rng.vector(d));
    const Vector via_mean =
        exact_gibbs_measure(instance).mean - instance.x0;
    worst = std::max(
        worst,
        (via_mean - exact_optimal_control(instance)).cwiseAbs().maxCoeff());
  }
  return make_result("gibbs-mean-minus-x0-is-optimal-control", worst, 1e-9);
}

PropertyResult check_kl_identity() {
  NormalSampler rng({2024, 3});
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 6;
    const SocpInstance instance = make_instance(rng.vector(d));
    const Vector u = 2.0 * rng.vector(d);
    const double lhs = expected_total_cost(instance, u);
    const double rhs = kl_controlled_vs_uncontrolled(u) +
                       0.5 * ((instance.x0 + u).squaredNorm() + d);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return make_result("total-cost-equals-kl-plus-state-cost", worst, 1e-9);
}

PropertyResult check_gain_duality(double gain_scale) {
  NormalSampler rng({2024, 4});
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + trial % 5;
    const SocpInstance instance = make_instance(rng.vector(d));
    const Matrix identity = Matrix::Identity(d, d);
    const Matrix gain =
        gain_scale * gain_from_covariances(identity, identity);
    // Push the exact-gain update through in closed form and compare with
    // the dual posterior: Y1 = (I - L) Y0 - L W.
    const Matrix a = identity - gain;
    const Vector mean = a * instance.x0;
    const Matrix cov = a * a.transpose() + gain * gain.transpose();
    const GaussianSpec posterior =
        dual_filter_posterior(instance, Vector::Zero(d));
    worst =
        std::max(worst, (mean - posterior.mean).cwiseAbs().maxCoeff());
    worst = std::max(worst, (cov - posterior.cov).cwiseAbs().maxCoeff());
  }
  return make_result("mean-field-gain-pushforward-matches-posterior", worst,
                     1e-9);
}

PropertyResult check_matrix_lemmas() {
  NormalSampler rng({2024, 5});
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 20;
    Matrix a = rng.matrix(d, d);
    const double scale = std::exp(2.0 * rng());
    Matrix s = scale * a * a.transpose();
    const Vector x = rng.vector(d);
    const Matrix identity = Matrix::Identity(d, d);
    const Matrix contraction = spd_solve(identity + s, identity);
    const Vector cx = contraction * x;
    const Vector scx = s * cx;
    const double xx = x.squaredNorm();
    worst = std::max(worst, cx.squaredNorm() - xx);
    worst = std::max(worst, scx.squaredNorm() - xx);
    worst = std::max(worst, (0.5 * x - scx).squaredNorm() - 1.25 * xx);
  }
  return make_result("psd-contraction-lemmas", worst, 1e-12);
}

PropertyResult check_free_energy_optimality() {
  NormalSampler rng({2024, 6});
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const SocpInstance instance = make_instance(rng.vector(d));
    const GaussianSpec prior{instance.x0, Matrix::Identity(d, d)};
    const double f = free_energy(instance);
    for (int trial = 0; trial < 50; ++trial) {
      const Vector m = instance.x0 + rng.vector(d);
      const double sigma2 = 0.1 + 1.9 * CounterRng({2024, 600 + d * 100 +
                                                    static_cast<std::uint64_t>(
                                                        trial)}).unit();
      const GaussianSpec candidate{m, sigma2 * Matrix::Identity(d, d)};
      const double objective =
          gaussian_kl(candidate, prior) + gaussian_quadratic_cost(candidate);
      worst = std::max(worst, f - objective);  // objective must be >= F
    }
    const GaussianSpec gibbs = exact_gibbs_measure(instance);
    const double at_gibbs =
        gaussian_kl(gibbs, prior) + gaussian_quadratic_cost(gibbs);
    worst = std::max(worst, std::abs(at_gibbs - f));
  }
  return make_result("free-energy-is-variational-minimum", worst, 1e-9);
}

PropertyResult check_free_energy_quadrature() {
  double worst = 0.0;
  for (double x0 : {0.0, 1.3}) {
    const auto integrand = [x0](double x) {
      return std::exp(-0.5 * (x - x0) * (x - x0)) / std::sqrt(2.0 * kPi) *
             std::exp(-0.5 * x * x);
    };
    const double quad = -std::log(integrate(integrand, -40.0, 40.0, 1e-14));
    const SocpInstance instance =
        make_instance(Vector::Constant(1, x0));
    worst = std::max(worst, std::abs(quad - free_energy(instance)));
  }
  // Additivity over independent axes.
  const SocpInstance d4 = make_instance(Vector::Zero(4));
  const SocpInstance d2 = make_instance(Vector::Zero(2));
  worst = std::max(worst,
                   std::abs(free_energy(d4) - 2.0 * free_energy(d2)));
  return make_result("free-energy-matches-quadrature", worst, 1e-8);
}

PropertyResult check_normalizer_quadrature() {
  double worst = 0.0;
  const auto integrand = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi) *
           std::exp(-0.5 * x * x);
  };
  const double quad_1d = integrate(integrand, -40.0, 40.0, 1e-14);
  const SocpInstance d1 = make_instance(Vector::Zero(1));
  worst = std::max(
      worst, std::abs(quad_1d - exact_weight_normalizer(d1, Vector::Zero(1))));
  const SocpInstance d10 = make_instance(Vector::Zero(10));
  worst = std::max(worst, std::abs(std::pow(quad_1d, 10) -
                                   exact_weight_normalizer(
                                       d10, Vector::Zero(10))));
  return make_result("weight-normalizer-matches-quadrature", worst, 1e-10);
}

}  // namespace

std::vector<PropertyResult> run_verification(const VerifyOptions& options) {
  std::vector<PropertyResult> results;
  results.push_back(check_gibbs_equals_dual_posterior());
  results.push_back(check_gibbs_mean_identity());
  results.push_back(check_kl_identity());
  results.push_back(check_gain_duality(options.gain_scale));
  results.push_back(check_matrix_lemmas());
  results.push_back(check_free_energy_optimality());
  results.push_back(check_free_energy_quadrature());
  results.push_back(check_normalizer_quadrature());
  return results;
}

}  // namespace gibbs_control
