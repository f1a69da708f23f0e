#include "gibbs_control/gibbs_core.hpp"

#include "gibbs_control/quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace gibbs_control;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

double half_cost(const Vector& x) { return 0.5 * x.squaredNorm(); }

}  // namespace

TEST_CASE("exact_optimal_control is -x0/2") {
  CHECK((exact_optimal_control(make_instance(vec({1, 1}))) -
         vec({-0.5, -0.5}))
            .norm() < 1e-15);
  CHECK(exact_optimal_control(make_instance(Vector::Zero(3))).isZero());
  CHECK((exact_optimal_control(make_instance(vec({2, -4, 6}))) -
         vec({-1, 2, -3}))
            .norm() < 1e-15);
}

TEST_CASE("exact_gibbs_measure is N(x0/2, I/2)") {
  const GaussianSpec g = exact_gibbs_measure(make_instance(vec({1, 0})));
  CHECK((g.mean - vec({0.5, 0})).norm() < 1e-15);
  CHECK((g.cov - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);

  const GaussianSpec g5 = exact_gibbs_measure(make_instance(Vector::Zero(5)));
  CHECK(g5.mean.isZero());
  CHECK((g5.cov - 0.5 * Matrix::Identity(5, 5)).norm() < 1e-15);

  // Axis second moment: mean^2 + var = x0_i^2/4 + 1/2.
  const Vector x0 = vec({1.5, -2.0, 0.3});
  const GaussianSpec g3 = exact_gibbs_measure(make_instance(x0));
  for (int i = 0; i < 3; ++i) {
    const double second = g3.mean[i] * g3.mean[i] + g3.cov(i, i);
    CHECK(second == doctest::Approx(0.25 * x0[i] * x0[i] + 0.5).epsilon(1e-14));
  }
}

TEST_CASE("kl_controlled_vs_uncontrolled is |u|^2/2") {
  CHECK(kl_controlled_vs_uncontrolled(vec({3, 4})) == doctest::Approx(12.5));
  CHECK(kl_controlled_vs_uncontrolled(Vector::Zero(4)) == 0.0);
  CHECK(kl_controlled_vs_uncontrolled(
            exact_optimal_control(make_instance(vec({2, 0})))) ==
        doctest::Approx(0.5));
}

TEST_CASE("expected_total_cost closed form") {
  CHECK(expected_total_cost(make_instance(Vector::Zero(1)),
                            Vector::Zero(1)) == doctest::Approx(0.5));
  CHECK(expected_total_cost(make_instance(vec({2})), vec({-1})) ==
        doctest::Approx(1.5));

  // Grid search oracle: the minimizer over u sits at -x0/2.
  const SocpInstance instance = make_instance(vec({1.8}));
  double best_u = 0.0;
  double best_value = 1e300;
  for (int k = -200; k <= 200; ++k) {
    const double u = -0.9 + 0.005 * k;
    const double value = expected_total_cost(instance, vec({u}));
    if (value < best_value) {
      best_value = value;
      best_u = u;
    }
  }
  CHECK(best_u == doctest::Approx(-0.9).epsilon(1e-12));
}

TEST_CASE("free_energy matches the quadrature oracle") {
  CHECK(free_energy(make_instance(Vector::Zero(1))) ==
        doctest::Approx(0.346574).epsilon(1e-5));
  CHECK(free_energy(make_instance(vec({2, 0}))) ==
        doctest::Approx(std::log(2.0) + 1.0).epsilon(1e-12));
  // Doubling d at x0 = 0 doubles F.
  CHECK(free_energy(make_instance(Vector::Zero(8))) ==
        doctest::Approx(2.0 * free_energy(make_instance(Vector::Zero(4)))));

  for (double x0 : {0.0, 0.7, -1.9}) {
    const auto integrand = [x0](double x) {
      return std::exp(-0.5 * (x - x0) * (x - x0)) / std::sqrt(2.0 * kPi) *
             std::exp(-0.5 * x * x);
    };
    const double oracle = -std::log(integrate(integrand, -40.0, 40.0, 1e-14));
    CHECK(free_energy(make_instance(vec({x0}))) ==
          doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("gibbs_empirical") {
  SUBCASE("zero cost gives uniform weights and the plain mean") {
    GaussianSpec prior{vec({2.0, -1.0}), Matrix::Identity(2, 2)};
    const auto ensemble = gibbs_empirical(
        prior, [](const Vector&) { return 0.0; }, 5000, {11, 0});
    CHECK((ensemble.weights.array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK((ensemble.weighted_mean() - ensemble.particles.rowwise().mean())
              .norm() < 1e-12);
    CHECK(ensemble.ess == doctest::Approx(5000.0));
  }
  SUBCASE("quadratic cost recovers the Gibbs mean x0/2") {
    const double x0 = 1.4;
    GaussianSpec prior{vec({x0}), Matrix::Identity(1, 1)};
    const auto ensemble = gibbs_empirical(prior, half_cost, 1'000'000, {11, 1});
    CHECK(std::abs(ensemble.weighted_mean()[0] - 0.5 * x0) < 0.002);
  }
  SUBCASE("free-energy estimate from the ensemble") {
    const SocpInstance instance = make_instance(vec({0.8, -0.3}));
    GaussianSpec prior{instance.x0, Matrix::Identity(2, 2)};
    const auto ensemble = gibbs_empirical(prior, half_cost, 500'000, {11, 2});
    CHECK(std::abs(-ensemble.log_mean_weight - free_energy(instance)) < 0.005);
  }
  SUBCASE("infinite cost everywhere is rejected") {
    GaussianSpec prior{Vector::Zero(1), Matrix::Identity(1, 1)};
    CHECK_THROWS_AS(
        gibbs_empirical(
            prior,
            [](const Vector&) {
              return std::numeric_limits<double>::infinity();
            },
            100, {11, 3}),
        std::runtime_error);
  }
  SUBCASE("weighted mean converges with N") {
    std::vector<int> ns{1000, 10000, 100000};
    std::vector<double> medians;
    GaussianSpec prior{vec({1.0}), Matrix::Identity(1, 1)};
    for (size_t k = 0; k < ns.size(); ++k) {
      std::vector<double> errors;
      for (int rep = 0; rep < 20; ++rep) {
        const auto ensemble = gibbs_empirical(
            prior, half_cost, ns[k],
            {123, 100 * k + static_cast<std::uint64_t>(rep)});
        errors.push_back(std::abs(ensemble.weighted_mean()[0] - 0.5));
      }
      std::sort(errors.begin(), errors.end());
      medians.push_back(errors[errors.size() / 2]);
    }
    CHECK(medians[1] < medians[0]);
    CHECK(medians[2] < medians[1]);
  }
}

TEST_CASE("dual_filter_posterior") {
  const SocpInstance instance = make_instance(vec({0.9, -0.4}));
  SUBCASE("z = 0 recovers the Gibbs measure") {
    const GaussianSpec post = dual_filter_posterior(instance, Vector::Zero(2));
    const GaussianSpec gibbs = exact_gibbs_measure(instance);
    CHECK((post.mean - gibbs.mean).norm() < 1e-15);
    CHECK((post.cov - gibbs.cov).norm() < 1e-15);
  }
  SUBCASE("z = x0 centers the posterior at x0") {
    const GaussianSpec post = dual_filter_posterior(instance, instance.x0);
    CHECK((post.mean - instance.x0).norm() < 1e-15);
    CHECK((post.cov - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);
  }
  SUBCASE("posterior mean matches 1-d quadrature") {
    const double x0 = 0.7, z = -0.4;
    const auto joint = [&](double y) {
      return std::exp(-0.5 * (y - x0) * (y - x0)) *
             std::exp(-0.5 * (z - y) * (z - y));
    };
    // Window centered on the mass so the coarse Simpson pass sees it.
    const double c = 0.5 * (x0 + z);
    const double z0 = integrate(joint, c - 12.0, c + 12.0, 1e-14);
    const double z1 = integrate([&](double y) { return y * joint(y); },
                                c - 12.0, c + 12.0, 1e-14);
    const GaussianSpec post =
        dual_filter_posterior(make_instance(vec({x0})), vec({z}));
    CHECK(post.mean[0] == doctest::Approx(z1 / z0).epsilon(1e-10));
  }
  SUBCASE("symmetric case") {
    const GaussianSpec post =
        dual_filter_posterior(make_instance(Vector::Zero(3)), Vector::Zero(3));
    CHECK(post.mean.isZero());
    CHECK((post.cov - 0.5 * Matrix::Identity(3, 3)).norm() < 1e-15);
  }
}

TEST_CASE("sample_nonadapted_optimal has law N(x0/2, I/2)") {
  const SocpInstance instance = make_instance(vec({1.0, -2.0}));
  const Matrix samples = sample_nonadapted_optimal(instance, 100'000, {17, 0});
  const Vector mean = samples.rowwise().mean();
  CHECK((mean - 0.5 * instance.x0).cwiseAbs().maxCoeff() < 0.02);
  Matrix centered = samples.colwise() - mean;
  Matrix cov = centered * centered.transpose() / (samples.cols() - 1.0);
  CHECK((cov - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.02);
  // Variance strictly below the adapted-control variance 1.
  CHECK(cov(0, 0) < 0.6);
}

TEST_CASE("gibbs variational optimality over random candidates") {
  NormalSampler rng({31, 0});
  for (int d : {1, 2}) {
    const SocpInstance instance = make_instance(rng.vector(d));
    const GaussianSpec prior{instance.x0, Matrix::Identity(d, d)};
    const double f = free_energy(instance);
    CounterRng unit_rng({31, 100 + static_cast<std::uint64_t>(d)});
    for (int trial = 0; trial < 50; ++trial) {
      const Vector m = instance.x0 + rng.vector(d);
      const double sigma2 = 0.1 + 1.9 * unit_rng.unit();
      const GaussianSpec candidate{m, sigma2 * Matrix::Identity(d, d)};
      CHECK(gaussian_kl(candidate, prior) +
                gaussian_quadratic_cost(candidate) >=
            f - 1e-9);
    }
    const GaussianSpec gibbs = exact_gibbs_measure(instance);
    CHECK(std::abs(gaussian_kl(gibbs, prior) +
                   gaussian_quadratic_cost(gibbs) - f) < 1e-9);
  }
}
