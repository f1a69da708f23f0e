#pragma once

#include "gibbs_control/rng.hpp"
#include "gibbs_control/types.hpp"

#include <utility>

namespace gibbs_control {

/// Relative symmetry check at 1e-10.
bool is_symmetric(const Matrix& m, double rel_tol = 1e-10);

/// Solve (A) X = B for SPD/PSD A: Cholesky first, eigenvalue-clamped
/// (at 1e-12) symmetric eigendecomposition as fallback. Sets *used_fallback
/// when given.
Matrix spd_solve(const Matrix& a, const Matrix& b, bool* used_fallback = nullptr);

/// n i.i.d. draws from N(mean, cov), one sample per column (d x n).
/// Rejects non-SPD covariance.
Matrix sample_gaussian(const GaussianSpec& spec, int n, RngStream stream);

/// Empirical mean and covariance with the 1/(N-1) divisor; samples are
/// columns. Requires N >= 2.
std::pair<Vector, Matrix> empirical_moments(const Matrix& samples);

/// Kalman-type gain L = Sigma (Sigma + R)^-1 via an SPD solve.
/// sigma must be PSD and noise_cov SPD.
Matrix gain_from_covariances(const Matrix& sigma, const Matrix& noise_cov,
                             bool* used_fallback = nullptr);

/// KL(N(m1,S1) || N(m2,S2)) in nats.
double gaussian_kl(const GaussianSpec& a, const GaussianSpec& b);

/// E[|X|^2]/2 for X ~ N(mean, cov): (|mean|^2 + tr cov) / 2.
double gaussian_quadratic_cost(const GaussianSpec& g);

}  // namespace gibbs_control
