#include "gibbs_control/linalg_stats.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gibbs_control {

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Matrix spd_solve(const Matrix& a, const Matrix& b, bool* used_fallback) {
  if (used_fallback) *used_fallback = false;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    return llt.solve(b);
  }
  // Empirical covariances can be rank-deficient (N <= d); clamp spectrum.
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spd_solve: eigendecomposition failed");
  }
  if (used_fallback) *used_fallback = true;
  Vector inv_ev = es.eigenvalues().cwiseMax(1e-12).cwiseInverse();
  return es.eigenvectors() * inv_ev.asDiagonal() *
         es.eigenvectors().transpose() * b;
}

Matrix sample_gaussian(const GaussianSpec& spec, int n, RngStream stream) {
  const int d = static_cast<int>(spec.mean.size());
  if (n < 1) throw std::invalid_argument("sample_gaussian: n must be >= 1");
  if (spec.cov.rows() != d || spec.cov.cols() != d) {
    throw std::invalid_argument("sample_gaussian: dimension mismatch");
  }
  if (!is_symmetric(spec.cov)) {
    throw std::invalid_argument("sample_gaussian: covariance not symmetric");
  }
  Eigen::LLT<Matrix> llt(spec.cov);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sample_gaussian: covariance not SPD (Cholesky failed, d=" << d
        << ")";
    throw std::invalid_argument(msg.str());
  }
  NormalSampler sampler(stream);
  Matrix z = sampler.matrix(d, n);
  Matrix samples = llt.matrixL() * z;
  samples.colwise() += spec.mean;
  return samples;
}

std::pair<Vector, Matrix> empirical_moments(const Matrix& samples) {
  const Eigen::Index n = samples.cols();
  if (n < 2) {
    throw std::invalid_argument(
        "empirical_moments: need N >= 2 samples (covariance undefined)");
  }
  Vector mean = samples.rowwise().mean();
  Matrix centered = samples.colwise() - mean;
  Matrix cov = Matrix::Zero(samples.rows(), samples.rows());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered,
                                                 1.0 / double(n - 1));
  cov.triangularView<Eigen::StrictlyUpper>() =
      cov.transpose().triangularView<Eigen::StrictlyUpper>();
  return {std::move(mean), std::move(cov)};
}

Matrix gain_from_covariances(const Matrix& sigma, const Matrix& noise_cov,
                             bool* used_fallback) {
  if (sigma.rows() != noise_cov.rows() || sigma.cols() != noise_cov.cols()) {
    throw std::invalid_argument("gain_from_covariances: dimension mismatch");
  }
  Matrix sum = sigma + noise_cov;
  if (!is_symmetric(sum)) {
    throw std::invalid_argument("gain_from_covariances: inputs not symmetric");
  }
  // L = Sigma (Sigma + R)^-1; solve on the transpose, never form an inverse.
  Matrix solved;
  try {
    solved = spd_solve(sum, sigma, used_fallback);
  } catch (const std::runtime_error&) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
    std::ostringstream msg;
    msg << "gain_from_covariances: singular (Sigma + R), condition number ";
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo > 0) {
      msg << hi / lo;
    } else {
      msg << "infinite (min eigenvalue " << lo << ")";
    }
    throw std::runtime_error(msg.str());
  }
  return solved.transpose();
}

double gaussian_kl(const GaussianSpec& a, const GaussianSpec& b) {
  const int d = static_cast<int>(a.mean.size());
  Eigen::LLT<Matrix> llt_b(b.cov);
  if (llt_b.info() != Eigen::Success) {
    throw std::invalid_argument("gaussian_kl: second covariance not SPD");
  }
  Eigen::LLT<Matrix> llt_a(a.cov);
  if (llt_a.info() != Eigen::Success) {
    throw std::invalid_argument("gaussian_kl: first covariance not SPD");
  }
  const double logdet_a =
      2.0 * Matrix(llt_a.matrixL()).diagonal().array().log().sum();
  const double logdet_b =
      2.0 * Matrix(llt_b.matrixL()).diagonal().array().log().sum();
  const Vector dm = b.mean - a.mean;
  const double trace_term = llt_b.solve(a.cov).trace();
  const double maha = dm.dot(llt_b.solve(dm));
  return 0.5 * (trace_term + maha - d + logdet_b - logdet_a);
}

double gaussian_quadratic_cost(const GaussianSpec& g) {
  return 0.5 * (g.mean.squaredNorm() + g.cov.trace());
}

}  // namespace gibbs_control
