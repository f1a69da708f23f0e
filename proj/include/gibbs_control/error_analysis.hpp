#pragma once

#include "gibbs_control/rng.hpp"
#include "gibbs_control/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gibbs_control {

enum class Algorithm { MppiSelf, MppiOracle, IpsEmpirical, IpsMeanField };

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);
bool is_mppi(Algorithm a);

/// One Monte Carlo grid cell: MC mean square error of the control estimate
/// against -x0/2, with standard error, and the matching closed-form
/// prediction (MPPI) or upper bound (IPS) where available.
struct MseReport {
  Algorithm algorithm = Algorithm::MppiSelf;
  int d = 0;
  int n_particles = 0;
  int runs = 0;
  int failures = 0;
  double mse_mc = 0.0;
  double mse_stderr = 0.0;
  std::optional<double> mse_closed_form;
  std::optional<double> bound;
  std::uint64_t seed = 0;
};

enum class FitModel { LogLinear, Affine };

struct ScalingFit {
  FitModel model = FitModel::Affine;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct McConfig {
  int n_particles = 0;
  Vector ubar;      // used by MPPI variants; may be empty for IPS
  int workers = 1;  // results are worker-count invariant
};

/// Closed-form MPPI mean square error under oracle normalization,
/// evaluated in log space. At x0 = 0, ubar = 0 this is (d/3N)(4/3)^(d/2).
/// Returns +inf when the exponential factor overflows.
double mse_mppi_closed_form(const SocpInstance& instance, const Vector& ubar,
                            int n);

/// IPS mean square error upper bound 2d/N + (5/4)|x0|^2.
double mse_ips_bound(const SocpInstance& instance, int n);

/// Runs the chosen controller `runs` times on independent streams derived
/// from (seed, algorithm, d, N, run index) and averages |estimate + x0/2|^2.
/// Degenerate runs are counted as failures and excluded from the mean.
MseReport mse_monte_carlo(Algorithm algorithm, const SocpInstance& instance,
                          const McConfig& config, int runs,
                          std::uint64_t seed);

/// Least-squares scaling fit over reports at fixed N and varying d.
/// LogLinear regresses ln(mse N / d) on d (MPPI); Affine regresses mse on d
/// (IPS).
ScalingFit fit_scaling(const std::vector<MseReport>& reports, FitModel model);

}  // namespace gibbs_control
