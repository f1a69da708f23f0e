#include "gibbs_control/error_analysis.hpp"

#include "gibbs_control/gibbs_core.hpp"
#include "gibbs_control/ips.hpp"
#include "gibbs_control/mppi.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace gibbs_control {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::MppiSelf: return "mppi-self";
    case Algorithm::MppiOracle: return "mppi-oracle";
    case Algorithm::IpsEmpirical: return "ips";
    case Algorithm::IpsMeanField: return "ips-meanfield";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  if (name == "mppi-self") return Algorithm::MppiSelf;
  if (name == "mppi-oracle") return Algorithm::MppiOracle;
  if (name == "ips" || name == "ips-empirical") return Algorithm::IpsEmpirical;
  if (name == "ips-meanfield") return Algorithm::IpsMeanField;
  return std::nullopt;
}

bool is_mppi(Algorithm a) {
  return a == Algorithm::MppiSelf || a == Algorithm::MppiOracle;
}

double mse_mppi_closed_form(const SocpInstance& instance, const Vector& ubar,
                            int n) {
  const double d = instance.d;
  const Vector& x0 = instance.x0;
  const double log_main =
      -std::log(static_cast<double>(n)) + 0.5 * d * std::log(4.0 / 3.0) +
      std::log((ubar - x0).squaredNorm() / 9.0 + d / 3.0) +
      (4.0 * ubar.squaredNorm() + 7.0 * x0.squaredNorm() +
       (x0 + ubar).squaredNorm()) /
          6.0;
  if (log_main > 709.0) return std::numeric_limits<double>::infinity();
  return std::exp(log_main) - x0.squaredNorm() / (4.0 * n);
}

double mse_ips_bound(const SocpInstance& instance, int n) {
  return 2.0 * instance.d / static_cast<double>(n) +
         1.25 * instance.x0.squaredNorm();
}

namespace {

std::uint64_t cell_stream_id(Algorithm algorithm, int d, int n, int run) {
  std::uint64_t h = hash_combine(0x6a09e667f3bcc908ULL,
                                 static_cast<std::uint64_t>(algorithm));
  h = hash_combine(h, static_cast<std::uint64_t>(d));
  h = hash_combine(h, static_cast<std::uint64_t>(n));
  return hash_combine(h, static_cast<std::uint64_t>(run));
}

Vector run_once(Algorithm algorithm, const SocpInstance& instance,
                const McConfig& config, RngStream stream) {
  switch (algorithm) {
    case Algorithm::MppiSelf:
    case Algorithm::MppiOracle: {
      MppiConfig mc;
      mc.n_particles = config.n_particles;
      mc.ubar = config.ubar.size() ? config.ubar : Vector::Zero(instance.d);
      mc.normalization = algorithm == Algorithm::MppiSelf
                             ? Normalization::SelfNormalized
                             : Normalization::OracleNormalized;
      return run_mppi(instance, mc, stream).control_estimate;
    }
    case Algorithm::IpsEmpirical:
    case Algorithm::IpsMeanField: {
      IpsConfig ic;
      ic.n_particles = config.n_particles;
      ic.gain_mode = algorithm == Algorithm::IpsEmpirical
                         ? GainMode::Empirical
                         : GainMode::MeanField;
      return run_ips(instance, ic, stream).control_estimate;
    }
  }
  throw std::logic_error("run_once: unknown algorithm");
}

}  // namespace

MseReport mse_monte_carlo(Algorithm algorithm, const SocpInstance& instance,
                          const McConfig& config, int runs,
                          std::uint64_t seed) {
  if (runs < 2) throw std::invalid_argument("mse_monte_carlo: runs must be >= 2");
  const Vector u_star = exact_optimal_control(instance);

  std::vector<double> squared_error(runs,
                                    std::numeric_limits<double>::quiet_NaN());
  std::atomic<int> next{0};
  const int workers = std::max(1, config.workers);

  auto work = [&] {
    for (;;) {
      const int run = next.fetch_add(1);
      if (run >= runs) break;
      const RngStream stream{
          seed, cell_stream_id(algorithm, instance.d, config.n_particles, run)};
      try {
        Vector estimate = run_once(algorithm, instance, config, stream);
        squared_error[run] = (estimate - u_star).squaredNorm();
      } catch (const std::runtime_error&) {
        // degenerate run; stays NaN and is counted as a failure
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Reduce in run order so the result is independent of the worker count.
  MseReport report;
  report.algorithm = algorithm;
  report.d = instance.d;
  report.n_particles = config.n_particles;
  report.runs = runs;
  report.seed = seed;
  double sum = 0.0;
  double sum_sq = 0.0;
  int ok = 0;
  for (int run = 0; run < runs; ++run) {
    const double se = squared_error[run];
    if (std::isnan(se)) {
      ++report.failures;
      continue;
    }
    sum += se;
    sum_sq += se * se;
    ++ok;
  }
  if (ok < 2) {
    throw std::runtime_error("mse_monte_carlo: fewer than 2 successful runs");
  }
  report.mse_mc = sum / ok;
  const double var =
      std::max(0.0, (sum_sq - sum * sum / ok) / (ok - 1));
  report.mse_stderr = std::sqrt(var / ok);
  if (is_mppi(algorithm)) {
    const Vector ubar =
        config.ubar.size() ? config.ubar : Vector::Zero(instance.d);
    report.mse_closed_form =
        mse_mppi_closed_form(instance, ubar, config.n_particles);
  } else {
    report.bound = mse_ips_bound(instance, config.n_particles);
  }
  return report;
}

ScalingFit fit_scaling(const std::vector<MseReport>& reports, FitModel model) {
  if (reports.size() < 3) {
    throw std::invalid_argument("fit_scaling: need at least 3 reports");
  }
  for (const auto& r : reports) {
    if (r.algorithm != reports.front().algorithm ||
        r.n_particles != reports.front().n_particles) {
      throw std::invalid_argument(
          "fit_scaling: reports must share algorithm and N");
    }
  }
  std::vector<double> xs, ys;
  xs.reserve(reports.size());
  ys.reserve(reports.size());
  for (const auto& r : reports) {
    xs.push_back(static_cast<double>(r.d));
    if (model == FitModel::LogLinear) {
      if (!(r.mse_mc > 0.0)) {
        throw std::invalid_argument(
            "fit_scaling: LogLinear requires positive mse");
      }
      ys.push_back(std::log(r.mse_mc * r.n_particles / r.d));
    } else {
      ys.push_back(r.mse_mc);
    }
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  ScalingFit fit;
  fit.model = model;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 1e-300 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace gibbs_control
